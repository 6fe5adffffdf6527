#include "report.hpp"

#include <sstream>

namespace gbdef::cli {

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::pass: return 0;
    case Verdict::fail: return 1;
    case Verdict::error: return 2;
  }
  return 2;
}

namespace {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::error: return "error";
  }
  return "error";
}

}  // namespace

void Report::add_checks(const VerificationReport& r) {
  for (const auto& c : r.checks) checks.push_back({c.name, c.order, c.passed, c.witness});
}

void Report::settle_by_checks() {
  for (const auto& c : checks) {
    if (!c.passed && verdict == Verdict::pass) verdict = Verdict::fail;
  }
}

nlohmann::ordered_json to_json(const Report& r) {
  nlohmann::ordered_json out;
  out["command"] = r.command;
  auto& inputs = out["inputs"] = nlohmann::ordered_json::array();
  for (const auto& in : r.inputs) inputs.push_back({{"path", in.path}, {"sha256", in.sha256}});
  auto& checks = out["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["order"] = c.order ? nlohmann::ordered_json(*c.order) : nlohmann::ordered_json(nullptr);
    j["passed"] = c.passed;
    j["witness"] = c.witness;
    checks.push_back(std::move(j));
  }
  out["results"] = r.results;
  auto& arts = out["artifacts"] = nlohmann::ordered_json::array();
  for (const auto& a : r.artifacts) arts.push_back({{"label", a.label}, {"text", a.text}});
  out["written"] = r.written;
  out["error"] = r.error ? nlohmann::ordered_json(*r.error) : nlohmann::ordered_json(nullptr);
  out["verdict"] = verdict_name(r.verdict);
  return out;
}

std::string render_machine(const Report& r) { return to_json(r).dump(2) + "\n"; }

std::string render_text(const Report& r) {
  std::ostringstream out;
  out << "command:";
  for (const auto& w : r.command) out << " " << w;
  out << "\n";
  for (const auto& in : r.inputs) out << "input " << in.path << " sha256 " << in.sha256 << "\n";
  for (const auto& c : r.checks) {
    out << "check " << c.name;
    if (c.order) out << " order " << *c.order;
    out << ": " << (c.passed ? "pass" : "FAIL");
    if (!c.witness.empty()) out << " (" << c.witness << ")";
    out << "\n";
  }
  for (const auto& [key, value] : r.results.items()) {
    out << key << " = " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
  }
  for (const auto& a : r.artifacts) {
    out << "--- " << a.label << "\n" << a.text;
    if (!a.text.empty() && a.text.back() != '\n') out << "\n";
  }
  for (const auto& w : r.written) out << "wrote " << w << "\n";
  if (r.error) out << "error: " << *r.error << "\n";
  out << "verdict: " << verdict_name(r.verdict) << "\n";
  return out.str();
}

}  // namespace gbdef::cli
