#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gbdef/report.hpp"

namespace gbdef::cli {

enum class Verdict { pass, fail, error };

int exit_code(Verdict v);

struct InputDigest {
  std::string path;
  std::string sha256;
};

struct CheckLine {
  std::string name;
  std::optional<int> order;
  bool passed = true;
  std::string witness;
};

/// Exact-arithmetic cochains and files travel as their text format.
struct Artifact {
  std::string label;
  std::string text;
};

/// Everything a command reports. Both renderings walk the same fields, so the
/// human and machine outputs carry the same data.
struct Report {
  std::vector<std::string> command;
  std::vector<InputDigest> inputs;
  std::vector<CheckLine> checks;
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  std::vector<Artifact> artifacts;
  std::vector<std::string> written;
  std::optional<std::string> error;
  Verdict verdict = Verdict::pass;

  void add_checks(const VerificationReport& r);
  /// Fails the verdict when any check failed.
  void settle_by_checks();
};

nlohmann::ordered_json to_json(const Report& r);
std::string render_text(const Report& r);
std::string render_machine(const Report& r);

}  // namespace gbdef::cli
