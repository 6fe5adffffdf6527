#include "gbdef/report.hpp"

#include <algorithm>

namespace gbdef {

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* VerificationReport::first_failure() const {
  const CheckResult* best = nullptr;
  for (const auto& c : checks) {
    if (c.passed) continue;
    if (!best || c.order.value_or(0) < best->order.value_or(0)) best = &c;
  }
  return best;
}

std::optional<int> VerificationReport::first_failing_order() const {
  const CheckResult* c = first_failure();
  if (!c) return std::nullopt;
  return c->order.value_or(0);
}

std::vector<std::string> VerificationReport::failing_names_at_first_order() const {
  std::vector<std::string> out;
  auto first = first_failing_order();
  if (!first) return out;
  for (const auto& c : checks) {
    if (!c.passed && c.order.value_or(0) == *first) out.push_back(c.name);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

const CheckResult* VerificationReport::find(const std::string& name, std::optional<int> order) const {
  for (const auto& c : checks) {
    if (c.name == name && (!order || c.order == order)) return &c;
  }
  return nullptr;
}

}  // namespace gbdef
