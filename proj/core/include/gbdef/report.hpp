#pragma once

#include <optional>
#include <string>
#include <vector>

namespace gbdef {

/// One named check. `order` is set for checks indexed by a power of t.
struct CheckResult {
  std::string name;
  bool passed = true;
  std::string witness;
  std::optional<int> order;
};

struct VerificationReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  /// Failing check with the smallest order (unordered checks count as order 0); nullptr if all pass.
  const CheckResult* first_failure() const;
  /// Smallest order among failing checks; nullopt when everything passes.
  std::optional<int> first_failing_order() const;
  /// Names of the failing checks at first_failing_order(), sorted and deduplicated.
  std::vector<std::string> failing_names_at_first_order() const;
  /// Name-wise lookup; nullptr when absent.
  const CheckResult* find(const std::string& name, std::optional<int> order = {}) const;
};

}  // namespace gbdef
