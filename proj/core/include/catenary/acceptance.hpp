#pragma once

// The acceptance criteria as runnable checks, shared by `catenary check` and
// the acceptance test binary.

#include <string>
#include <string_view>
#include <vector>

namespace catenary::acceptance {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
};

inline constexpr int kCriterionCount = 11;

/// Criterion ids for a suite name: "all", a number "1".."11", or one of
/// el, conservation, gpoly, periodic, blowup, orthogonal, inversion,
/// equilibrium, stationarity, limit, io. Throws std::invalid_argument.
std::vector<int> suite(std::string_view name);

CriterionResult run(int id);
std::vector<CriterionResult> run_all(const std::vector<int>& ids);

/// One line: "[PASS] 3 g-polynomial exactness: ...".
std::string format(const CriterionResult& result);

}  // namespace catenary::acceptance
