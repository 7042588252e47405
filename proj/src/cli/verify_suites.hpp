#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace sadik::cli {

struct CheckResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;  // worst error seen (relative unless noted in detail)
  double tol = 0.0;
  std::string detail;
};

struct Suite {
  std::string_view name;
  std::function<std::vector<CheckResult>()> run;
};

/// Theorem self-checks in a fixed order: table, derivative, caputo,
/// convolution, delay, ivt, fvt, tn, inversion.
const std::vector<Suite>& verification_suites();

}  // namespace sadik::cli
