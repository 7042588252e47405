#pragma once

#include <vector>

namespace sadik {

/// Parameters of E^{(m)}_{p,q}: the m-th derivative of the two-parameter
/// Mittag-Leffler function E_{p,q}(z) = sum_k z^k / Gamma(p k + q).
struct MLSpec {
  double p = 1.0;
  double q = 1.0;
  int m = 0;

  void validate() const;
};

/// Arguments with |z|^{1/p} up to this radius are summed as a power series
/// in quad precision; beyond it, negative arguments with p < 2 switch to
/// the asymptotic expansion.
inline constexpr double kSeriesRadius = 36.0;

/// Evaluator for a fixed MLSpec. The series coefficients needed inside
/// kSeriesRadius are computed once at construction, so repeated evaluation
/// (quadrature integrands, response grids) stays cheap. Immutable after
/// construction.
class MittagLeffler {
 public:
  explicit MittagLeffler(MLSpec spec);

  const MLSpec& spec() const noexcept { return spec_; }

  /// E^{(m)}_{p,q}(z). Throws Overflow when the value exceeds the double
  /// range and NonConvergent when no regime reaches its tolerance.
  double operator()(double z) const;

 private:
  MLSpec spec_;
  // c_0 followed by the ratios c_k / c_{k-1}, each an unevaluated sum of two
  // doubles so the header stays free of compiler-specific float types.
  std::vector<double> ratio_hi_;
  std::vector<double> ratio_lo_;
};

/// E_{p,q}(z); spec.m must be 0.
double ml(const MLSpec& spec, double z);

/// E^{(m)}_{p,q}(z) = sum_k ((k+m)!/k!) z^k / Gamma(p(k+m)+q).
double ml_deriv(const MLSpec& spec, double z);

/// k-th term of the defining power series of E^{(m)}_{p,q} at z, in double.
double ml_series_term(const MLSpec& spec, double z, int k);

}  // namespace sadik
