#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace sadik::quadrature {

using RealFn = std::function<double(double)>;

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss rule for the weight (1-x)^a (1+x)^b on [-1, 1], a, b > -1
/// (Golub-Welsch on the Jacobi matrix).
Rule gauss_jacobi(int n, double a, double b);

/// Cached 8-point Gauss-Legendre rule.
const Rule& gauss_legendre8();

struct AdaptiveOptions {
  double epsabs = 0.0;
  double epsrel = 1e-10;
  int max_intervals = 4000;
};

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  std::vector<std::pair<double, double>> segments;  // final partition
};

/// Globally adaptive Gauss-Kronrod (7/15) on [a, b]. Interior breakpoints
/// split the interval before adaptation starts. Throws QuadratureFailure if
/// the error target is not met within max_intervals.
AdaptiveResult integrate(const RealFn& f, double a, double b,
                         std::span<const double> breakpoints = {},
                         const AdaptiveOptions& options = {});

/// Applies the 15-point Kronrod rule on each given segment (no adaptation).
/// Reusing a partition from integrate() keeps the result smooth in any
/// parameter the integrand depends on.
double integrate_on(const RealFn& f, std::span<const std::pair<double, double>> segments);

struct KernelIntegral {
  double value = 0.0;
  double magnitude = 0.0;  // same rule applied to |g|; scale for tolerance checks
};

/// int_0^t (t - tau)^{mu - 1} g(tau) dtau for mu > 0 on `panels` uniform
/// panels. The panel touching tau = t carries the kernel singularity inside
/// a Gauss-Jacobi weight; the panel touching 0 is graded geometrically so
/// integrable singularities of g at the origin are resolved. g is never
/// evaluated at either endpoint.
KernelIntegral power_kernel_integral(const RealFn& g, double t, double mu, int panels);

}  // namespace sadik::quadrature
