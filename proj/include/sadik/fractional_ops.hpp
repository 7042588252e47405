#pragma once

#include <functional>

namespace sadik {

using RealFn = std::function<double(double)>;

/// Order gamma > 0 with n = floor(gamma) + 1 for non-integer gamma and
/// n = gamma otherwise, so that n - 1 < gamma <= n.
class FracOrder {
 public:
  explicit FracOrder(double gamma);

  double gamma() const noexcept { return gamma_; }
  int n() const noexcept { return n_; }
  bool is_integer() const noexcept { return static_cast<double>(n_) == gamma_; }

 private:
  double gamma_;
  int n_;
};

inline constexpr int kDefaultPanels = 16;
inline constexpr double kDefaultRefineRtol = 1e-6;

/// Riemann-Liouville integral (1/Gamma(gamma)) int_0^t (t-tau)^{gamma-1} f(tau) dtau.
/// gamma == 0 returns f(t). Product integration on grid_n panels; f is never
/// evaluated at tau = 0, so integrable singularities there are allowed.
double rl_integral(const RealFn& f, double gamma, double t, int grid_n = kDefaultPanels);

/// Caputo derivative (1/Gamma(n-gamma)) int_0^t (t-tau)^{n-gamma-1} f^{(n)}(tau) dtau.
/// nth_derivative supplies f^{(n)}; when empty, f^{(n)} is taken by central
/// differences (step min(1e-4 max(1,t), tau/n)) with one Richardson step.
/// The result at grid_n and 2 grid_n panels must agree within rtol.
double caputo_derivative(const RealFn& f, const FracOrder& order, double t,
                         int grid_n = kDefaultPanels, const RealFn& nth_derivative = {},
                         double rtol = kDefaultRefineRtol);

/// Riemann-Liouville derivative (d/dt)^n I^{n-gamma} f(t) by an n-th order
/// central difference with step fd_step (shrunk to keep the stencil in t > 0).
double rl_derivative(const RealFn& f, const FracOrder& order, double t,
                     int grid_n = kDefaultPanels, double fd_step = 1e-3,
                     double rtol = kDefaultRefineRtol);

/// n-th derivative of f at x by central differences of step h, refined once
/// by Richardson extrapolation (h and h/2).
double central_derivative(const RealFn& f, int n, double x, double h);

}  // namespace sadik
