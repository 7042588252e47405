#include "sadik/fractional_ops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sadik/error.hpp"
#include "sadik/quadrature.hpp"

namespace sadik {

namespace {

void check_panels(int grid_n) {
  if (grid_n < 2) throw Error(ErrorCode::InvalidGrid, "grid_n must be >= 2");
}

void check_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::InvalidParams, "evaluation time must be finite and > 0");
  }
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// sum_j (-1)^j C(n,j) f(x + (n/2 - j) h) / h^n
double central_difference(const RealFn& f, int n, double x, double h) {
  double acc = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    acc += sign * binomial(n, j) * f(x + (0.5 * n - j) * h);
  }
  return acc / std::pow(h, n);
}

// Integral at grid_n and 2 grid_n panels; throws when they disagree.
double refined_kernel_integral(const RealFn& g, double t, double mu, int grid_n, double rtol,
                               const char* what) {
  const auto coarse = quadrature::power_kernel_integral(g, t, mu, grid_n);
  const auto fine = quadrature::power_kernel_integral(g, t, mu, 2 * grid_n);
  const double diff = std::abs(fine.value - coarse.value);
  const double scale = std::max(std::abs(fine.value), 1e-3 * fine.magnitude);
  if (diff > rtol * scale && diff > 1e-300) {
    std::ostringstream os;
    os << what << " at t=" << t << ": panels " << grid_n << " and " << 2 * grid_n
       << " disagree (" << coarse.value << " vs " << fine.value << ")";
    throw Error(ErrorCode::QuadratureFailure, os.str());
  }
  return fine.value;
}

}  // namespace

FracOrder::FracOrder(double gamma) : gamma_(gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::InvalidOrder, "fractional order must be finite and > 0");
  }
  const double fl = std::floor(gamma);
  n_ = fl == gamma ? static_cast<int>(gamma) : static_cast<int>(fl) + 1;
}

double central_derivative(const RealFn& f, int n, double x, double h) {
  if (n == 0) return f(x);
  const double coarse = central_difference(f, n, x, h);
  const double fine = central_difference(f, n, x, 0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

double rl_integral(const RealFn& f, double gamma, double t, int grid_n) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::InvalidOrder, "integration order must be >= 0");
  }
  check_panels(grid_n);
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::InvalidParams, "evaluation time must be finite and >= 0");
  }
  if (gamma == 0.0) return f(t);
  if (t == 0.0) return 0.0;
  return quadrature::power_kernel_integral(f, t, gamma, grid_n).value / std::tgamma(gamma);
}

double caputo_derivative(const RealFn& f, const FracOrder& order, double t, int grid_n,
                         const RealFn& nth_derivative, double rtol) {
  if (order.is_integer()) {
    throw Error(ErrorCode::InvalidOrder, "integer order: use an ordinary derivative");
  }
  check_panels(grid_n);
  check_time(t);
  const int n = order.n();
  RealFn dn = nth_derivative;
  if (!dn) {
    const double base = 1e-4 * std::max(1.0, t);
    dn = [&f, n, base](double tau) {
      return central_derivative(f, n, tau, std::min(base, tau / n));
    };
  }
  const double mu = n - order.gamma();
  return refined_kernel_integral(dn, t, mu, grid_n, rtol, "Caputo derivative") /
         std::tgamma(mu);
}

double rl_derivative(const RealFn& f, const FracOrder& order, double t, int grid_n,
                     double fd_step, double rtol) {
  check_panels(grid_n);
  check_time(t);
  if (!(fd_step > 0.0)) throw Error(ErrorCode::InvalidParams, "fd_step must be > 0");
  const int n = order.n();
  const double mu = n - order.gamma();
  if (mu == 0.0) {
    return central_derivative(f, n, t, std::min(fd_step, t / n));
  }
  const double h = std::min(fd_step, t / n);
  auto g = [&](double s) {
    return refined_kernel_integral(f, s, mu, grid_n, rtol, "RL derivative") / std::tgamma(mu);
  };
  return central_derivative(g, n, t, h);
}

}  // namespace sadik
