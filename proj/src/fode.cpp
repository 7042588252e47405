#include "sadik/fode.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "sadik/mittag_leffler.hpp"

namespace sadik {

namespace {

void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw Error(ErrorCode::InvalidOrder, "order must lie in (0, 1]");
  }
}

constexpr double kStepLimit = 1e12;

}  // namespace

void RelaxationProblem::validate() const {
  check_gamma(gamma);
  if (!std::isfinite(b) || !std::isfinite(y0)) {
    throw Error(ErrorCode::InvalidParams, "b and y0 must be finite");
  }
}

void ForcedProblem::validate() const {
  check_gamma(gamma);
  if (!std::isfinite(u0)) throw Error(ErrorCode::InvalidParams, "u0 must be finite");
  if (!forcing) throw Error(ErrorCode::InvalidParams, "forcing function missing");
}

SampledSignal solve_relaxation(const RelaxationProblem& p, std::span<const double> grid) {
  p.validate();
  validate_grid(grid);
  const MittagLeffler e({p.gamma, 1.0, 0});
  std::vector<double> y;
  y.reserve(grid.size());
  for (double t : grid) y.push_back(p.y0 * e(p.b * std::pow(t, p.gamma)));
  return SampledSignal({grid.begin(), grid.end()}, std::move(y));
}

SampledSignal solve_forced(const ForcedProblem& p, std::span<const double> grid, int panels) {
  p.validate();
  validate_grid(grid);
  std::vector<double> u;
  u.reserve(grid.size());
  for (double t : grid) u.push_back(p.u0 + rl_integral(p.forcing, p.gamma, t, panels));
  return SampledSignal({grid.begin(), grid.end()}, std::move(u));
}

SampledSignal adams_oracle(double gamma, const FodeRhs& rhs, double y0, double h, double t_end,
                           int corrector_passes) {
  check_gamma(gamma);
  if (corrector_passes < 1) throw Error(ErrorCode::InvalidParams, "corrector_passes must be >= 1");
  if (!(h > 0.0) || !(t_end >= h) || !std::isfinite(t_end)) {
    throw Error(ErrorCode::InvalidGrid, "need h > 0 and t_end >= h");
  }
  const auto steps = static_cast<std::size_t>(std::llround(t_end / h));
  std::vector<double> t(steps + 1), y(steps + 1), g(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) t[k] = k * h;
  y[0] = y0;
  g[0] = rhs(0.0, y0);

  // (j)^{gamma} and (j)^{gamma+1} tables for the weights.
  std::vector<double> pw(steps + 2), pw1(steps + 2);
  for (std::size_t j = 0; j < pw.size(); ++j) {
    pw[j] = std::pow(static_cast<double>(j), gamma);
    pw1[j] = pw[j] * static_cast<double>(j);
  }
  const double pred_scale = std::pow(h, gamma) / std::tgamma(gamma + 1.0);
  const double corr_scale = std::pow(h, gamma) / std::tgamma(gamma + 2.0);

  for (std::size_t k = 0; k < steps; ++k) {
    // Predictor: b_{j,k+1} = (k+1-j)^gamma - (k-j)^gamma.
    double pred = 0.0;
    for (std::size_t j = 0; j <= k; ++j) pred += (pw[k + 1 - j] - pw[k - j]) * g[j];
    const double yp = y0 + pred_scale * pred;

    // Corrector: a_{0,k+1} = k^{g+1} - (k-gamma)(k+1)^gamma,
    // a_{j,k+1} = (k-j+2)^{g+1} + (k-j)^{g+1} - 2 (k-j+1)^{g+1}.
    const double kd = static_cast<double>(k);
    double corr = (pw1[k] - (kd - gamma) * pw[k + 1]) * g[0];
    for (std::size_t j = 1; j <= k; ++j) {
      corr += (pw1[k - j + 2] + pw1[k - j] - 2.0 * pw1[k - j + 1]) * g[j];
    }
    double yc = yp;
    for (int pass = 0; pass < corrector_passes; ++pass) {
      yc = y0 + corr_scale * (corr + rhs(t[k + 1], yc));
    }
    y[k + 1] = yc;
    if (!(std::abs(y[k + 1]) <= kStepLimit)) {
      std::ostringstream os;
      os << "|y| exceeded " << kStepLimit << " at t = " << t[k + 1];
      throw Error(ErrorCode::StepOverflow, os.str());
    }
    g[k + 1] = rhs(t[k + 1], y[k + 1]);
  }
  return SampledSignal(std::move(t), std::move(y));
}

bool check_exp_bound(const SampledSignal& sig, const ExpBound& bound) {
  if (sig.empty()) throw Error(ErrorCode::InvalidParams, "signal is empty");
  const auto t = sig.t();
  const auto y = sig.y();
  for (std::size_t i = 0; i < sig.size(); ++i) {
    if (t[i] < bound.T) continue;
    // Compare in log space so large sigma * t does not overflow.
    if (y[i] == 0.0) continue;
    if (std::log(std::abs(y[i])) > std::log(bound.M) + bound.sigma * t[i] + 1e-12) return false;
  }
  return true;
}

}  // namespace sadik
