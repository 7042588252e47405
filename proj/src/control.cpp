#include "sadik/control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sadik/mittag_leffler.hpp"

namespace sadik {

TransferFunction::TransferFunction(std::vector<TransferTerm> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw Error(ErrorCode::InvalidParams, "transfer function needs terms");
  if (terms_.front().r == 0.0) {
    throw Error(ErrorCode::InvalidParams, "leading coefficient must be non-zero");
  }
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const auto& t = terms_[k];
    if (!std::isfinite(t.r) || !std::isfinite(t.gamma) || t.gamma < 0.0) {
      throw Error(ErrorCode::InvalidParams, "terms need finite r and order >= 0");
    }
    if (k > 0 && !(terms_[k - 1].gamma > t.gamma)) {
      throw Error(ErrorCode::InvalidParams, "orders must be strictly decreasing");
    }
  }
}

std::complex<double> TransferFunction::characteristic(const ComplexV& v,
                                                      const SadikParams& params) const {
  std::complex<double> sum = 0.0;
  for (const auto& t : terms_) sum += t.r * v.pow(t.gamma * params.alpha());
  return sum;
}

std::vector<std::complex<double>> TransferFunction::zeros() const {
  // P(w) = sum r_k e^{gamma_k w} with w = log s, |Im w| < pi. Newton from a
  // grid of starting points; duplicates merged.
  auto P = [&](std::complex<double> w) {
    std::complex<double> f = 0.0, df = 0.0;
    for (const auto& t : terms_) {
      const auto e = t.r * std::exp(t.gamma * w);
      f += e;
      df += t.gamma * e;
    }
    return std::pair{f, df};
  };
  std::vector<std::complex<double>> found;
  for (double re = -6.0; re <= 6.0; re += 1.0) {
    for (double im = -3.0; im <= 3.0; im += 0.5) {
      std::complex<double> w(re, im);
      bool ok = false;
      for (int it = 0; it < 100; ++it) {
        const auto [f, df] = P(w);
        if (std::abs(df) == 0.0) break;
        const auto step = f / df;
        w -= step;
        if (!std::isfinite(w.real()) || std::abs(w.real()) > 60.0) break;
        if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(w))) {
          ok = true;
          break;
        }
      }
      if (!ok || std::abs(w.imag()) >= std::numbers::pi) continue;
      const auto s = std::exp(w);
      const auto scale = std::abs(P(w).second) + 1e-300;
      if (std::abs(P(w).first) > 1e-9 * scale) continue;
      const bool dup = std::any_of(found.begin(), found.end(), [&](auto z) {
        return std::abs(z - s) <= 1e-8 * std::max(1.0, std::abs(s));
      });
      if (!dup) found.push_back(s);
    }
  }
  return found;
}

double TransferFunction::abscissa() const {
  double sigma = 0.0;
  for (auto z : zeros()) sigma = std::max(sigma, z.real());
  return sigma;
}

double TransferFunction::imaginary_reach() const {
  double reach = 0.0;
  for (auto z : zeros()) reach = std::max(reach, std::abs(z.imag()));
  return reach;
}

double transfer_eval(const TransferFunction& tf, const SadikParams& params, double v,
                     double pole_guard) {
  params.require_numeric();
  if (!(v > 0.0)) throw Error(ErrorCode::InvalidParams, "evaluation point v must be > 0");
  double sum = 0.0, scale = 0.0;
  for (const auto& t : tf.terms()) {
    const double term = t.r * std::pow(v, t.gamma * params.alpha());
    sum += term;
    scale = std::max(scale, std::abs(term));
  }
  if (std::abs(sum) < pole_guard * scale) {
    std::ostringstream os;
    os << "characteristic polynomial vanishes at v = " << v;
    throw Error(ErrorCode::PoleAtEvaluationPoint, os.str());
  }
  return 1.0 / sum;
}

std::complex<double> transfer_eval(const TransferFunction& tf, const SadikParams& params,
                                   const ComplexV& v) {
  params.require_numeric();
  return 1.0 / tf.characteristic(v, params);
}

TransformImage two_term_image(double r, double d, double gamma) {
  if (r == 0.0 || !(gamma > 0.0)) {
    throw Error(ErrorCode::InvalidParams, "need r != 0 and gamma > 0");
  }
  return TransformImage({ImageTerm{1.0 / r, {}, 0.0, {{gamma, -d / r, 1}}}});
}

namespace {

void check_two_term(double r, double d, double gamma) {
  if (r == 0.0 || !std::isfinite(r) || !std::isfinite(d) || !(gamma > 0.0)) {
    throw Error(ErrorCode::InvalidParams, "need r != 0, finite d and gamma > 0");
  }
}

}  // namespace

SampledSignal impulse_response(double r, double d, double gamma, std::span<const double> grid) {
  check_two_term(r, d, gamma);
  validate_grid(grid);
  if (!grid.empty() && !(grid.front() > 0.0)) {
    throw Error(ErrorCode::InvalidGrid, "impulse response needs t > 0");
  }
  const MittagLeffler e({gamma, gamma, 0});
  std::vector<double> y;
  y.reserve(grid.size());
  for (double t : grid) {
    const double tg = std::pow(t, gamma);
    y.push_back(tg / t * e(-(d / r) * tg) / r);
  }
  return SampledSignal({grid.begin(), grid.end()}, std::move(y));
}

SampledSignal step_response(double r, double d, double gamma, std::span<const double> grid) {
  check_two_term(r, d, gamma);
  validate_grid(grid);
  const MittagLeffler e({gamma, gamma + 1.0, 0});
  std::vector<double> y;
  y.reserve(grid.size());
  for (double t : grid) {
    const double tg = std::pow(t, gamma);
    y.push_back(t == 0.0 ? 0.0 : tg * e(-(d / r) * tg) / r);
  }
  return SampledSignal({grid.begin(), grid.end()}, std::move(y));
}

namespace {

SampledSignal invert_on_grid(const TransferFunction& tf, const SadikParams& params,
                             std::span<const double> grid, InversionOptions options,
                             const AffineExponent& input_exponent, bool allow_zero) {
  params.require_numeric();
  validate_grid(grid);
  options.sigma0 = std::max(options.sigma0, tf.abscissa());
  const double reach = tf.imaginary_reach();
  const ComplexImageFn phi = [&](const ComplexV& v) {
    return v.pow(input_exponent.eval(params)) * transfer_eval(tf, params, v);
  };
  std::vector<double> y;
  y.reserve(grid.size());
  for (double t : grid) {
    if (t == 0.0) {
      if (!allow_zero) throw Error(ErrorCode::InvalidGrid, "impulse response needs t > 0");
      y.push_back(0.0);
      continue;
    }
    InversionOptions local = options;
    while (local.min_nodes < 3.0 * reach * t) local.min_nodes *= 2;
    local.max_nodes = std::max(local.max_nodes, 4 * local.min_nodes);
    y.push_back(inverse_numeric(phi, params, t, local));
  }
  return SampledSignal({grid.begin(), grid.end()}, std::move(y));
}

}  // namespace

SampledSignal impulse_response_numeric(const TransferFunction& tf, const SadikParams& params,
                                       std::span<const double> grid,
                                       const InversionOptions& options) {
  return invert_on_grid(tf, params, grid, options, {0.0, -1.0, 0.0}, false);
}

SampledSignal step_response_numeric(const TransferFunction& tf, const SadikParams& params,
                                    std::span<const double> grid,
                                    const InversionOptions& options) {
  return invert_on_grid(tf, params, grid, options, {-1.0, -1.0, 0.0}, true);
}

}  // namespace sadik
