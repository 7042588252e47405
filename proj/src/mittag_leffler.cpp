#include "sadik/mittag_leffler.hpp"

#include <quadmath.h>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "sadik/error.hpp"

namespace sadik {

namespace {

using quad = __float128;

constexpr double kTermRelTol = 1e-16;
constexpr int kMaxSeriesTerms = 2'000'000;
// Beyond this |z|^{1/p} a positive argument overflows double for any q we accept.
constexpr double kOverflowRadius = 1000.0;

struct LogCoeff {
  quad log_mag = 0;
  int sign = 0;  // 0 marks a vanishing coefficient
};

// log|c_k| and sign of c_k = ((k+m)!/k!) / Gamma(p(k+m)+q); q may be <= 0
// here because the derivative recursion shifts q downward.
LogCoeff log_coeff(double p, double q, int m, long k) {
  const quad x = static_cast<quad>(p) * static_cast<quad>(k + m) + static_cast<quad>(q);
  const quad lfact = m == 0 ? quad(0) : lgammaq(static_cast<quad>(k + m + 1)) -
                                            lgammaq(static_cast<quad>(k + 1));
  if (x > 0) return {lfact - lgammaq(x), 1};
  const quad r = roundq(x);
  if (x == r) return {0, 0};
  const quad s = sinq(M_PIq * (x - r));
  const bool odd = fmodq(fabsq(r), 2) != 0;
  const int sign = ((s > 0) != odd) ? 1 : -1;
  return {lfact + logq(fabsq(s)) + lgammaq(1 - x) - logq(M_PIq), sign};
}

// 1/Gamma(x) as (log magnitude, sign) in double.
struct LogRecip {
  double log_mag = 0.0;
  int sign = 0;
};

LogRecip log_rgamma(double x) {
  if (x > 0) return {-std::lgamma(x), 1};
  const double r = std::round(x);
  if (x == r) return {0.0, 0};
  const double s = std::sin(std::numbers::pi * (x - r));
  const bool odd = std::fmod(std::abs(r), 2.0) != 0.0;
  const int sign = ((s > 0) != odd) ? 1 : -1;
  return {std::log(std::abs(s)) + std::lgamma(1.0 - x) - std::log(std::numbers::pi), sign};
}

[[noreturn]] void fail(ErrorCode code, const MLSpec& s, double z, const char* why) {
  std::ostringstream os;
  os << "E^(" << s.m << ")_{" << s.p << "," << s.q << "}(" << z << "): " << why;
  throw Error(code, os.str());
}

double check_range(quad value, const MLSpec& s, double z) {
  if (fabsq(value) > static_cast<quad>(std::numeric_limits<double>::max())) {
    fail(ErrorCode::Overflow, s, z, "value exceeds double range");
  }
  return static_cast<double>(value);
}

// Power series sum in quad precision. `coeff(k)` supplies log|c_k| and sign.
template <class CoeffFn>
double sum_series(const MLSpec& s, double z, CoeffFn&& coeff) {
  const quad log_abs_z = logq(fabsq(static_cast<quad>(z)));
  const bool negative = z < 0;
  const double radius = std::pow(std::abs(z), 1.0 / s.p);
  const long max_terms = static_cast<long>(std::min<double>(
      kMaxSeriesTerms, std::ceil((6.0 * radius + 80.0) / s.p) + s.m + 50));
  // Terms with non-positive Gamma arguments (only for shifted q) are skipped
  // before the stopping rule is allowed to fire.
  const long first_regular = s.q > 0 ? 0 : static_cast<long>(std::ceil(-s.q / s.p)) + 1;

  quad sum = 0;
  quad max_mag = 0;
  quad prev_log = std::numeric_limits<double>::infinity();
  int small_run = 0;
  long k = 0;
  bool converged = false;
  for (; k < max_terms; ++k) {
    const LogCoeff c = coeff(k);
    quad log_mag = -std::numeric_limits<double>::infinity();
    if (c.sign != 0) {
      log_mag = static_cast<quad>(k) * log_abs_z + c.log_mag;
      const quad mag = expq(log_mag);
      const int sg = (negative && (k & 1)) ? -c.sign : c.sign;
      sum += sg > 0 ? mag : -mag;
      if (mag > max_mag) max_mag = mag;
    }
    const bool decreasing = log_mag <= prev_log;
    prev_log = log_mag;
    if (k >= first_regular && decreasing &&
        expq(log_mag) <= static_cast<quad>(kTermRelTol) * fabsq(sum)) {
      if (++small_run >= 3) {
        converged = true;
        break;
      }
    } else {
      small_run = 0;
    }
  }
  if (!converged) fail(ErrorCode::NonConvergent, s, z, "series did not converge");

  // Cancellation leaves roughly max|term| * eps_quad * sqrt(k) of rounding noise.
  const double noise = static_cast<double>(max_mag * FLT128_EPSILON) * std::sqrt(k + 1.0);
  const double value = check_range(sum, s, z);
  if (noise > 1e-12 * std::abs(value) && noise > 1e-14) {
    fail(ErrorCode::NonConvergent, s, z, "series cancellation exceeds tolerance");
  }
  return value;
}

double series_generic(const MLSpec& s, double z) {
  return sum_series(s, z, [&](long k) { return log_coeff(s.p, s.q, s.m, k); });
}

// E_{p,q}(z) for z < 0 and 0 < p < 2 with |z|^{1/p} large:
//   residues at z^{1/p} on the principal sheet, minus
//   sum_{k>=1} z^{-k} / Gamma(q - p k) truncated at its smallest term.
double asymptotic(double p, double q, double z) {
  const double abs_z = -z;
  const double log_abs_z = std::log(abs_z);
  double sum = 0.0;
  double prev_envelope = std::numeric_limits<double>::infinity();
  const int first_tail = static_cast<int>(std::ceil(q / p)) + 1;
  for (int k = 1; k < 1000; ++k) {
    const double x = q - p * k;
    const LogRecip r = log_rgamma(x);
    // |1/Gamma(x)| <= Gamma(1-x)/pi bounds the term even where sin(pi x) = 0.
    const double envelope =
        -k * log_abs_z + (x > 0 ? -std::lgamma(x) : std::lgamma(1.0 - x) - std::log(std::numbers::pi));
    if (k > first_tail && envelope > prev_envelope) break;
    prev_envelope = envelope;
    if (r.sign != 0) {
      const double mag = std::exp(-k * log_abs_z + r.log_mag);
      const int sign = (k & 1) ? -r.sign : r.sign;  // z^{-k} with z < 0
      sum -= sign * mag;
    }
    if (k > first_tail && envelope < std::log(1e-20) + std::log(std::abs(sum) + 1e-300)) break;
  }

  const double radius = std::pow(abs_z, 1.0 / p);
  if (p > 1.0) {
    // Both conjugate branches z^{1/p} = R exp(+-i pi/p) lie on the principal sheet.
    const std::complex<double> log_zeta(std::log(radius), std::numbers::pi / p);
    const std::complex<double> zeta = std::exp(log_zeta);
    sum += (2.0 / p) * std::exp((1.0 - q) * log_zeta + zeta).real();
  } else if (p == 1.0) {
    // Branch point on the contour: principal value, half of each side.
    sum += std::pow(abs_z, 1.0 - q) * std::cos(std::numbers::pi * (1.0 - q)) * std::exp(-abs_z);
  }
  return sum;
}

// m-th derivative from p z E'_{p,q} = E_{p,q-1} - (q-1) E_{p,q}, differentiated
// m-1 times; every call stays in the asymptotic regime at the same z.
double asymptotic_deriv(double p, double q, int m, double z) {
  if (m == 0) return asymptotic(p, q, z);
  const double shifted = asymptotic_deriv(p, q - 1.0, m - 1, z);
  const double same = asymptotic_deriv(p, q, m - 1, z);
  return (shifted - (q - 1.0 + p * (m - 1)) * same) / (p * z);
}

enum class Regime { Origin, Series, Asymptotic, Overflow };

Regime pick_regime(const MLSpec& s, double z) {
  if (z == 0.0) return Regime::Origin;
  const double radius = std::pow(std::abs(z), 1.0 / s.p);
  if (z > 0.0) return radius > kOverflowRadius ? Regime::Overflow : Regime::Series;
  if (radius <= kSeriesRadius || s.p >= 2.0) return Regime::Series;
  return Regime::Asymptotic;
}

double value_at_origin(const MLSpec& s) {
  // m! / Gamma(p m + q)
  const LogCoeff c = log_coeff(s.p, s.q, s.m, 0);
  return c.sign == 0 ? 0.0 : c.sign * static_cast<double>(expq(c.log_mag));
}

template <class SeriesFn>
double evaluate(const MLSpec& s, double z, SeriesFn&& series) {
  if (!std::isfinite(z)) fail(ErrorCode::InvalidParams, s, z, "argument must be finite");
  switch (pick_regime(s, z)) {
    case Regime::Origin: return value_at_origin(s);
    case Regime::Series: return series();
    case Regime::Asymptotic: {
      const double v = asymptotic_deriv(s.p, s.q, s.m, z);
      if (!std::isfinite(v)) fail(ErrorCode::NonConvergent, s, z, "asymptotic expansion failed");
      return v;
    }
    case Regime::Overflow: fail(ErrorCode::Overflow, s, z, "argument beyond overflow horizon");
  }
  return 0.0;
}

}  // namespace

void MLSpec::validate() const {
  if (!(p > 0.0) || !(q > 0.0) || m < 0 || !std::isfinite(p) || !std::isfinite(q)) {
    std::ostringstream os;
    os << "require p > 0, q > 0, m >= 0 (p=" << p << ", q=" << q << ", m=" << m << ")";
    throw Error(ErrorCode::InvalidParams, os.str());
  }
}

MittagLeffler::MittagLeffler(MLSpec spec) : spec_(spec) {
  spec_.validate();
  const long count = static_cast<long>(std::ceil((5.0 * kSeriesRadius + 60.0) / spec_.p)) +
                     spec_.m + 10;
  ratio_hi_.reserve(count);
  ratio_lo_.reserve(count);
  // q > 0 here, so every coefficient is positive and the ratios are finite.
  quad prev = 0;
  for (long k = 0; k < count; ++k) {
    const quad log_mag = log_coeff(spec_.p, spec_.q, spec_.m, k).log_mag;
    const quad r = expq(k == 0 ? log_mag : log_mag - prev);
    prev = log_mag;
    const double hi = static_cast<double>(r);
    ratio_hi_.push_back(hi);
    ratio_lo_.push_back(static_cast<double>(r - static_cast<quad>(hi)));
  }
}

double MittagLeffler::operator()(double z) const {
  return evaluate(spec_, z, [&] {
    // Term recurrence in quad; one multiply per term instead of an exp.
    const quad zq = z;
    quad term = static_cast<quad>(ratio_hi_[0]) + static_cast<quad>(ratio_lo_[0]);
    quad sum = term;
    quad max_mag = fabsq(term);
    quad prev = max_mag;
    int small_run = 0;
    const auto cached = static_cast<long>(ratio_hi_.size());
    for (long k = 1; k < cached; ++k) {
      term *= zq * (static_cast<quad>(ratio_hi_[k]) + static_cast<quad>(ratio_lo_[k]));
      sum += term;
      const quad mag = fabsq(term);
      if (mag > max_mag) max_mag = mag;
      const bool decreasing = mag <= prev;
      prev = mag;
      if (decreasing && mag <= static_cast<quad>(kTermRelTol) * fabsq(sum)) {
        if (++small_run < 3) continue;
        const double noise = static_cast<double>(max_mag * FLT128_EPSILON) * std::sqrt(k + 1.0);
        const double value = check_range(sum, spec_, z);
        if (noise > 1e-12 * std::abs(value) && noise > 1e-14) {
          fail(ErrorCode::NonConvergent, spec_, z, "series cancellation exceeds tolerance");
        }
        return value;
      } else {
        small_run = 0;
      }
    }
    return series_generic(spec_, z);
  });
}

double ml(const MLSpec& spec, double z) {
  spec.validate();
  if (spec.m != 0) throw Error(ErrorCode::InvalidParams, "ml() requires m == 0; use ml_deriv");
  return evaluate(spec, z, [&] { return series_generic(spec, z); });
}

double ml_deriv(const MLSpec& spec, double z) {
  spec.validate();
  return evaluate(spec, z, [&] { return series_generic(spec, z); });
}

double ml_series_term(const MLSpec& spec, double z, int k) {
  spec.validate();
  if (k < 0) throw Error(ErrorCode::InvalidParams, "term index must be >= 0");
  const LogCoeff c = log_coeff(spec.p, spec.q, spec.m, k);
  if (c.sign == 0) return 0.0;
  if (z == 0.0) return k == 0 ? c.sign * static_cast<double>(expq(c.log_mag)) : 0.0;
  const quad mag = expq(static_cast<quad>(k) * logq(fabsq(static_cast<quad>(z))) + c.log_mag);
  const int sign = (z < 0 && (k & 1)) ? -c.sign : c.sign;
  return sign * static_cast<double>(mag);
}

}  // namespace sadik
