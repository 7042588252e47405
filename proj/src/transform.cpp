#include "sadik/transform.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "sadik/quadrature.hpp"

namespace sadik {

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

// Both ends of the v^alpha sequence used by the limit estimators.
constexpr double kLimitSequenceLarge[] = {1e3, 1e4, 1e5, 1e6};
constexpr double kLimitSequenceSmall[] = {1e-3, 1e-4, 1e-5, 1e-6};
constexpr double kLimitTol = 1e-4;

// Decay budget for the truncated forward integral: e^{-40} ~ 4e-18.
constexpr double kDecayBudget = 40.0;

}  // namespace

KnownFunction KnownFunction::power(int n) {
  KnownFunction f;
  f.kind = FunctionKind::Power;
  f.n = n;
  f.validate();
  return f;
}

KnownFunction KnownFunction::exponential(double a) {
  KnownFunction f;
  f.kind = FunctionKind::Exponential;
  f.a = a;
  f.validate();
  return f;
}

KnownFunction KnownFunction::sine(double a) {
  KnownFunction f;
  f.kind = FunctionKind::Sine;
  f.a = a;
  f.validate();
  return f;
}

KnownFunction KnownFunction::heaviside(double a) {
  KnownFunction f;
  f.kind = FunctionKind::Heaviside;
  f.a = a;
  f.validate();
  return f;
}

KnownFunction KnownFunction::dirac() {
  KnownFunction f;
  f.kind = FunctionKind::Dirac;
  return f;
}

KnownFunction KnownFunction::ml_kernel(double p, double q, int m, double a, int sign) {
  KnownFunction f;
  f.kind = FunctionKind::MLKernel;
  f.ml = MLSpec{p, q, m};
  f.a = a;
  f.sign = sign;
  f.validate();
  return f;
}

void KnownFunction::validate() const {
  switch (kind) {
    case FunctionKind::Power:
      if (n < 0) throw Error(ErrorCode::InvalidParams, "power requires n >= 0");
      break;
    case FunctionKind::Exponential:
    case FunctionKind::Sine:
      if (!std::isfinite(a)) throw Error(ErrorCode::InvalidParams, "rate must be finite");
      break;
    case FunctionKind::Heaviside:
      if (!(a >= 0.0) || !std::isfinite(a)) {
        throw Error(ErrorCode::InvalidParams, "heaviside shift must be finite and >= 0");
      }
      break;
    case FunctionKind::MLKernel:
      ml.validate();
      if (sign != 1 && sign != -1) throw Error(ErrorCode::InvalidParams, "sign must be +1 or -1");
      if (!std::isfinite(a)) throw Error(ErrorCode::InvalidParams, "rate must be finite");
      break;
    case FunctionKind::One:
    case FunctionKind::Dirac:
      break;
  }
}

double KnownFunction::operator()(double t) const {
  switch (kind) {
    case FunctionKind::One: return 1.0;
    case FunctionKind::Power: return n == 0 ? 1.0 : std::pow(t, n);
    case FunctionKind::Exponential: return std::exp(a * t);
    case FunctionKind::Sine: return std::sin(a * t);
    case FunctionKind::Heaviside: return t >= a ? 1.0 : 0.0;
    case FunctionKind::Dirac:
      throw Error(ErrorCode::UnsupportedFunction, "dirac delta has no pointwise values");
    case FunctionKind::MLKernel:
      return std::pow(t, ml.p * ml.m + ml.q - 1.0) * ml_deriv(ml, sign * a * std::pow(t, ml.p));
  }
  return 0.0;
}

double KnownFunction::growth_rate() const {
  switch (kind) {
    case FunctionKind::Exponential: return std::max(a, 0.0);
    case FunctionKind::MLKernel: return sign * a > 0.0 ? std::pow(sign * a, 1.0 / ml.p) : 0.0;
    default: return 0.0;
  }
}

std::string KnownFunction::describe() const {
  std::ostringstream os;
  switch (kind) {
    case FunctionKind::One: os << "1"; break;
    case FunctionKind::Power: os << "t^" << n; break;
    case FunctionKind::Exponential: os << "exp(" << a << " t)"; break;
    case FunctionKind::Sine: os << "sin(" << a << " t)"; break;
    case FunctionKind::Heaviside: os << "H(t - " << a << ")"; break;
    case FunctionKind::Dirac: os << "delta(t)"; break;
    case FunctionKind::MLKernel:
      os << "t^" << (ml.p * ml.m + ml.q - 1.0) << " E^(" << ml.m << ")_{" << ml.p << "," << ml.q
         << "}(" << (sign > 0 ? "" : "-") << a << " t^" << ml.p << ")";
      break;
  }
  return os.str();
}

TransformImage image_of(const KnownFunction& f) {
  f.validate();
  switch (f.kind) {
    case FunctionKind::One: return TransformImage::monomial(1.0, {-1.0, -1.0, 0.0});
    case FunctionKind::Power:
      return TransformImage::monomial(factorial(f.n), {-(f.n + 1.0), -1.0, 0.0});
    case FunctionKind::Exponential:
      return TransformImage({ImageTerm{1.0, {0.0, -1.0, 0.0}, 0.0, {{1.0, f.a, 1}}}});
    case FunctionKind::Sine:
      if (f.a == 0.0) return {};
      return TransformImage({ImageTerm{f.a, {0.0, -1.0, 0.0}, 0.0, {{2.0, -f.a * f.a, 1}}}});
    case FunctionKind::Heaviside:
      return TransformImage::monomial(1.0, {-1.0, -1.0, 0.0}).delayed(f.a);
    case FunctionKind::Dirac:
      // v^-beta, so that v^{alpha+beta} Phi and v^beta Phi1 Phi2 behave as for
      // every other entry; equals 1 at beta = 0.
      return TransformImage::monomial(1.0, {0.0, -1.0, 0.0});
    case FunctionKind::MLKernel:
      return TransformImage({ImageTerm{factorial(f.ml.m),
                                       {f.ml.p - f.ml.q, -1.0, 0.0},
                                       0.0,
                                       {{f.ml.p, f.sign * f.a, f.ml.m + 1}}}});
  }
  throw Error(ErrorCode::UnsupportedFunction, "no table entry");
}

namespace {

struct ForwardIntegral {
  double value = 0.0;
  std::vector<std::pair<double, double>> segments;
};

// int_start^inf exp(-s t) f(t) dt: truncated at the decay budget, then
// extended by doubling chunks until a chunk no longer contributes.
ForwardIntegral laplace_integral(const RealFn& f, double s, const ForwardOptions& options) {
  if (!(s > options.growth)) {
    std::ostringstream os;
    os << "v^alpha = " << s << " does not exceed the growth rate " << options.growth;
    throw Error(ErrorCode::DivergentTransform, os.str());
  }
  const RealFn integrand = [&](double t) { return std::exp(-s * t) * f(t); };
  const double start = options.support_start;
  double width = kDecayBudget / (s - options.growth);

  quadrature::AdaptiveOptions qopt;
  qopt.epsrel = options.epsrel;
  auto head = quadrature::integrate(integrand, start, start + width, options.breakpoints, qopt);
  ForwardIntegral out{head.value, std::move(head.segments)};

  double lo = start + width;
  for (int i = 0; i < 60; ++i) {
    quadrature::AdaptiveOptions tail_opt = qopt;
    tail_opt.epsabs = options.epsrel * std::abs(out.value);
    auto chunk = quadrature::integrate(integrand, lo, lo + width, options.breakpoints, tail_opt);
    out.value += chunk.value;
    out.segments.insert(out.segments.end(), chunk.segments.begin(), chunk.segments.end());
    if (std::abs(chunk.value) <= 1e-3 * options.epsrel * std::abs(out.value) || chunk.value == 0.0) {
      return out;
    }
    lo += width;
    width *= 2.0;
  }
  throw Error(ErrorCode::QuadratureFailure, "transform integral tail does not decay");
}

void check_v(const SadikParams& params, double v) {
  params.require_numeric();
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::InvalidParams, "evaluation point v must be finite and > 0");
  }
}

}  // namespace

double forward_numeric(const RealFn& f, const SadikParams& params, double v,
                       const ForwardOptions& options) {
  check_v(params, v);
  const double s = std::pow(v, params.alpha());
  return std::pow(v, -params.beta()) * laplace_integral(f, s, options).value;
}

double forward_numeric(const KnownFunction& f, const SadikParams& params, double v) {
  f.validate();
  ForwardOptions options;
  options.growth = f.growth_rate();
  switch (f.kind) {
    case FunctionKind::Dirac:
      throw Error(ErrorCode::UnsupportedFunction, "dirac delta is table-only");
    case FunctionKind::Heaviside:
      options.support_start = f.a;
      break;
    case FunctionKind::MLKernel: {
      auto e = std::make_shared<const MittagLeffler>(f.ml);
      const double expo = f.ml.p * f.ml.m + f.ml.q - 1.0;
      const double p = f.ml.p, rate = f.sign * f.a;
      return forward_numeric(
          [e, expo, p, rate](double t) { return std::pow(t, expo) * (*e)(rate * std::pow(t, p)); },
          params, v, options);
    }
    default:
      break;
  }
  return forward_numeric([&f](double t) { return f(t); }, params, v, options);
}

TransformImage derivative_image(const TransformImage& phi, const SadikParams&,
                                std::span<const double> init, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidOrder, "derivative order must be >= 1");
  if (static_cast<int>(init.size()) != n) {
    throw Error(ErrorCode::LengthMismatch, "derivative rule needs exactly n initial values");
  }
  TransformImage out = phi.shifted({static_cast<double>(n), 0.0, 0.0});
  for (int k = 0; k < n; ++k) {
    const double c = init[n - 1 - k];
    if (c != 0.0) out = out - TransformImage::monomial(c, {static_cast<double>(k), -1.0, 0.0});
  }
  return out;
}

TransformImage caputo_image(const TransformImage& phi, const SadikParams&,
                            const FracOrder& order, std::span<const double> init) {
  if (order.is_integer()) {
    throw Error(ErrorCode::InvalidOrder, "integer order: use derivative_image");
  }
  const int n = order.n();
  if (static_cast<int>(init.size()) != n) {
    throw Error(ErrorCode::LengthMismatch, "Caputo rule needs exactly n initial values");
  }
  const double g = order.gamma();
  TransformImage out = phi.shifted({g, 0.0, 0.0});
  for (int k = 0; k < n; ++k) {
    const double c = init[n - 1 - k];
    if (c != 0.0) out = out - TransformImage::monomial(c, {g - n + k, -1.0, 0.0});
  }
  return out;
}

TransformImage integrate_image(const TransformImage& phi, const SadikParams&) {
  return phi.shifted({-1.0, 0.0, 0.0});
}

TransformImage delay_image(const TransformImage& phi, double a) { return phi.delayed(a); }

TransformImage convolve_images(const TransformImage& phi1, const TransformImage& phi2,
                               const SadikParams&) {
  return phi1.times(phi2).shifted({0.0, 1.0, 0.0});
}

TnCheck tn_multiply_check(const RealFn& f, int n, const SadikParams& params, double v,
                          const ForwardOptions& options) {
  if (n < 1) throw Error(ErrorCode::InvalidOrder, "t^n rule needs n >= 1");
  check_v(params, v);
  const double alpha = params.alpha(), beta = params.beta();
  TnCheck out;
  out.lhs = forward_numeric([&](double t) { return std::pow(t, n) * f(t); }, params, v, options);

  const double h = 1e-4 * v;
  const double v_min = v - n * h;
  ForwardOptions tight = options;
  tight.epsrel = std::min(options.epsrel, 1e-13);
  const auto frozen = laplace_integral(f, std::pow(v_min, alpha), tight);
  auto phi = [&](double w) {
    const double s = std::pow(w, alpha);
    return std::pow(w, -beta) *
           quadrature::integrate_on([&](double t) { return std::exp(-s * t) * f(t); },
                                    frozen.segments);
  };
  std::function<double(int, double)> apply = [&](int k, double w) -> double {
    if (k == 0) return phi(w);
    const double centre = apply(k - 1, w);
    const double slope = (apply(k - 1, w + h) - apply(k - 1, w - h)) / (2.0 * h);
    return slope / (alpha * std::pow(w, alpha - 1.0)) + beta / (alpha * std::pow(w, alpha)) * centre;
  };
  out.rhs = (n % 2 == 0 ? 1.0 : -1.0) * apply(n, v);
  return out;
}

namespace {

template <std::size_t N>
double limit_estimate(const RealImageFn& phi, const SadikParams& params,
                      const double (&sequence)[N], const char* what) {
  params.require_numeric();
  double values[N];
  for (std::size_t i = 0; i < N; ++i) {
    const double s = sequence[i];
    const double v = std::pow(s, 1.0 / params.alpha());
    values[i] = s * std::pow(v, params.beta()) * phi(v);
    if (!std::isfinite(values[i])) {
      throw Error(ErrorCode::NotConvergent, std::string(what) + ": non-finite image value");
    }
  }
  const double last = std::abs(values[N - 1] - values[N - 2]);
  const double prev = std::abs(values[N - 2] - values[N - 3]);
  const bool agree = last <= kLimitTol * std::max(1.0, std::abs(values[N - 1]));
  const bool settling = last <= prev * (1.0 + 1e-9) + 1e-15;
  if (!agree || !settling) {
    std::ostringstream os;
    os << what << ": sequence v^(alpha+beta) Phi does not settle (";
    for (std::size_t i = 0; i < N; ++i) os << (i ? ", " : "") << values[i];
    os << ")";
    throw Error(ErrorCode::NotConvergent, os.str());
  }
  return values[N - 1];
}

// Roots in s = v^alpha of (s^p - pole) on the principal sheet |arg s| < pi.
std::vector<std::complex<double>> factor_roots(const DenomFactor& f) {
  std::vector<std::complex<double>> roots;
  if (f.pole == 0.0) {
    roots.emplace_back(0.0, 0.0);
    return roots;
  }
  const double radius = std::pow(std::abs(f.pole), 1.0 / f.power);
  const double base_arg = f.pole > 0.0 ? 0.0 : std::numbers::pi;
  const int kmax = static_cast<int>(std::ceil(f.power)) + 1;
  for (int k = -kmax; k <= kmax; ++k) {
    const double arg = (base_arg + 2.0 * std::numbers::pi * k) / f.power;
    if (std::abs(arg) < std::numbers::pi - 1e-12) roots.push_back(std::polar(radius, arg));
  }
  return roots;
}

std::vector<std::complex<double>> image_roots(const TransformImage& phi) {
  std::vector<std::complex<double>> roots;
  for (const auto& term : phi.terms()) {
    for (const auto& f : term.denom) {
      for (auto r : factor_roots(f)) roots.push_back(r);
    }
  }
  return roots;
}

}  // namespace

double initial_value(const RealImageFn& phi, const SadikParams& params) {
  return limit_estimate(phi, params, kLimitSequenceLarge, "initial value");
}

double initial_value(const TransformImage& phi, const SadikParams& params) {
  return initial_value([&](double v) { return eval_image(phi, v, params); }, params);
}

double final_value(const RealImageFn& phi, const SadikParams& params) {
  return limit_estimate(phi, params, kLimitSequenceSmall, "final value");
}

double final_value(const TransformImage& phi, const SadikParams& params) {
  for (const auto& term : phi.terms()) {
    for (const auto& f : term.denom) {
      if (f.pole > 0.0) {
        std::ostringstream os;
        os << "pole at v^alpha = " << std::pow(f.pole, 1.0 / f.power) << " > 0";
        throw Error(ErrorCode::PoleOnPositiveAxis, os.str());
      }
      for (auto r : factor_roots(f)) {
        if (r.real() >= 0.0 && std::abs(r) > 0.0) {
          throw Error(ErrorCode::NotConvergent,
                      "poles on or right of the imaginary axis: no final value");
        }
      }
    }
  }
  return final_value([&](double v) { return eval_image(phi, v, params); }, params);
}

double image_abscissa(const TransformImage& phi) {
  double sigma = 0.0;
  for (auto r : image_roots(phi)) sigma = std::max(sigma, r.real());
  return sigma;
}

namespace {

// Cotangent contour s = sigma0 + (N/t)(a theta cot(c theta) - b + i d theta)
// with Weideman's parameters; trapezoid rule in theta, conjugate symmetry.
// Terms near theta = 0 grow like e^{0.17 N}, so `noise` tracks the rounding
// floor of the sum; past N ~ 64 it dominates the truncation error.
struct ContourSum {
  double value;
  double noise;
};

ContourSum contour_sum(const ComplexImageFn& phi, const SadikParams& params, double t,
                       double sigma0, int nodes) {
  constexpr double a = 0.5017, b = 0.6122, c = 0.6407, d = 0.2645;
  const double scale = nodes / t;
  double sum = 0.0, rounding = 0.0;
  for (int k = 1; k <= nodes / 2; ++k) {
    const double theta = (k - 0.5) * 2.0 * std::numbers::pi / nodes;
    const double ct = c * theta;
    const double cot = std::cos(ct) / std::sin(ct);
    const double sin2 = std::sin(ct) * std::sin(ct);
    const std::complex<double> z = scale * std::complex<double>(a * theta * cot - b, d * theta);
    const std::complex<double> dz = scale * std::complex<double>(a * cot - a * ct / sin2, d);
    const ComplexV v = ComplexV::from_s(sigma0 + z, params.alpha());
    const std::complex<double> image = v.pow(params.beta()) * phi(v);
    const std::complex<double> term = std::exp(z * t) * image * dz;
    sum += term.imag();
    // exp(z t) carries a phase error of about eps |z t|.
    rounding += std::abs(term) * (1.0 + std::abs(z * t));
  }
  const double factor = std::exp(sigma0 * t) * 2.0 / nodes;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  return {factor * sum, factor * rounding * eps};
}

}  // namespace

double inverse_numeric(const ComplexImageFn& phi, const SadikParams& params, double t,
                       const InversionOptions& options) {
  params.require_numeric();
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::InvalidParams, "inversion time must be finite and > 0");
  }
  int nodes = std::max(options.min_nodes, 4);
  ContourSum prev = contour_sum(phi, params, t, options.sigma0, nodes);
  while (2 * nodes <= options.max_nodes) {
    nodes *= 2;
    const ContourSum next = contour_sum(phi, params, t, options.sigma0, nodes);
    if (!std::isfinite(next.value)) break;
    const double diff = std::abs(next.value - prev.value);
    if (diff <= options.rtol * std::abs(next.value) + options.atol + 10.0 * next.noise) {
      // The coarse sum is off by about diff; the fine one by its rounding floor.
      return next.noise < diff ? next.value : prev.value;
    }
    prev = next;
  }
  std::ostringstream os;
  os << "contour sums do not settle at t = " << t << " (last " << prev.value << ", " << nodes
     << " nodes)";
  throw Error(ErrorCode::ContourFailure, os.str());
}

double inverse_numeric(const TransformImage& phi, const SadikParams& params, double t,
                       InversionOptions options) {
  options.sigma0 = std::max(options.sigma0, image_abscissa(phi));
  // The contour reaches |Im s| ~ 0.33 N / t where it crosses Re s = sigma0;
  // start with enough nodes to enclose every complex root.
  double reach = 0.0;
  for (auto r : image_roots(phi)) reach = std::max(reach, std::abs(r.imag()));
  while (options.min_nodes < 3.0 * reach * t) options.min_nodes *= 2;
  options.max_nodes = std::max(options.max_nodes, 4 * options.min_nodes);
  return inverse_numeric(
      [&](const ComplexV& v) { return eval_image(phi, v, params); }, params, t, options);
}

}  // namespace sadik
