#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sadik/core.hpp"
#include "sadik/fractional_ops.hpp"
#include "sadik/mittag_leffler.hpp"

namespace sadik {

enum class FunctionKind { One, Power, Exponential, Sine, Heaviside, Dirac, MLKernel };

/// A function with a tabulated image:
///   one            1
///   power(n)       t^n
///   exponential(a) e^{a t}
///   sine(a)        sin(a t)
///   heaviside(a)   eta(t - a)
///   dirac          delta(t)
///   ml_kernel      t^{p m + q - 1} E^{(m)}_{p,q}(sign * a * t^p)
struct KnownFunction {
  FunctionKind kind = FunctionKind::One;
  int n = 0;
  double a = 0.0;
  MLSpec ml{};
  int sign = 1;

  static KnownFunction one() { return {}; }
  static KnownFunction power(int n);
  static KnownFunction exponential(double a);
  static KnownFunction sine(double a);
  static KnownFunction heaviside(double a);
  static KnownFunction dirac();
  static KnownFunction ml_kernel(double p, double q, int m, double a, int sign);

  void validate() const;

  /// phi(t); throws UnsupportedFunction for dirac.
  double operator()(double t) const;

  /// Exponential growth rate sigma with |phi(t)| <= M e^{sigma t}.
  double growth_rate() const;

  std::string describe() const;
};

TransformImage image_of(const KnownFunction& f);

struct ForwardOptions {
  double growth = 0.0;              // declared exponential order of f
  double support_start = 0.0;       // f vanishes on [0, support_start)
  std::vector<double> breakpoints;  // points where f is not smooth
  double epsrel = 1e-11;
};

/// v^-beta int_0^inf exp(-t v^alpha) f(t) dt by adaptive Gauss-Kronrod on a
/// truncated interval (the tail beyond it is checked to be negligible).
double forward_numeric(const RealFn& f, const SadikParams& params, double v,
                       const ForwardOptions& options = {});

/// Same, with growth/breakpoints taken from the function. Dirac is table-only.
double forward_numeric(const KnownFunction& f, const SadikParams& params, double v);

/// Image of phi^{(n)}: v^{n alpha} Phi - sum_k v^{k alpha - beta} phi^{(n-1-k)}(0).
/// init holds phi(0), phi'(0), ..., phi^{(n-1)}(0).
TransformImage derivative_image(const TransformImage& phi, const SadikParams& params,
                                std::span<const double> init, int n);

/// Image of the Caputo derivative of non-integer order gamma:
/// v^{gamma alpha} Phi - sum_k v^{(gamma-n+k) alpha - beta} phi^{(n-1-k)}(0+).
TransformImage caputo_image(const TransformImage& phi, const SadikParams& params,
                            const FracOrder& order, std::span<const double> init);

/// Image of int_0^t phi: Phi / v^alpha.
TransformImage integrate_image(const TransformImage& phi, const SadikParams& params);

/// Image of phi(t - a) eta(t - a): e^{-a v^alpha} Phi.
TransformImage delay_image(const TransformImage& phi, double a);

/// Image of the causal convolution int_0^t phi1(tau) phi2(t - tau) dtau:
/// v^beta Phi1 Phi2.
TransformImage convolve_images(const TransformImage& phi1, const TransformImage& phi2,
                               const SadikParams& params);

struct TnCheck {
  double lhs = 0.0;  // transform of t^n f
  double rhs = 0.0;  // (-1)^n L^n Phi, L = (1/(alpha v^{alpha-1})) d/dv + beta/(alpha v^alpha)
};

/// Both sides of the t^n multiplication rule at v. Phi is computed by
/// quadrature on a partition frozen at v, so it is smooth in v and can be
/// differenced (central, step 1e-4 v, nested n times).
TnCheck tn_multiply_check(const RealFn& f, int n, const SadikParams& params, double v,
                          const ForwardOptions& options = {});

using RealImageFn = std::function<double(double)>;

/// lim v^{alpha+beta} Phi(v) as v^alpha -> inf, i.e. phi(0+). Evaluated at
/// v^alpha = 1e3..1e6; throws NotConvergent unless the last two values agree
/// within 1e-4 relative and the differences do not grow.
double initial_value(const RealImageFn& phi, const SadikParams& params);
double initial_value(const TransformImage& phi, const SadikParams& params);

/// lim v^{alpha+beta} Phi(v) as v^alpha -> 0+, i.e. lim phi(t) as t -> inf.
/// The closed-form overload inspects denominators first: a real positive
/// pole throws PoleOnPositiveAxis, poles on or right of the imaginary axis
/// away from the origin throw NotConvergent.
double final_value(const RealImageFn& phi, const SadikParams& params);
double final_value(const TransformImage& phi, const SadikParams& params);

using ComplexImageFn = std::function<std::complex<double>(const ComplexV&)>;

struct InversionOptions {
  double sigma0 = 0.0;  // all singularities of F(s) = v^beta Phi lie left of Re s = sigma0
  double rtol = 1e-5;
  double atol = 1e-10;
  int min_nodes = 32;
  int max_nodes = 256;
};

/// phi(t) from its image. With s = v^alpha and F(s) = v^beta Phi(v), F is
/// inverted as a Laplace image on a shifted cotangent (Talbot-type) contour
/// with N and 2N nodes; N doubles from min_nodes until successive results
/// agree, else ContourFailure.
double inverse_numeric(const ComplexImageFn& phi, const SadikParams& params, double t,
                       const InversionOptions& options = {});

/// Closed-form image; sigma0 is taken from the denominator roots.
double inverse_numeric(const TransformImage& phi, const SadikParams& params, double t,
                       InversionOptions options = {});

/// Largest real part among the roots s of the image's denominators
/// (s = v^alpha on the principal sheet), or 0 if there are none to the right.
double image_abscissa(const TransformImage& phi);

}  // namespace sadik
