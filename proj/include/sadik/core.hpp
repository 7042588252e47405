#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "sadik/error.hpp"

namespace sadik {

/// Parameter pair (alpha, beta) of the transform
///   Phi(v) = v^-beta * int_0^inf exp(-t v^alpha) phi(t) dt.
/// alpha must be non-zero; numeric routines additionally require alpha > 0
/// and call require_numeric() on entry.
class SadikParams {
 public:
  SadikParams(double alpha, double beta);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

  void require_numeric() const;

  friend bool operator==(const SadikParams&, const SadikParams&) = default;

 private:
  double alpha_;
  double beta_;
};

/// Exponent of v written as c_alpha*alpha + c_beta*beta + c0.
struct AffineExponent {
  double c_alpha = 0.0;
  double c_beta = 0.0;
  double c0 = 0.0;

  double eval(const SadikParams& params) const noexcept {
    return c_alpha * params.alpha() + c_beta * params.beta() + c0;
  }

  AffineExponent operator+(const AffineExponent& o) const noexcept {
    return {c_alpha + o.c_alpha, c_beta + o.c_beta, c0 + o.c0};
  }
  AffineExponent operator-(const AffineExponent& o) const noexcept {
    return {c_alpha - o.c_alpha, c_beta - o.c_beta, c0 - o.c0};
  }
  AffineExponent operator*(double k) const noexcept { return {k * c_alpha, k * c_beta, k * c0}; }

  bool approx_equal(const AffineExponent& o, double tol = 1e-12) const noexcept;
};

/// (v^{power*alpha} - pole)^multiplicity
struct DenomFactor {
  double power = 1.0;
  double pole = 0.0;
  int multiplicity = 1;

  bool same_base(const DenomFactor& o, double tol = 1e-12) const noexcept;
};

struct ImageTerm {
  double coeff = 0.0;
  AffineExponent v_exponent;
  double delay = 0.0;  // factor exp(-delay * v^alpha)
  std::vector<DenomFactor> denom;
};

/// v restricted to a point of the complex plane through its logarithm, so that
/// v^e = exp(e * log_v) stays on the branch the caller chose. The inversion
/// routines build it from s = v^alpha as log_v = log(s) / alpha.
struct ComplexV {
  std::complex<double> log_v;

  static ComplexV from_s(std::complex<double> s, double alpha) { return {std::log(s) / alpha}; }
  static ComplexV from_real(double v) { return {std::complex<double>(std::log(v), 0.0)}; }

  std::complex<double> pow(double e) const { return std::exp(e * log_v); }
};

/// Closed-form image: a finite sum of ImageTerm values. Rules that act on
/// images (derivative, integration, delay, convolution) produce this form.
class TransformImage {
 public:
  TransformImage() = default;
  explicit TransformImage(std::vector<ImageTerm> terms) : terms_(std::move(terms)) {}

  static TransformImage monomial(double coeff, AffineExponent exponent);

  const std::vector<ImageTerm>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  TransformImage operator+(const TransformImage& o) const;
  TransformImage operator-(const TransformImage& o) const;
  TransformImage scaled(double k) const;
  TransformImage shifted(const AffineExponent& exponent) const;
  TransformImage delayed(double a) const;
  TransformImage times(const TransformImage& o) const;

  /// Combines terms with identical exponent, delay and denominator list.
  TransformImage merge_like_terms(double tol = 1e-12) const;

  /// Canonical form: terms sharing a delay are put over their least common
  /// denominator, numerator factors are expanded binomially and like powers
  /// of v merged. Two images are equal as functions of v iff their difference
  /// normalizes to nothing (up to cancellation of common factors).
  TransformImage normalized(double tol = 1e-12) const;

 private:
  std::vector<ImageTerm> terms_;
};

/// True when a - b normalizes to the empty image.
bool equivalent(const TransformImage& a, const TransformImage& b, double tol = 1e-10);

inline constexpr double kDefaultPoleGuard = 1e-12;

double eval_image(const TransformImage& image, double v, const SadikParams& params,
                  double pole_guard = kDefaultPoleGuard);

std::complex<double> eval_image(const TransformImage& image, const ComplexV& v,
                                const SadikParams& params);

/// Time samples with strictly increasing, non-negative abscissae.
class SampledSignal {
 public:
  SampledSignal() = default;
  SampledSignal(std::vector<double> t, std::vector<double> y);

  std::span<const double> t() const noexcept { return t_; }
  std::span<const double> y() const noexcept { return y_; }
  std::size_t size() const noexcept { return t_.size(); }
  bool empty() const noexcept { return t_.empty(); }

 private:
  std::vector<double> t_;
  std::vector<double> y_;
};

/// n equally spaced points from a to b inclusive (n == 1 gives {a}).
std::vector<double> linspace(double a, double b, std::size_t n);

/// Throws InvalidGrid unless the times are finite, >= 0 and strictly increasing.
void validate_grid(std::span<const double> t);

}  // namespace sadik
