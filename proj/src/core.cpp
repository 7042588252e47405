#include "sadik/core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace sadik {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::InvalidOrder: return "InvalidOrder";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::PoleAtEvaluationPoint: return "PoleAtEvaluationPoint";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::DivergentTransform: return "DivergentTransform";
    case ErrorCode::UnsupportedFunction: return "UnsupportedFunction";
    case ErrorCode::UnsupportedProduct: return "UnsupportedProduct";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NegativeDelay: return "NegativeDelay";
    case ErrorCode::NotConvergent: return "NotConvergent";
    case ErrorCode::PoleOnPositiveAxis: return "PoleOnPositiveAxis";
    case ErrorCode::ContourFailure: return "ContourFailure";
    case ErrorCode::StepOverflow: return "StepOverflow";
  }
  return "Unknown";
}

SadikParams::SadikParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || alpha == 0.0) {
    std::ostringstream os;
    os << "alpha must be finite and non-zero, beta finite (alpha=" << alpha << ", beta=" << beta
       << ")";
    throw Error(ErrorCode::InvalidParams, os.str());
  }
}

void SadikParams::require_numeric() const {
  if (!(alpha_ > 0.0)) {
    throw Error(ErrorCode::InvalidParams, "numeric evaluation requires alpha > 0");
  }
}

bool AffineExponent::approx_equal(const AffineExponent& o, double tol) const noexcept {
  return std::abs(c_alpha - o.c_alpha) <= tol && std::abs(c_beta - o.c_beta) <= tol &&
         std::abs(c0 - o.c0) <= tol;
}

bool DenomFactor::same_base(const DenomFactor& o, double tol) const noexcept {
  return std::abs(power - o.power) <= tol &&
         std::abs(pole - o.pole) <= tol * std::max(1.0, std::abs(pole));
}

TransformImage TransformImage::monomial(double coeff, AffineExponent exponent) {
  return TransformImage({ImageTerm{coeff, exponent, 0.0, {}}});
}

TransformImage TransformImage::operator+(const TransformImage& o) const {
  std::vector<ImageTerm> out = terms_;
  out.insert(out.end(), o.terms_.begin(), o.terms_.end());
  return TransformImage(std::move(out));
}

TransformImage TransformImage::operator-(const TransformImage& o) const {
  return *this + o.scaled(-1.0);
}

TransformImage TransformImage::scaled(double k) const {
  std::vector<ImageTerm> out = terms_;
  for (auto& term : out) term.coeff *= k;
  return TransformImage(std::move(out));
}

TransformImage TransformImage::shifted(const AffineExponent& exponent) const {
  std::vector<ImageTerm> out = terms_;
  for (auto& term : out) term.v_exponent = term.v_exponent + exponent;
  return TransformImage(std::move(out));
}

TransformImage TransformImage::delayed(double a) const {
  if (!(a >= 0.0)) throw Error(ErrorCode::NegativeDelay, "delay must be >= 0");
  std::vector<ImageTerm> out = terms_;
  for (auto& term : out) term.delay += a;
  return TransformImage(std::move(out));
}

TransformImage TransformImage::times(const TransformImage& o) const {
  std::vector<ImageTerm> out;
  out.reserve(terms_.size() * o.terms_.size());
  for (const auto& a : terms_) {
    for (const auto& b : o.terms_) {
      ImageTerm t{a.coeff * b.coeff, a.v_exponent + b.v_exponent, a.delay + b.delay, a.denom};
      t.denom.insert(t.denom.end(), b.denom.begin(), b.denom.end());
      out.push_back(std::move(t));
    }
  }
  return TransformImage(std::move(out));
}

namespace {

// Folds repeated bases into one factor and sorts for deterministic comparison.
std::vector<DenomFactor> canonical_denom(const std::vector<DenomFactor>& in, double tol) {
  std::vector<DenomFactor> out;
  for (const auto& f : in) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const DenomFactor& g) { return g.same_base(f, tol); });
    if (it == out.end()) {
      out.push_back(f);
    } else {
      it->multiplicity += f.multiplicity;
    }
  }
  std::sort(out.begin(), out.end(), [](const DenomFactor& a, const DenomFactor& b) {
    return a.power != b.power ? a.power < b.power : a.pole < b.pole;
  });
  return out;
}

bool same_denoms(const std::vector<DenomFactor>& a, const std::vector<DenomFactor>& b,
                 double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].same_base(b[i], tol) || a[i].multiplicity != b[i].multiplicity) return false;
  }
  return true;
}

struct Monomial {
  double coeff;
  AffineExponent exponent;
};

void add_monomial(std::vector<Monomial>& poly, const Monomial& m, double tol) {
  for (auto& p : poly) {
    if (p.exponent.approx_equal(m.exponent, tol)) {
      p.coeff += m.coeff;
      return;
    }
  }
  poly.push_back(m);
}

// Multiplies poly by (v^{p alpha} - pole)^k, expanded binomially.
std::vector<Monomial> multiply_factor(const std::vector<Monomial>& poly, const DenomFactor& f,
                                      int k, double tol) {
  std::vector<Monomial> out;
  for (const auto& m : poly) {
    double binom = 1.0;
    for (int j = 0; j <= k; ++j) {
      // C(k, j) v^{j p alpha} (-pole)^{k-j}
      const double c = m.coeff * binom * std::pow(-f.pole, k - j);
      add_monomial(out, {c, m.exponent + AffineExponent{j * f.power, 0.0, 0.0}}, tol);
      binom = binom * (k - j) / (j + 1);
    }
  }
  return out;
}

}  // namespace

TransformImage TransformImage::merge_like_terms(double tol) const {
  std::vector<ImageTerm> out;
  for (const auto& term : terms_) {
    ImageTerm t = term;
    t.denom = canonical_denom(term.denom, tol);
    auto it = std::find_if(out.begin(), out.end(), [&](const ImageTerm& o) {
      return o.v_exponent.approx_equal(t.v_exponent, tol) &&
             std::abs(o.delay - t.delay) <= tol && same_denoms(o.denom, t.denom, tol);
    });
    if (it == out.end()) {
      out.push_back(std::move(t));
    } else {
      it->coeff += t.coeff;
    }
  }
  std::erase_if(out, [](const ImageTerm& t) { return t.coeff == 0.0; });
  return TransformImage(std::move(out));
}

TransformImage TransformImage::normalized(double tol) const {
  // Group by delay; each group shares a least common denominator.
  std::vector<std::vector<ImageTerm>> groups;
  for (const auto& term : terms_) {
    ImageTerm t = term;
    t.denom = canonical_denom(term.denom, tol);
    auto it = std::find_if(groups.begin(), groups.end(), [&](const std::vector<ImageTerm>& g) {
      return std::abs(g.front().delay - t.delay) <= tol;
    });
    if (it == groups.end()) {
      groups.push_back({std::move(t)});
    } else {
      it->push_back(std::move(t));
    }
  }
  std::sort(groups.begin(), groups.end(),
            [](const auto& a, const auto& b) { return a.front().delay < b.front().delay; });

  std::vector<ImageTerm> out;
  for (const auto& group : groups) {
    std::vector<DenomFactor> lcd;
    for (const auto& t : group) {
      for (const auto& f : t.denom) {
        auto it = std::find_if(lcd.begin(), lcd.end(),
                               [&](const DenomFactor& g) { return g.same_base(f, tol); });
        if (it == lcd.end()) {
          lcd.push_back(f);
        } else {
          it->multiplicity = std::max(it->multiplicity, f.multiplicity);
        }
      }
    }
    lcd = canonical_denom(lcd, tol);

    std::vector<Monomial> numerator;
    double scale = 0.0;
    for (const auto& t : group) {
      std::vector<Monomial> poly{{t.coeff, t.v_exponent}};
      for (const auto& f : lcd) {
        int have = 0;
        for (const auto& g : t.denom) {
          if (g.same_base(f, tol)) have = g.multiplicity;
        }
        if (f.multiplicity > have) poly = multiply_factor(poly, f, f.multiplicity - have, tol);
      }
      for (const auto& m : poly) {
        scale = std::max(scale, std::abs(m.coeff));
        add_monomial(numerator, m, tol);
      }
    }
    std::sort(numerator.begin(), numerator.end(), [](const Monomial& a, const Monomial& b) {
      const auto& x = a.exponent;
      const auto& y = b.exponent;
      if (x.c_alpha != y.c_alpha) return x.c_alpha < y.c_alpha;
      if (x.c_beta != y.c_beta) return x.c_beta < y.c_beta;
      return x.c0 < y.c0;
    });
    for (const auto& m : numerator) {
      if (std::abs(m.coeff) <= tol * scale) continue;
      out.push_back(ImageTerm{m.coeff, m.exponent, group.front().delay, lcd});
    }
  }
  return TransformImage(std::move(out));
}

bool equivalent(const TransformImage& a, const TransformImage& b, double tol) {
  return (a - b).normalized(tol).empty();
}

double eval_image(const TransformImage& image, double v, const SadikParams& params,
                  double pole_guard) {
  params.require_numeric();
  if (!(v > 0.0)) throw Error(ErrorCode::InvalidParams, "evaluation point v must be > 0");
  const double log_v = std::log(v);
  const double v_alpha = std::exp(params.alpha() * log_v);
  double sum = 0.0;
  for (const auto& term : image.terms()) {
    double value = term.coeff * std::exp(term.v_exponent.eval(params) * log_v);
    if (term.delay != 0.0) value *= std::exp(-term.delay * v_alpha);
    for (const auto& f : term.denom) {
      const double base_power = std::exp(f.power * params.alpha() * log_v);
      const double base = base_power - f.pole;
      if (std::abs(base) < pole_guard * std::abs(base_power)) {
        std::ostringstream os;
        os << "v^(" << f.power << " alpha) = " << f.pole << " at v = " << v;
        throw Error(ErrorCode::PoleAtEvaluationPoint, os.str());
      }
      value /= std::pow(base, f.multiplicity);
    }
    sum += value;
  }
  return sum;
}

std::complex<double> eval_image(const TransformImage& image, const ComplexV& v,
                                const SadikParams& params) {
  params.require_numeric();
  const std::complex<double> v_alpha = v.pow(params.alpha());
  std::complex<double> sum = 0.0;
  for (const auto& term : image.terms()) {
    std::complex<double> value = term.coeff * v.pow(term.v_exponent.eval(params));
    if (term.delay != 0.0) value *= std::exp(-term.delay * v_alpha);
    for (const auto& f : term.denom) {
      const std::complex<double> base = v.pow(f.power * params.alpha()) - f.pole;
      if (std::abs(base) == 0.0) {
        throw Error(ErrorCode::PoleAtEvaluationPoint, "denominator vanishes on contour");
      }
      value /= std::pow(base, f.multiplicity);
    }
    sum += value;
  }
  return sum;
}

SampledSignal::SampledSignal(std::vector<double> t, std::vector<double> y)
    : t_(std::move(t)), y_(std::move(y)) {
  if (t_.size() != y_.size()) {
    throw Error(ErrorCode::LengthMismatch, "time and value sequences differ in length");
  }
  validate_grid(t_);
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = a;
    return out;
  }
  const double step = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = a + step * static_cast<double>(i);
  if (n > 1) out.back() = b;
  return out;
}

void validate_grid(std::span<const double> t) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || t[i] < 0.0) {
      throw Error(ErrorCode::InvalidGrid, "grid times must be finite and >= 0");
    }
    if (i > 0 && !(t[i] > t[i - 1])) {
      throw Error(ErrorCode::InvalidGrid, "grid times must be strictly increasing");
    }
  }
}

}  // namespace sadik
