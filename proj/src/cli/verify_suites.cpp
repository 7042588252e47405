#include "verify_suites.hpp"

#include <cmath>
#include <sstream>

#include "io.hpp"
#include "sadik/quadrature.hpp"
#include "sadik/transform.hpp"

namespace sadik::cli {

namespace {

struct LatticePoint {
  double v, alpha, beta;
};

std::vector<LatticePoint> lattice() {
  std::vector<LatticePoint> pts;
  for (double v : {1.5, 2.0, 4.0}) {
    for (double alpha : {0.5, 1.0, 2.0}) {
      for (double beta : {-1.0, 0.0, 1.0}) pts.push_back({v, alpha, beta});
    }
  }
  return pts;
}

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Tracks the worst error of a family of comparisons.
class Worst {
 public:
  explicit Worst(std::string name, double tol) : name_(std::move(name)), tol_(tol) {}

  void add(double err, const std::string& where) {
    if (where_.empty() || !(err <= worst_)) {  // NaN counts as worst
      worst_ = err;
      where_ = where;
    }
  }

  void fail(const std::string& why) {
    if (!failed_) where_ = why;
    failed_ = true;
  }

  CheckResult result() const {
    const bool ok = !failed_ && worst_ <= tol_;
    return {name_, ok, worst_, tol_, where_};
  }

 private:
  std::string name_;
  double tol_;
  double worst_ = 0.0;
  bool failed_ = false;
  std::string where_;
};

std::string at(const LatticePoint& p) {
  std::ostringstream os;
  os << "v=" << p.v << " alpha=" << p.alpha << " beta=" << p.beta;
  return os.str();
}

CheckResult symbolic(std::string name, const TransformImage& got, const TransformImage& want,
                     double tol = 1e-10) {
  const bool ok = equivalent(got, want, tol);
  return {std::move(name), ok, ok ? 0.0 : 1.0, 0.0, ok ? "" : "images differ"};
}

template <class Fn>
CheckResult expect_error(std::string name, ErrorCode code, Fn&& fn) {
  try {
    const double value = fn();
    std::ostringstream os;
    os << "expected " << to_string(code) << ", got value " << value;
    return {std::move(name), false, 1.0, 0.0, os.str()};
  } catch (const Error& e) {
    const bool ok = e.code() == code;
    return {std::move(name), ok, 0.0, 0.0,
            ok ? std::string(to_string(code)) : std::string("got ") + e.what()};
  }
}

CheckResult expect_value(std::string name, double want, double tol,
                         const std::function<double(const SadikParams&)>& fn) {
  Worst w(std::move(name), tol);
  for (auto [alpha, beta] : {std::pair{1.0, 0.0}, {2.0, 1.0}, {0.5, -1.0}}) {
    std::ostringstream where;
    where << "alpha=" << alpha << " beta=" << beta;
    try {
      const double got = fn(SadikParams(alpha, beta));
      w.add(std::abs(got - want), where.str() + " estimate=" + std::to_string(got));
    } catch (const Error& e) {
      w.fail(where.str() + ": " + e.what());
    }
  }
  return w.result();
}

std::vector<KnownFunction> table_functions() {
  std::vector<KnownFunction> fs{KnownFunction::one()};
  for (int n = 0; n <= 3; ++n) fs.push_back(KnownFunction::power(n));
  for (double a : {1.0, 2.0}) {
    fs.push_back(KnownFunction::exponential(a));
    fs.push_back(KnownFunction::sine(a));
    fs.push_back(KnownFunction::heaviside(a));
  }
  fs.push_back(KnownFunction::ml_kernel(0.5, 1.0, 0, 1.0, -1));
  fs.push_back(KnownFunction::ml_kernel(0.8, 0.8, 1, 1.0, -1));
  fs.push_back(KnownFunction::ml_kernel(1.0, 1.0, 1, 1.0, 1));
  return fs;
}

std::vector<CheckResult> table_suite() {
  std::vector<CheckResult> out;
  for (const auto& f : table_functions()) {
    Worst w("table " + f.describe(), 1e-6);
    for (const auto& p : lattice()) {
      if (!(std::pow(p.v, p.alpha) > f.growth_rate())) continue;
      const SadikParams params(p.alpha, p.beta);
      try {
        w.add(rel_err(forward_numeric(f, params, p.v), eval_image(image_of(f), p.v, params)),
              at(p));
      } catch (const Error& e) {
        w.fail(at(p) + ": " + e.what());
      }
    }
    out.push_back(w.result());
  }
  return out;
}

std::vector<CheckResult> derivative_suite() {
  const SadikParams any(1.3, 0.4);
  std::vector<CheckResult> out;
  const auto exp_image = image_of(KnownFunction::exponential(1.0));
  const auto sin_image = image_of(KnownFunction::sine(1.0));
  const double one[] = {1.0}, zero[] = {0.0}, sin_init[] = {0.0, 1.0};
  out.push_back(symbolic("(e^t)' = e^t", derivative_image(exp_image, any, one, 1), exp_image));
  out.push_back(symbolic("(t)' = 1", derivative_image(image_of(KnownFunction::power(1)), any, zero, 1),
                         image_of(KnownFunction::one())));
  out.push_back(symbolic("(sin t)'' = -sin t", derivative_image(sin_image, any, sin_init, 2),
                         sin_image.scaled(-1.0)));

  struct Case {
    std::string name;
    KnownFunction f;
    RealFn dn;
    std::vector<double> init;
  };
  const std::vector<Case> cases{
      {"numeric (e^t)'", KnownFunction::exponential(1.0), [](double t) { return std::exp(t); }, {1.0}},
      {"numeric (t^3)'", KnownFunction::power(3), [](double t) { return 3 * t * t; }, {0.0}},
      {"numeric (sin t)''", KnownFunction::sine(1.0), [](double t) { return -std::sin(t); }, {0.0, 1.0}},
  };
  for (const auto& c : cases) {
    Worst w(c.name, 1e-6);
    const int n = static_cast<int>(c.init.size());
    for (const auto& p : lattice()) {
      if (!(std::pow(p.v, p.alpha) > c.f.growth_rate())) continue;
      const SadikParams params(p.alpha, p.beta);
      try {
        ForwardOptions opt;
        opt.growth = c.f.growth_rate();
        const double numeric = forward_numeric(c.dn, params, p.v, opt);
        const double rule = eval_image(derivative_image(image_of(c.f), params, c.init, n), p.v, params);
        w.add(rel_err(numeric, rule), at(p));
      } catch (const Error& e) {
        w.fail(at(p) + ": " + e.what());
      }
    }
    out.push_back(w.result());
  }
  return out;
}

std::vector<CheckResult> caputo_suite() {
  std::vector<CheckResult> out;
  const auto t2 = image_of(KnownFunction::power(2));
  const double init[] = {0.0};
  for (double gamma : {0.3, 0.5, 0.8}) {
    Worst w("S[D^" + format_number(gamma) + " t^2] vs Caputo rule", 1e-4);
    const FracOrder order(gamma);
    const RealFn caputo_t2 = [&](double t) {
      return caputo_derivative([](double s) { return s * s; }, order, t, kDefaultPanels,
                               [](double s) { return 2.0 * s; });
    };
    for (const auto& p : lattice()) {
      const SadikParams params(p.alpha, p.beta);
      try {
        const double numeric = forward_numeric(caputo_t2, params, p.v);
        const double rule = eval_image(caputo_image(t2, params, order, init), p.v, params);
        w.add(rel_err(numeric, rule), at(p));
      } catch (const Error& e) {
        w.fail(at(p) + ": " + e.what());
      }
    }
    out.push_back(w.result());
  }
  const SadikParams any(1.0, 0.5);
  const double e_init[] = {1.0};
  const auto exp_image = image_of(KnownFunction::exponential(-1.0));
  out.push_back(symbolic("order 1 - 1e-9 reduces to first derivative",
                         caputo_image(exp_image, any, FracOrder(1.0 - 1e-9), e_init),
                         derivative_image(exp_image, any, e_init, 1), 1e-8));
  return out;
}

std::vector<CheckResult> convolution_suite() {
  std::vector<CheckResult> out;
  struct Case {
    std::string name;
    KnownFunction f, g;
  };
  const std::vector<Case> cases{
      {"1 * 1", KnownFunction::one(), KnownFunction::one()},
      {"e^-t * 1", KnownFunction::exponential(-1.0), KnownFunction::one()},
  };
  for (const auto& c : cases) {
    Worst w("numeric " + c.name, 1e-5);
    const RealFn conv = [&](double t) {
      if (t == 0.0) return 0.0;
      return quadrature::integrate([&](double tau) { return c.f(tau) * c.g(t - tau); }, 0.0, t)
          .value;
    };
    for (const auto& p : lattice()) {
      const SadikParams params(p.alpha, p.beta);
      try {
        const double numeric = forward_numeric(conv, params, p.v);
        const double rule =
            eval_image(convolve_images(image_of(c.f), image_of(c.g), params), p.v, params);
        w.add(rel_err(numeric, rule), at(p));
      } catch (const Error& e) {
        w.fail(at(p) + ": " + e.what());
      }
    }
    out.push_back(w.result());
  }
  const SadikParams any(0.7, -0.3);
  const double a = 2.0, b = -1.0;
  const auto product = convolve_images(image_of(KnownFunction::exponential(a)),
                                       image_of(KnownFunction::exponential(b)), any);
  const auto difference = (image_of(KnownFunction::exponential(a)) -
                           image_of(KnownFunction::exponential(b)))
                              .scaled(1.0 / (a - b));
  out.push_back(symbolic("e^{2t} * e^{-t} = (e^{2t} - e^{-t}) / 3", product, difference));
  out.push_back(symbolic("1 * 1 = t",
                         convolve_images(image_of(KnownFunction::one()),
                                         image_of(KnownFunction::one()), any),
                         image_of(KnownFunction::power(1))));
  return out;
}

std::vector<CheckResult> delay_suite() {
  std::vector<CheckResult> out;
  for (const auto& f : {KnownFunction::one(), KnownFunction::power(1)}) {
    for (double a : {0.5, 2.0}) {
      Worst w("delayed " + f.describe() + " by " + format_number(a), 1e-6);
      ForwardOptions opt;
      opt.support_start = a;
      const RealFn shifted = [&](double t) { return t >= a ? f(t - a) : 0.0; };
      for (const auto& p : lattice()) {
        const SadikParams params(p.alpha, p.beta);
        try {
          const double numeric = forward_numeric(shifted, params, p.v, opt);
          const double rule = eval_image(delay_image(image_of(f), a), p.v, params);
          w.add(rel_err(numeric, rule), at(p));
        } catch (const Error& e) {
          w.fail(at(p) + ": " + e.what());
        }
      }
      out.push_back(w.result());
    }
  }
  out.push_back(symbolic("delayed 1 equals heaviside image",
                         delay_image(image_of(KnownFunction::one()), 2.0),
                         image_of(KnownFunction::heaviside(2.0))));
  return out;
}

std::vector<CheckResult> ivt_suite() {
  std::vector<CheckResult> out;
  out.push_back(expect_value("phi(0+) of e^t is 1", 1.0, 1e-4, [](const SadikParams& p) {
    return initial_value(image_of(KnownFunction::exponential(1.0)), p);
  }));
  out.push_back(expect_value("phi(0+) of sin t is 0", 0.0, 1e-4, [](const SadikParams& p) {
    return initial_value(image_of(KnownFunction::sine(1.0)), p);
  }));
  out.push_back(expect_value("phi(0+) of 1 is 1", 1.0, 1e-4, [](const SadikParams& p) {
    return initial_value(image_of(KnownFunction::one()), p);
  }));
  out.push_back(expect_error("delta is improper", ErrorCode::NotConvergent, [] {
    return initial_value(image_of(KnownFunction::dirac()), SadikParams(1.0, 0.0));
  }));
  return out;
}

std::vector<CheckResult> fvt_suite() {
  std::vector<CheckResult> out;
  out.push_back(expect_value("lim phi of 1 is 1", 1.0, 1e-4, [](const SadikParams& p) {
    return final_value(image_of(KnownFunction::one()), p);
  }));
  out.push_back(expect_value("lim phi of delta is 0", 0.0, 1e-4, [](const SadikParams& p) {
    return final_value(image_of(KnownFunction::dirac()), p);
  }));
  out.push_back(expect_value("lim phi of e^-t is 0", 0.0, 1e-4, [](const SadikParams& p) {
    return final_value(image_of(KnownFunction::exponential(-1.0)), p);
  }));
  out.push_back(expect_error("e^t has a pole on the positive axis", ErrorCode::PoleOnPositiveAxis, [] {
    return final_value(image_of(KnownFunction::exponential(1.0)), SadikParams(1.0, 0.0));
  }));
  out.push_back(expect_error("sin t oscillates", ErrorCode::NotConvergent, [] {
    return final_value(image_of(KnownFunction::sine(1.0)), SadikParams(1.0, 0.0));
  }));
  return out;
}

std::vector<CheckResult> tn_suite() {
  std::vector<CheckResult> out;
  struct Case {
    std::string name;
    RealFn f;
    double growth;
    int n;
  };
  const std::vector<Case> cases{
      {"t * 1", [](double) { return 1.0; }, 0.0, 1},
      {"t^2 * 1", [](double) { return 1.0; }, 0.0, 2},
      {"t * e^t", [](double t) { return std::exp(t); }, 1.0, 1},
      {"t * sin t", [](double t) { return std::sin(t); }, 0.0, 1},
  };
  for (const auto& c : cases) {
    Worst w(c.name, 1e-5);
    for (double v : {2.0, 3.0}) {
      for (auto [alpha, beta] : {std::pair{1.0, 0.0}, {2.0, 1.0}, {0.5, -1.0}}) {
        const LatticePoint p{v, alpha, beta};
        if (!(std::pow(v, alpha) > c.growth)) continue;
        try {
          ForwardOptions opt;
          opt.growth = c.growth;
          const auto r = tn_multiply_check(c.f, c.n, SadikParams(alpha, beta), v, opt);
          w.add(rel_err(r.rhs, r.lhs), at(p));
        } catch (const Error& e) {
          w.fail(at(p) + ": " + e.what());
        }
      }
    }
    out.push_back(w.result());
  }
  return out;
}

std::vector<CheckResult> inversion_suite() {
  std::vector<CheckResult> out;
  const std::vector<KnownFunction> fs{KnownFunction::one(), KnownFunction::power(1),
                                      KnownFunction::exponential(-1.0), KnownFunction::sine(2.0)};
  for (const auto& f : fs) {
    Worst w("round trip " + f.describe(), 1e-5);
    for (auto [alpha, beta] : {std::pair{1.0, 0.0}, {2.0, 1.0}}) {
      const SadikParams params(alpha, beta);
      const auto image = image_of(f);
      for (double t : linspace(0.1, 5.0, 50)) {
        std::ostringstream where;
        where << "alpha=" << alpha << " beta=" << beta << " t=" << t;
        try {
          w.add(rel_err(inverse_numeric(image, params, t), f(t)), where.str());
        } catch (const Error& e) {
          w.fail(where.str() + ": " + e.what());
        }
      }
    }
    out.push_back(w.result());
  }
  return out;
}

}  // namespace


const std::vector<Suite>& verification_suites() {
  static const std::vector<Suite> suites{
      {"table", table_suite},     {"derivative", derivative_suite},
      {"caputo", caputo_suite},   {"convolution", convolution_suite},
      {"delay", delay_suite},     {"ivt", ivt_suite},
      {"fvt", fvt_suite},         {"tn", tn_suite},
      {"inversion", inversion_suite},
  };
  return suites;
}

}  // namespace sadik::cli
