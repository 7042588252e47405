#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sadik/fractional_ops.hpp"
#include "sadik/transform.hpp"

using namespace sadik;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidParams;
}

struct Point {
  double v, alpha, beta;
};

std::vector<Point> lattice() {
  std::vector<Point> pts;
  for (double v : {1.5, 2.0, 4.0})
    for (double a : {0.5, 1.0, 2.0})
      for (double b : {-1.0, 0.0, 1.0}) pts.push_back({v, a, b});
  return pts;
}

}  // namespace

TEST_CASE("forward transform examples") {
  CHECK(forward_numeric(KnownFunction::exponential(1.0), {1, 0}, 3.0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(forward_numeric(KnownFunction::one(), {2, 1}, 2.0) == doctest::Approx(0.125).epsilon(1e-10));
  CHECK(forward_numeric(KnownFunction::sine(2.0), {1, 0}, 2.0) == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(code_of([] { forward_numeric(KnownFunction::exponential(2.0), {1, 0}, 1.5); }) ==
        ErrorCode::DivergentTransform);
  CHECK(code_of([] { forward_numeric(KnownFunction::dirac(), {1, 0}, 2.0); }) ==
        ErrorCode::UnsupportedFunction);
}

TEST_CASE("image table entries") {
  const SadikParams p(1.3, 0.7);
  const double v = 1.9;
  const double va = std::pow(v, p.alpha());
  CHECK(eval_image(image_of(KnownFunction::power(3)), v, p) ==
        doctest::Approx(6.0 * std::pow(v, -(4 * p.alpha() + p.beta()))).epsilon(1e-14));
  CHECK(eval_image(image_of(KnownFunction::dirac()), v, {1.0, 0.0}) == doctest::Approx(1.0));
  CHECK(eval_image(image_of(KnownFunction::heaviside(0.4)), v, p) ==
        doctest::Approx(std::exp(-0.4 * va) * std::pow(v, -(p.alpha() + p.beta()))).epsilon(1e-14));
  // Relaxation kernel, p = gamma, q = 1, m = 0: v^{alpha gamma - alpha - beta}/(v^{alpha gamma} - b)
  const double g = 0.6, b = 3.0;
  CHECK(eval_image(image_of(KnownFunction::ml_kernel(g, 1.0, 0, b, 1)), v, p) ==
        doctest::Approx(std::pow(v, p.alpha() * g - p.alpha() - p.beta()) / (std::pow(v, p.alpha() * g) - b))
            .epsilon(1e-14));
  CHECK(image_of(KnownFunction::sine(0.0)).empty());
}

TEST_CASE("table agrees with quadrature on the lattice") {
  std::vector<KnownFunction> fs{KnownFunction::one()};
  for (int n = 0; n <= 3; ++n) fs.push_back(KnownFunction::power(n));
  for (double a : {1.0, 2.0}) {
    fs.push_back(KnownFunction::exponential(a));
    fs.push_back(KnownFunction::sine(a));
    fs.push_back(KnownFunction::heaviside(a));
  }
  fs.push_back(KnownFunction::ml_kernel(0.5, 1.0, 0, 1.0, -1));
  fs.push_back(KnownFunction::ml_kernel(0.8, 1.3, 2, 0.5, -1));
  for (const auto& f : fs) {
    for (const auto& pt : lattice()) {
      if (!(std::pow(pt.v, pt.alpha) > f.growth_rate())) continue;
      const SadikParams p(pt.alpha, pt.beta);
      CAPTURE(f.describe());
      CAPTURE(pt.v);
      CAPTURE(pt.alpha);
      CAPTURE(pt.beta);
      CHECK(oracle::rel(forward_numeric(f, p, pt.v), eval_image(image_of(f), pt.v, p)) < 1e-6);
    }
  }
}

TEST_CASE("forward transform is linear") {
  const RealFn f = [](double t) { return std::sin(1.3 * t); };
  const RealFn g = [](double t) { return t * t * std::exp(-t); };
  for (const auto& pt : lattice()) {
    const SadikParams p(pt.alpha, pt.beta);
    const double lhs = forward_numeric([&](double t) { return 2.5 * f(t) - 0.75 * g(t); }, p, pt.v);
    const double rhs = 2.5 * forward_numeric(f, p, pt.v) - 0.75 * forward_numeric(g, p, pt.v);
    CHECK(oracle::rel(lhs, rhs) < 1e-8);
  }
}

TEST_CASE("derivative rule") {
  const SadikParams p(1.7, -0.3);
  const auto e = image_of(KnownFunction::exponential(1.0));
  const double one[] = {1.0}, zero[] = {0.0}, sin_init[] = {0.0, 1.0};
  CHECK(equivalent(derivative_image(e, p, one, 1), e));
  CHECK(equivalent(derivative_image(image_of(KnownFunction::power(1)), p, zero, 1),
                   image_of(KnownFunction::one())));
  const auto s = image_of(KnownFunction::sine(1.0));
  CHECK(equivalent(derivative_image(s, p, sin_init, 2), s.scaled(-1.0)));
  CHECK(code_of([&] { derivative_image(s, p, one, 2); }) == ErrorCode::LengthMismatch);
}

TEST_CASE("Caputo rule") {
  const SadikParams p(1.0, 0.0);
  const auto e = image_of(KnownFunction::exponential(1.0));
  const double one[] = {1.0};
  CHECK(equivalent(caputo_image(e, p, FracOrder(1.0 - 1e-9), one), derivative_image(e, p, one, 1), 1e-8));
  CHECK(code_of([&] { caputo_image(e, p, FracOrder(1.0), one); }) == ErrorCode::InvalidOrder);
  CHECK(code_of([&] { caputo_image(e, p, FracOrder(1.5), one); }) == ErrorCode::LengthMismatch);

  // subtracted term for init c is c v^{-0.5 alpha - beta}
  const double c[] = {2.5};
  const auto diff = caputo_image(TransformImage{}, p, FracOrder(0.5), c);
  REQUIRE(diff.terms().size() == 1);
  CHECK(diff.terms()[0].coeff == -2.5);
  CHECK(diff.terms()[0].v_exponent.approx_equal({-0.5, -1.0, 0.0}));

  // numeric cross-check at v = 2: S[D^0.5 t^2] with D^0.5 t^2 = Gamma(3)/Gamma(2.5) t^1.5
  const double zero[] = {0.0};
  const double rule = eval_image(caputo_image(image_of(KnownFunction::power(2)), p, FracOrder(0.5), zero), 2.0, p);
  const double numeric = forward_numeric(
      [](double t) {
        return caputo_derivative([](double s) { return s * s; }, FracOrder(0.5), t, kDefaultPanels,
                                 [](double s) { return 2 * s; });
      },
      p, 2.0);
  CHECK(oracle::rel(numeric, rule) < 1e-5);
}

TEST_CASE("integration rule") {
  const SadikParams p(1.4, 0.2);
  const auto one = image_of(KnownFunction::one());
  CHECK(equivalent(integrate_image(one, p), image_of(KnownFunction::power(1))));
  CHECK(equivalent(integrate_image(integrate_image(one, p), p), image_of(KnownFunction::power(2)).scaled(0.5)));
  // int_0^t e^{a s} ds = (e^{a t} - 1)/a
  const double a = 1.5;
  const auto want = (image_of(KnownFunction::exponential(a)) - one).scaled(1.0 / a);
  CHECK(equivalent(integrate_image(image_of(KnownFunction::exponential(a)), p), want));
}

TEST_CASE("delay rule") {
  const auto one = image_of(KnownFunction::one());
  CHECK(equivalent(delay_image(one, 0.0), one));
  CHECK(equivalent(delay_image(one, 2.0), image_of(KnownFunction::heaviside(2.0))));
  CHECK(code_of([&] { delay_image(one, -1.0); }) == ErrorCode::NegativeDelay);
  const SadikParams p(1.2, 0.5);
  const auto ramp = delay_image(image_of(KnownFunction::power(1)), 1.0);
  for (double v : {1.3, 2.0}) {
    const double va = std::pow(v, p.alpha());
    CHECK(eval_image(ramp, v, p) ==
          doctest::Approx(std::exp(-va) * std::pow(v, -(2 * p.alpha() + p.beta()))).epsilon(1e-14));
  }
  for (double a : {0.5, 2.0}) {
    for (const auto& pt : lattice()) {
      const SadikParams q(pt.alpha, pt.beta);
      ForwardOptions opt;
      opt.support_start = a;
      const double numeric = forward_numeric([a](double t) { return t - a; }, q, pt.v, opt);
      CHECK(oracle::rel(numeric, eval_image(delay_image(image_of(KnownFunction::power(1)), a), pt.v, q)) < 1e-6);
    }
  }
}

TEST_CASE("convolution rule") {
  const SadikParams p(1.1, 0.6);
  const auto one = image_of(KnownFunction::one());
  CHECK(equivalent(convolve_images(one, one, p), image_of(KnownFunction::power(1))));
  const auto other = image_of(KnownFunction::sine(2.0));
  CHECK(equivalent(convolve_images(image_of(KnownFunction::dirac()), other, {1.1, 0.0}), other));
  const double a = 2.0, b = -1.0;
  const auto lhs = convolve_images(image_of(KnownFunction::exponential(a)), image_of(KnownFunction::exponential(b)), p);
  const auto rhs = (image_of(KnownFunction::exponential(a)) - image_of(KnownFunction::exponential(b))).scaled(1.0 / (a - b));
  CHECK(equivalent(lhs, rhs));
}

TEST_CASE("t^n multiplication rule") {
  auto close = [](const TnCheck& c, double want) {
    CHECK(c.lhs == doctest::Approx(want).epsilon(1e-9));
    CHECK(c.rhs == doctest::Approx(want).epsilon(1e-6));
  };
  close(tn_multiply_check([](double) { return 1.0; }, 1, {1, 0}, 2.0), 0.25);
  ForwardOptions grow;
  grow.growth = 1.0;
  close(tn_multiply_check([](double t) { return std::exp(t); }, 1, {1, 0}, 3.0, grow), 0.25);
  close(tn_multiply_check([](double) { return 1.0; }, 2, {1, 0}, 2.0), 0.25);
  // off the Laplace point
  const auto c = tn_multiply_check([](double t) { return std::sin(t); }, 2, {0.7, 1.3}, 2.5);
  CHECK(oracle::rel(c.rhs, c.lhs) < 1e-5);
}

TEST_CASE("initial and final values") {
  for (auto [a, b] : {std::pair{1.0, 0.0}, {2.0, 1.0}, {0.5, -1.0}}) {
    const SadikParams p(a, b);
    CHECK(initial_value(image_of(KnownFunction::exponential(1.0)), p) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(std::abs(initial_value(image_of(KnownFunction::sine(1.0)), p)) < 1e-4);
    CHECK(code_of([&] { initial_value(image_of(KnownFunction::dirac()), p); }) == ErrorCode::NotConvergent);
    CHECK(final_value(image_of(KnownFunction::one()), p) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(std::abs(final_value(image_of(KnownFunction::dirac()), p)) < 1e-4);
    CHECK(code_of([&] { final_value(image_of(KnownFunction::exponential(1.0)), p); }) ==
          ErrorCode::PoleOnPositiveAxis);
    CHECK(code_of([&] { final_value(image_of(KnownFunction::sine(1.0)), p); }) == ErrorCode::NotConvergent);
  }
  // callable form with a quadrature-backed image
  const SadikParams p(1.0, 0.5);
  const RealImageFn phi = [&](double v) {
    return forward_numeric([](double t) { return 1.0 - std::exp(-t); }, p, v);
  };
  CHECK(final_value(phi, p) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("numeric inversion") {
  CHECK(inverse_numeric(image_of(KnownFunction::one()), {0.6, 1.8}, 1.0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(inverse_numeric(image_of(KnownFunction::exponential(-1.0)), {1, 0}, 0.7) ==
        doctest::Approx(std::exp(-0.7)).epsilon(1e-8));
  // 1/(v^{0.5} + 1): t^{-1/2} E_{1/2,1/2}(-t^{1/2})
  const TransformImage k2 = image_of(KnownFunction::ml_kernel(0.5, 0.5, 0, 1.0, -1));
  for (double t : {0.3, 1.0, 2.5}) {
    const double want = std::pow(t, -0.5) * oracle::ml_series(0.5, 0.5, 0, -std::sqrt(t));
    CHECK(oracle::rel(inverse_numeric(k2, {1, 0}, t), want) < 1e-6);
  }
  // round trip
  const std::vector<std::pair<KnownFunction, std::function<double(double)>>> cases{
      {KnownFunction::one(), [](double) { return 1.0; }},
      {KnownFunction::power(1), [](double t) { return t; }},
      {KnownFunction::exponential(-1.0), [](double t) { return std::exp(-t); }},
      {KnownFunction::sine(2.0), [](double t) { return std::sin(2 * t); }},
  };
  for (const auto& [f, exact] : cases) {
    for (auto [a, b] : {std::pair{1.0, 0.0}, {2.0, 1.0}}) {
      for (double t : linspace(0.1, 5.0, 12)) {
        CHECK(oracle::rel(inverse_numeric(image_of(f), {a, b}, t), exact(t)) < 1e-5);
      }
    }
  }
  CHECK(code_of([] { inverse_numeric(image_of(KnownFunction::one()), {1, 0}, 0.0); }) == ErrorCode::InvalidParams);
}

TEST_CASE("image abscissa") {
  CHECK(image_abscissa(image_of(KnownFunction::exponential(2.0))) == doctest::Approx(2.0));
  CHECK(image_abscissa(image_of(KnownFunction::sine(3.0))) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(image_abscissa(image_of(KnownFunction::one())) == 0.0);
}
