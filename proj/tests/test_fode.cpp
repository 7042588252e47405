#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sadik/fode.hpp"
#include "sadik/transform.hpp"

using namespace sadik;

namespace {

double interp(const SampledSignal& s, double t) {
  const auto ts = s.t();
  const auto ys = s.y();
  const double h = ts[1] - ts[0];
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(t / h), ts.size() - 2);
  const double w = t / h - static_cast<double>(k);
  return (1 - w) * ys[k] + w * ys[k + 1];
}

}  // namespace

TEST_CASE("relaxation closed form") {
  const double t02[] = {0.2};
  CHECK(solve_relaxation({1.0, 3.0, 1.0}, t02).y()[0] == doctest::Approx(std::exp(0.6)).epsilon(1e-14));
  const double t0[] = {0.0};
  CHECK(solve_relaxation({0.5, -7.0, 2.5}, t0).y()[0] == 2.5);
  const double t1[] = {1.0};
  CHECK(solve_relaxation({0.5, -1.0, 2.0}, t1).y()[0] ==
        doctest::Approx(2.0 * oracle::ml_series(0.5, 1.0, 0, -1.0)).epsilon(1e-13));
  CHECK_THROWS_AS(solve_relaxation({0.0, 1.0, 1.0}, t1), Error);
  CHECK_THROWS_AS(solve_relaxation({1.2, 1.0, 1.0}, t1), Error);
}

TEST_CASE("order-one limit and monotonicity") {
  const auto grid = linspace(0.0, 1.0, 51);
  for (double b : {-2.0, 3.0}) {
    const auto y = solve_relaxation({1.0 - 1e-6, b, 1.0}, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(std::abs(y.y()[i] - std::exp(b * grid[i])) <= 1e-4 * std::exp(b * grid[i]));
    }
  }
  for (double g : {0.3, 0.6, 0.9}) {
    const auto y = solve_relaxation({g, 3.0, 1.0}, grid);
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(y.y()[i] >= y.y()[i - 1]);
  }
}

TEST_CASE("transform route reproduces the equation") {
  // D^g y = b y with y(0) = y0: caputo_image(Y) = b Y for the kernel image
  for (double g : {0.4, 0.75}) {
    const double b = 3.0, y0 = 1.5;
    const auto y = image_of(KnownFunction::ml_kernel(g, 1.0, 0, b, 1)).scaled(y0);
    const double init[] = {y0};
    CHECK(equivalent(caputo_image(y, {1.3, 0.4}, FracOrder(g), init), y.scaled(b)));
  }
}

TEST_CASE("forced problem") {
  const auto grid = linspace(0.0, 1.0, 5);
  const auto zero = solve_forced({0.5, 2.0, [](double) { return 0.0; }}, grid);
  for (double y : zero.y()) CHECK(y == 2.0);
  const double t1[] = {1.0};
  CHECK(solve_forced({0.5, 0.0, [](double) { return 1.0; }}, t1).y()[0] ==
        doctest::Approx(1.0 / std::tgamma(1.5)).epsilon(1e-12));
  CHECK(solve_forced({1.0, 1.0, [](double t) { return std::exp(t); }}, t1).y()[0] ==
        doctest::Approx(std::exp(1.0)).epsilon(1e-12));
}

TEST_CASE("Adams oracle") {
  const double h = 1e-3;
  const auto fast = adams_oracle(0.9, [](double, double y) { return 3 * y; }, 1.0, h, 1.0);
  CHECK(oracle::rel(fast.y().back(), oracle::ml_series(0.9, 1.0, 0, 3.0)) < 1e-3);
  const auto flat = adams_oracle(0.4, [](double, double) { return 0.0; }, 1.7, 0.01, 1.0);
  for (double y : flat.y()) CHECK(y == 1.7);
  const auto decay = adams_oracle(0.5, [](double, double y) { return -y; }, 1.0, h, 1.0);
  CHECK(std::abs(decay.y().back() - 0.4275836) < 2e-3);
  CHECK_THROWS_AS(adams_oracle(0.5, [](double, double y) { return y; }, 1.0, 0.0, 1.0), Error);
  try {
    adams_oracle(0.9, [](double, double y) { return 50 * y; }, 1.0, 1e-2, 2.0);
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StepOverflow);
  }
}

TEST_CASE("oracle agreement across the figure regime") {
  const double h = 1e-3;
  for (double g : {0.5, 0.7, 0.9}) {
    for (double b : {-1.0, 3.0}) {
      const auto sol = adams_oracle(g, [b](double, double y) { return b * y; }, 1.0, h, 1.0, 2);
      const auto grid = linspace(h, 1.0, 200);
      const auto closed = solve_relaxation({g, b, 1.0}, grid);
      double worst = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        worst = std::max(worst, oracle::rel(interp(sol, grid[i]), closed.y()[i]));
      }
      CAPTURE(g);
      CAPTURE(b);
      CHECK(worst < 5e-3);
    }
  }
}

TEST_CASE("a second corrector pass helps at small gamma") {
  const double h = 1e-3;
  const auto rhs = [](double, double y) { return 3 * y; };
  const double want = oracle::ml_series(0.5, 1.0, 0, 3.0);
  const double one = oracle::rel(adams_oracle(0.5, rhs, 1.0, h, 1.0).y().back(), want);
  const double two = oracle::rel(adams_oracle(0.5, rhs, 1.0, h, 1.0, 2).y().back(), want);
  CHECK(two < one);
  CHECK_THROWS_AS(adams_oracle(0.5, rhs, 1.0, h, 1.0, 0), Error);
}

TEST_CASE("exponential bounds") {
  const auto grid = linspace(0.0, 3.0, 61);
  std::vector<double> y;
  for (double t : grid) y.push_back(std::exp(2 * t));
  const SampledSignal sig(grid, y);
  CHECK(check_exp_bound(sig, {1.0, 2.0, 0.0}));
  CHECK_FALSE(check_exp_bound(sig, {1.0, 1.0, 0.0}));
  const auto relax = solve_relaxation({0.5, 1.0, 1.0}, linspace(0.0, 5.0, 101));
  CHECK(check_exp_bound(relax, {2.0, 1.1, 1.0}));
}
