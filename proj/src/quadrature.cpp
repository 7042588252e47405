#include "sadik/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "sadik/error.hpp"

namespace sadik::quadrature {

Rule gauss_jacobi(int n, double a, double b) {
  if (n < 1 || !(a > -1.0) || !(b > -1.0)) {
    throw Error(ErrorCode::InvalidParams, "gauss_jacobi requires n >= 1 and a, b > -1");
  }
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  const double ab = a + b;
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + ab;
    jacobi(k, k) = k == 0 ? (b - a) / (ab + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    if (k + 1 < n) {
      const int j = k + 1;
      const double t = 2.0 * j + ab;
      double off2;
      if (j == 1) {
        off2 = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
      } else {
        off2 = 4.0 * j * (j + a) * (j + b) * (j + ab) / (t * t * (t + 1.0) * (t - 1.0));
      }
      jacobi(k, j) = jacobi(j, k) = std::sqrt(off2);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                              std::lgamma(b + 1.0) - std::lgamma(ab + 2.0));
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

const Rule& gauss_legendre8() {
  static const Rule rule = gauss_jacobi(8, 0.0, 0.0);
  return rule;
}

namespace {

// Kronrod 15-point nodes (non-negative half) and weights; Gauss 7-point
// weights sit on the odd-indexed Kronrod nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment kronrod15(const RealFn& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

AdaptiveResult integrate(const RealFn& f, double a, double b, std::span<const double> breakpoints,
                         const AdaptiveOptions& options) {
  std::vector<double> cuts{a};
  for (double c : breakpoints) {
    if (c > a && c < b) cuts.push_back(c);
  }
  std::sort(cuts.begin() + 1, cuts.end());
  cuts.push_back(b);

  std::priority_queue<Segment> heap;
  AdaptiveResult result;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    heap.push(kronrod15(f, cuts[i], cuts[i + 1]));
    result.evaluations += 15;
  }

  std::vector<Segment> settled;  // too narrow to split further
  auto totals = [&] {
    double value = 0.0, error = 0.0;
    auto copy = heap;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      copy.pop();
    }
    for (const auto& s : settled) {
      value += s.value;
      error += s.error;
    }
    return std::pair{value, error};
  };

  double value = 0.0, error = 0.0;
  std::tie(value, error) = totals();
  int intervals = static_cast<int>(heap.size());
  while (error > std::max(options.epsabs, options.epsrel * std::abs(value)) && !heap.empty()) {
    if (intervals >= options.max_intervals) {
      std::ostringstream os;
      os << "adaptive quadrature on [" << a << ", " << b << "] stalled at error " << error
         << " (value " << value << ")";
      throw Error(ErrorCode::QuadratureFailure, os.str());
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) < 1e-14 * std::max(1.0, std::abs(mid))) {
      settled.push_back(worst);
    } else {
      const Segment left = kronrod15(f, worst.a, mid);
      const Segment right = kronrod15(f, mid, worst.b);
      result.evaluations += 30;
      value += left.value + right.value - worst.value;
      error += left.error + right.error - worst.error;
      heap.push(left);
      heap.push(right);
      ++intervals;
    }
    if (heap.empty()) break;
  }
  // Recompute once to shed accumulated cancellation in the running sums.
  std::tie(value, error) = totals();
  for (auto copy = heap; !copy.empty(); copy.pop()) {
    result.segments.emplace_back(copy.top().a, copy.top().b);
  }
  for (const auto& s : settled) result.segments.emplace_back(s.a, s.b);
  std::sort(result.segments.begin(), result.segments.end());
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::QuadratureFailure, "integrand produced non-finite values");
  }
  result.value = value;
  result.error = error;
  return result;
}

double integrate_on(const RealFn& f, std::span<const std::pair<double, double>> segments) {
  double sum = 0.0;
  for (const auto& [a, b] : segments) sum += kronrod15(f, a, b).value;
  return sum;
}

KernelIntegral power_kernel_integral(const RealFn& g, double t, double mu, int panels) {
  if (!(mu > 0.0)) throw Error(ErrorCode::InvalidOrder, "kernel exponent must be > 0");
  if (panels < 2) throw Error(ErrorCode::InvalidGrid, "need at least 2 panels");
  KernelIntegral out;
  if (t == 0.0) return out;

  const Rule& legendre = gauss_legendre8();
  const double h = t / panels;
  auto legendre_piece = [&](double lo, double hi) {
    KernelIntegral piece;
    const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < legendre.nodes.size(); ++i) {
      const double tau = c + r * legendre.nodes[i];
      const double w = r * legendre.weights[i] * std::pow(t - tau, mu - 1.0);
      const double gv = g(tau);
      piece.value += w * gv;
      piece.magnitude += w * std::abs(gv);
    }
    return piece;
  };
  auto add = [&](const KernelIntegral& piece) {
    out.value += piece.value;
    out.magnitude += piece.magnitude;
  };
  auto add_legendre = [&](double lo, double hi) { add(legendre_piece(lo, hi)); };

  // First panel: dyadic shells [h 2^-l-1, h 2^-l] down to 2^-L, then the
  // remainder [0, h 2^-L]. Near 0, g ~ c s^a makes the shells geometric with
  // ratio 2^-(a+1); when the innermost three agree on that ratio the
  // remainder is the tail of the series, which Legendre nodes cannot see.
  constexpr int kLevels = 40;
  std::vector<KernelIntegral> shells(kLevels);
  for (int l = 0; l < kLevels; ++l) {
    shells[l] = legendre_piece(h * std::ldexp(1.0, -l - 1), h * std::ldexp(1.0, -l));
  }
  const double eps = h * std::ldexp(1.0, -kLevels);
  const double s0 = shells[kLevels - 1].value, s1 = shells[kLevels - 2].value,
               s2 = shells[kLevels - 3].value;
  const double rho = s1 != 0.0 ? s0 / s1 : 0.0;
  const bool geometric = s1 != 0.0 && s2 != 0.0 && rho > 0.0 && rho < 1.0 &&
                         std::abs(rho - s1 / s2) <= 1e-6 * rho;
  if (geometric) {
    const double tail = rho / (1.0 - rho);
    out.value += s0 * tail;
    out.magnitude += shells[kLevels - 1].magnitude * tail;
  } else {
    add_legendre(0.0, eps);
  }
  for (int l = kLevels - 1; l >= 0; --l) add(shells[l]);
  for (int j = 1; j + 1 < panels; ++j) add_legendre(j * h, (j + 1) * h);

  // Last panel, u = t - tau = h (1 + x) / 2: weight (1 + x)^{mu - 1}.
  const Rule jacobi = gauss_jacobi(8, 0.0, mu - 1.0);
  const double scale = std::pow(0.5 * h, mu);
  for (std::size_t i = 0; i < jacobi.nodes.size(); ++i) {
    const double tau = t - 0.5 * h * (1.0 + jacobi.nodes[i]);
    const double gv = g(tau);
    out.value += scale * jacobi.weights[i] * gv;
    out.magnitude += scale * jacobi.weights[i] * std::abs(gv);
  }
  return out;
}

}  // namespace sadik::quadrature
