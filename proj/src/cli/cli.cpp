#include "sadik/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>

#include "io.hpp"
#include "sadik/control.hpp"
#include "sadik/fode.hpp"
#include "sadik/transform.hpp"
#include "verify_suites.hpp"

namespace sadik {

namespace {

using cli::CsvWriter;
using cli::format_number;
using cli::parallel_for;
using cli::parse_grid;

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-12);
}

// --out if given, else the caller's stream.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error(ErrorCode::InvalidParams, "cannot write " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::string fig_path(const std::string& dir, const std::string& stem, double gamma) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / (stem + "_gamma_" + format_number(gamma) + ".csv")).string();
}

int report_tolerance(std::ostream& err, const std::string& what, double worst, double tol) {
  err << what << ": max rel_err = " << format_number(worst) << " (tol " << format_number(tol)
      << ")\n";
  if (!(worst < tol)) {
    err << what << ": tolerance exceeded\n";
    return 1;
  }
  return 0;
}

// ---------------------------------------------------------------- transform

struct TransformArgs {
  std::string func;
  int n = 0;
  double a = 1.0, p = 1.0, q = 1.0;
  int m = 0, sign = 1;
  double alpha = 0.0, beta = 0.0;
  std::string v;
  double tol = 1e-6;
  std::string out;
};

KnownFunction make_function(const TransformArgs& a) {
  if (a.func == "one") return KnownFunction::one();
  if (a.func == "power") return KnownFunction::power(a.n);
  if (a.func == "exp") return KnownFunction::exponential(a.a);
  if (a.func == "sin") return KnownFunction::sine(a.a);
  if (a.func == "heaviside") return KnownFunction::heaviside(a.a);
  if (a.func == "dirac") return KnownFunction::dirac();
  return KnownFunction::ml_kernel(a.p, a.q, a.m, a.a, a.sign);
}

int cmd_transform(const TransformArgs& args, std::ostream& out, std::ostream& err) {
  const SadikParams params(args.alpha, args.beta);
  params.require_numeric();
  const KnownFunction f = make_function(args);
  const auto grid = parse_grid(args.v);
  const auto image = image_of(f);
  std::vector<double> numeric(grid.size()), closed(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    closed[i] = eval_image(image, grid[i], params);
    numeric[i] = forward_numeric(f, params, grid[i]);
  });
  Output sink(args.out, out);
  CsvWriter csv(sink.stream(), {"v", "numeric", "closed_form", "rel_err"});
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double e = rel_err(numeric[i], closed[i]);
    worst = std::max(worst, e);
    csv.row({grid[i], numeric[i], closed[i], e});
  }
  return report_tolerance(err, "transform " + f.describe(), worst, args.tol);
}

// ---------------------------------------------------------------- verify

int cmd_verify(const std::string& which, std::ostream& out, std::ostream& err) {
  std::vector<const cli::Suite*> chosen;
  for (const auto& s : cli::verification_suites()) {
    if (which == "all" || which == s.name) chosen.push_back(&s);
  }
  std::vector<std::vector<cli::CheckResult>> results(chosen.size());
  parallel_for(chosen.size(), [&](std::size_t i) { results[i] = chosen[i]->run(); });

  int total = 0, passed = 0;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    for (const auto& r : results[i]) {
      ++total;
      passed += r.passed;
      out << (r.passed ? "PASS " : "FAIL ") << chosen[i]->name << ": " << r.name
          << "  worst=" << format_number(r.worst) << " tol=" << format_number(r.tol);
      if (!r.detail.empty()) out << "  [" << r.detail << "]";
      out << '\n';
    }
  }
  out << "verify " << which << ": " << passed << "/" << total << " checks passed\n";
  if (passed != total) {
    err << "verify " << which << ": " << (total - passed) << " check(s) failed\n";
    return 1;
  }
  return 0;
}

// ---------------------------------------------------------------- fode

struct FodeArgs {
  double gamma = 0.0, b = 0.0, y0 = 1.0;
  std::string t = "0:1:101";
  double h = 1e-3, tol = 5e-3;
  int passes = 2;
  std::string out, out_dir = ".";
  bool fig1 = false;
};

// Writes one relaxation table and returns the largest relative difference.
double fode_table(double gamma, double b, double y0, const std::vector<double>& grid, double h,
                  int passes, std::ostream& out) {
  const auto closed = solve_relaxation({gamma, b, y0}, grid);
  const double t_end = grid.back();
  std::vector<double> oracle(grid.size(), y0);
  if (t_end >= h) {
    const auto sol = adams_oracle(gamma, [b](double, double y) { return b * y; }, y0, h, t_end, passes);
    const auto ts = sol.t();
    const auto ys = sol.y();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      // Linear interpolation on the uniform oracle grid.
      const double x = grid[i] / h;
      const auto k = std::min<std::size_t>(static_cast<std::size_t>(x), ts.size() - 2);
      const double w = x - static_cast<double>(k);
      oracle[i] = (1.0 - w) * ys[k] + w * ys[k + 1];
    }
  }
  CsvWriter csv(out, {"t", "y_closed", "y_oracle", "rel_err"});
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double y = closed.y()[i];
    const double e = rel_err(oracle[i], y);
    if (grid[i] >= h) worst = std::max(worst, e);
    csv.row({grid[i], y, oracle[i], e});
  }
  return worst;
}

int cmd_fode(const FodeArgs& args, std::ostream& out, std::ostream& err) {
  if (args.fig1) {
    const auto grid = linspace(0.0, 1.0, 101);
    int code = 0;
    for (double gamma : {0.5, 0.7, 0.9, 1.0}) {
      const std::string path = fig_path(args.out_dir, "fig1", gamma);
      std::ofstream file(path);
      if (!file) throw Error(ErrorCode::InvalidParams, "cannot write " + path);
      const double worst = fode_table(gamma, 3.0, 1.0, grid, args.h, args.passes, file);
      err << "wrote " << path << '\n';
      code = std::max(code, report_tolerance(err, "fode gamma=" + format_number(gamma), worst, args.tol));
    }
    return code;
  }
  const auto grid = parse_grid(args.t);
  validate_grid(grid);
  Output sink(args.out, out);
  const double worst = fode_table(args.gamma, args.b, args.y0, grid, args.h, args.passes, sink.stream());
  return report_tolerance(err, "fode gamma=" + format_number(args.gamma), worst, args.tol);
}

// ---------------------------------------------------------------- control

struct ControlArgs {
  bool impulse = false, step = false, fig2 = false, fig3 = false;
  double gamma = 0.0, r = 1.0, d = 1.0, alpha = 1.0, beta = 0.0;
  std::string t = "0.001:5:200";
  double tol = 1e-4;
  std::string out, out_dir = ".";
};

double control_table(bool impulse, double gamma, double r, double d, const SadikParams& params,
                     const std::vector<double>& grid, std::ostream& out) {
  const TransferFunction tf({{r, gamma}, {d, 0.0}});
  const auto closed = impulse ? impulse_response(r, d, gamma, grid) : step_response(r, d, gamma, grid);
  std::vector<double> numeric(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const double t[] = {grid[i]};
    numeric[i] = (impulse ? impulse_response_numeric(tf, params, t)
                          : step_response_numeric(tf, params, t))
                     .y()[0];
  });
  CsvWriter csv(out, {"t", "closed_form", "numeric_inverse", "rel_err"});
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double c = closed.y()[i];
    const double e = grid[i] == 0.0 && c == 0.0 && numeric[i] == 0.0 ? 0.0 : rel_err(numeric[i], c);
    worst = std::max(worst, e);
    csv.row({grid[i], c, numeric[i], e});
  }
  return worst;
}

int cmd_control(const ControlArgs& args, std::ostream& out, std::ostream& err) {
  const SadikParams params(args.alpha, args.beta);
  params.require_numeric();
  if (args.fig2 || args.fig3) {
    const auto grid = linspace(1e-3, 5.0, 200);
    int code = 0;
    for (bool impulse : {true, false}) {
      if (impulse ? !args.fig2 : !args.fig3) continue;
      for (double gamma : {0.5, 0.8, 1.0}) {
        const std::string path = fig_path(args.out_dir, impulse ? "fig2_impulse" : "fig3_step", gamma);
        std::ofstream file(path);
        if (!file) throw Error(ErrorCode::InvalidParams, "cannot write " + path);
        const double worst = control_table(impulse, gamma, 1.0, 1.0, params, grid, file);
        err << "wrote " << path << '\n';
        code = std::max(code, report_tolerance(err, path, worst, args.tol));
      }
    }
    return code;
  }
  if (args.impulse == args.step) {
    throw Error(ErrorCode::InvalidParams, "choose exactly one of --impulse, --step, --fig2, --fig3");
  }
  if (!(args.gamma > 0.0)) throw Error(ErrorCode::InvalidParams, "--gamma must be > 0");
  const auto grid = parse_grid(args.t);
  Output sink(args.out, out);
  const double worst = control_table(args.impulse, args.gamma, args.r, args.d, params, grid, sink.stream());
  return report_tolerance(err, args.impulse ? "impulse response" : "step response", worst, args.tol);
}

// ---------------------------------------------------------------- ml

struct MlArgs {
  double p = 1.0, q = 1.0;
  int m = 0;
  std::string z, out;
};

int cmd_ml(const MlArgs& args, std::ostream& out) {
  const MittagLeffler e({args.p, args.q, args.m});
  const auto grid = parse_grid(args.z);
  std::vector<double> values(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { values[i] = e(grid[i]); });
  Output sink(args.out, out);
  CsvWriter csv(sink.stream(), {"z", "value"});
  for (std::size_t i = 0; i < grid.size(); ++i) csv.row({grid[i], values[i]});
  return 0;
}

// ---------------------------------------------------------------- caputo

struct CaputoArgs {
  std::string func = "power";
  int n = 1;
  double a = 1.0, gamma = 0.0;
  std::string t, out;
  int panels = kDefaultPanels;
  double tol = 1e-6;
};

int cmd_caputo(const CaputoArgs& args, std::ostream& out, std::ostream& err) {
  const FracOrder order(args.gamma);
  const int n = order.n();
  const double g = order.gamma();
  RealFn f, dn, closed;
  if (args.func == "one") {
    f = [](double) { return 1.0; };
    dn = [](double) { return 0.0; };
    closed = [](double) { return 0.0; };
  } else if (args.func == "power") {
    const int k = args.n;
    if (k < 0) throw Error(ErrorCode::InvalidParams, "--n must be >= 0");
    f = [k](double t) { return std::pow(t, k); };
    // d^n/dt^n t^k = k!/(k-n)! t^{k-n}, zero when k < n.
    const double falling = k < n ? 0.0 : std::tgamma(k + 1.0) / std::tgamma(k - n + 1.0);
    dn = [k, n, falling](double t) { return k < n ? 0.0 : falling * std::pow(t, k - n); };
    closed = [k, n, g](double t) {
      return k < n ? 0.0 : std::tgamma(k + 1.0) / std::tgamma(k + 1.0 - g) * std::pow(t, k - g);
    };
  } else {
    const double a = args.a;
    f = [a](double t) { return std::exp(a * t); };
    dn = [a, n](double t) { return std::pow(a, n) * std::exp(a * t); };
    auto e = std::make_shared<const MittagLeffler>(MLSpec{1.0, n + 1.0 - g, 0});
    closed = [a, n, g, e](double t) { return std::pow(a, n) * std::pow(t, n - g) * (*e)(a * t); };
  }
  const auto grid = parse_grid(args.t);
  std::vector<double> numeric(grid.size()), exact(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    numeric[i] = caputo_derivative(f, order, grid[i], args.panels, dn);
    exact[i] = closed(grid[i]);
  });
  Output sink(args.out, out);
  CsvWriter csv(sink.stream(), {"t", "numeric", "closed_form", "rel_err"});
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double e = rel_err(numeric[i], exact[i]);
    worst = std::max(worst, e);
    csv.row({grid[i], numeric[i], exact[i], e});
  }
  return report_tolerance(err, "caputo " + args.func, worst, args.tol);
}

// ---------------------------------------------------------------- driver

const std::map<std::string, std::string> kGridFlag{
    {"transform", "v"}, {"ml", "z"}, {"fode", "t"}, {"control", "t"}, {"caputo", "t"}, {"verify", "t"}};

// Pulls --config out of args and splices the file's options in right after
// the subcommand name, so explicit flags (which come later) win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + i);
      break;
    }
  }
  if (path.empty()) return args;
  auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) { return kGridFlag.count(a) > 0; });
  if (sub == args.end()) throw Error(ErrorCode::InvalidParams, "--config needs a subcommand");
  const auto extra = cli::config_arguments(path, kGridFlag.at(*sub));
  args.insert(sub + 1, extra.begin(), extra.end());
  return args;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::InvalidParams:
    case ErrorCode::InvalidOrder:
    case ErrorCode::InvalidGrid:
      return 2;
    default:
      return 1;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sadik transform, fractional calculus and Mittag-Leffler toolkit", "sadik-frac"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");
  app.add_option("--config", "JSON file of option values (flags override)");

  TransformArgs ta;
  auto* transform = app.add_subcommand("transform", "Numeric transform vs closed-form image");
  transform->add_option("--func", ta.func, "one|power|exp|sin|heaviside|dirac|ml")
      ->required()
      ->check(CLI::IsMember({"one", "power", "exp", "sin", "heaviside", "dirac", "ml"}));
  transform->add_option("--n", ta.n, "power exponent");
  transform->add_option("--a", ta.a, "rate or shift");
  transform->add_option("--p", ta.p, "ml kernel p");
  transform->add_option("--q", ta.q, "ml kernel q");
  transform->add_option("--m", ta.m, "ml kernel derivative order");
  transform->add_option("--sign", ta.sign, "ml kernel sign (+1 or -1)");
  transform->add_option("--alpha", ta.alpha, "alpha > 0")->required();
  transform->add_option("--beta", ta.beta, "beta");
  transform->add_option("--v", ta.v, "v grid a:b:n or a single value")->required();
  transform->add_option("--tol", ta.tol, "relative tolerance");
  transform->add_option("--out", ta.out, "output CSV path");

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run theorem self-checks");
  std::vector<std::string> suite_names{"all"};
  for (const auto& s : cli::verification_suites()) suite_names.emplace_back(s.name);
  verify->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names));

  FodeArgs fa;
  auto* fode = app.add_subcommand("fode", "Relaxation equation: closed form vs Adams oracle");
  auto* fode_gamma = fode->add_option("--gamma", fa.gamma, "order in (0, 1]");
  fode->add_option("--b", fa.b, "rate b");
  fode->add_option("--y0", fa.y0, "initial value");
  fode->add_option("--t", fa.t, "time grid a:b:n");
  fode->add_option("--step-size", fa.h, "Adams oracle step h");
  fode->add_option("--corrector-passes", fa.passes, "Adams corrector passes (1 = plain PECE)");
  fode->add_option("--tol", fa.tol, "relative tolerance");
  fode->add_option("--out", fa.out, "output CSV path");
  fode->add_option("--out-dir", fa.out_dir, "directory for --fig1 files");
  auto* fig1 = fode->add_flag("--fig1", fa.fig1, "gamma in {0.5,0.7,0.9,1}, b=3, y0=1 on [0,1]");
  fode_gamma->excludes(fig1);

  ControlArgs ca;
  auto* control = app.add_subcommand("control", "Two-term transfer function responses");
  control->add_flag("--impulse", ca.impulse, "unit-impulse response");
  control->add_flag("--step", ca.step, "unit-step response");
  control->add_flag("--fig2", ca.fig2, "impulse responses, gamma in {0.5,0.8,1}, r=d=1");
  control->add_flag("--fig3", ca.fig3, "step responses, gamma in {0.5,0.8,1}, r=d=1");
  control->add_option("--gamma", ca.gamma, "order > 0");
  control->add_option("--r", ca.r, "coefficient of the derivative term");
  control->add_option("--d", ca.d, "constant coefficient");
  control->add_option("--alpha", ca.alpha, "alpha > 0 (responses do not depend on it)");
  control->add_option("--beta", ca.beta, "beta");
  control->add_option("--t", ca.t, "time grid a:b:n");
  control->add_option("--tol", ca.tol, "relative tolerance");
  control->add_option("--out", ca.out, "output CSV path");
  control->add_option("--out-dir", ca.out_dir, "directory for figure files");

  MlArgs ma;
  auto* mlc = app.add_subcommand("ml", "Mittag-Leffler function values");
  mlc->add_option("--p", ma.p, "p > 0");
  mlc->add_option("--q", ma.q, "q > 0");
  mlc->add_option("--m", ma.m, "derivative order");
  mlc->add_option("--z", ma.z, "argument grid a:b:n or a single value")->required();
  mlc->add_option("--out", ma.out, "output CSV path");

  CaputoArgs pa;
  auto* caputo = app.add_subcommand("caputo", "Numeric Caputo derivative vs closed form");
  caputo->add_option("--func", pa.func, "one|power|exp")->check(CLI::IsMember({"one", "power", "exp"}));
  caputo->add_option("--n", pa.n, "power exponent");
  caputo->add_option("--a", pa.a, "exponential rate");
  caputo->add_option("--gamma", pa.gamma, "non-integer order > 0")->required();
  caputo->add_option("--t", pa.t, "time grid a:b:n (t > 0)")->required();
  caputo->add_option("--panels", pa.panels, "quadrature panels");
  caputo->add_option("--tol", pa.tol, "relative tolerance");
  caputo->add_option("--out", pa.out, "output CSV path");

  try {
    std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
    args = expand_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }

  try {
    if (transform->parsed()) return cmd_transform(ta, out, err);
    if (verify->parsed()) return cmd_verify(suite, out, err);
    if (fode->parsed()) {
      if (!fa.fig1 && fode_gamma->count() == 0) {
        throw Error(ErrorCode::InvalidParams, "--gamma is required unless --fig1 is given");
      }
      return cmd_fode(fa, out, err);
    }
    if (control->parsed()) return cmd_control(ca, out, err);
    if (mlc->parsed()) return cmd_ml(ma, out);
    if (caputo->parsed()) return cmd_caputo(pa, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace sadik
