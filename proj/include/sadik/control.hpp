#pragma once

#include <complex>
#include <span>
#include <vector>

#include "sadik/core.hpp"
#include "sadik/transform.hpp"

namespace sadik {

struct TransferTerm {
  double r = 1.0;
  double gamma = 0.0;
};

/// K_n(v) = 1 / sum_k r_k v^{gamma_k alpha}, orders strictly decreasing,
/// leading coefficient non-zero.
class TransferFunction {
 public:
  explicit TransferFunction(std::vector<TransferTerm> terms);

  const std::vector<TransferTerm>& terms() const noexcept { return terms_; }

  /// sum_k r_k s^{gamma_k} at s = v^alpha on the branch carried by v.
  std::complex<double> characteristic(const ComplexV& v, const SadikParams& params) const;

  /// Largest real part of the zeros of sum_k r_k s^{gamma_k} with |arg s| < pi
  /// (0 if none lies to the right), found by Newton iteration in log s.
  double abscissa() const;

  /// Largest |Im s| among those zeros.
  double imaginary_reach() const;

 private:
  std::vector<std::complex<double>> zeros() const;

  std::vector<TransferTerm> terms_;
};

/// K_n(v, alpha, beta).
double transfer_eval(const TransferFunction& tf, const SadikParams& params, double v,
                     double pole_guard = kDefaultPoleGuard);
std::complex<double> transfer_eval(const TransferFunction& tf, const SadikParams& params,
                                   const ComplexV& v);

/// K_2 = 1 / (r v^{gamma alpha} + d) as a closed-form image.
TransformImage two_term_image(double r, double d, double gamma);

/// Impulse response of r D^gamma phi + d phi = delta:
/// (1/r) t^{gamma-1} E_{gamma,gamma}(-(d/r) t^gamma), t > 0.
SampledSignal impulse_response(double r, double d, double gamma, std::span<const double> grid);

/// Step response (1/r) t^gamma E_{gamma,gamma+1}(-(d/r) t^gamma), t >= 0.
SampledSignal step_response(double r, double d, double gamma, std::span<const double> grid);

/// Inverse transform of the system output for a delta input, v^-beta K_n
/// (the image of delta times K_n), so the result is independent of beta.
SampledSignal impulse_response_numeric(const TransferFunction& tf, const SadikParams& params,
                                       std::span<const double> grid,
                                       const InversionOptions& options = {});

/// Same for a unit-step input, image K_n v^{-(alpha+beta)}. Zero at t = 0.
SampledSignal step_response_numeric(const TransferFunction& tf, const SadikParams& params,
                                    std::span<const double> grid,
                                    const InversionOptions& options = {});

}  // namespace sadik
