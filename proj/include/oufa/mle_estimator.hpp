#pragma once

/**
 * @file mle_estimator.hpp
 * @brief Maximum-likelihood estimation of the O.U. rate θ from a sampled path,
 *        with the asymptotic standard deviation, ±kσ bands and the
 *        law-of-the-iterated-logarithm envelope.
 *
 * Both estimators assume the centred process (μ = 0). Integrals are
 * discretised on the path grid with left endpoints:
 *
 *   ito:       θ̂ = −Σ ξ_i (ξ_{i+1} − ξ_i) / Σ ξ_i² Δt
 *   endpoint:  θ̂ = (σ² + ξ_0²/T − ξ_T²/T) / ((2/T) Σ ξ_i² Δt)
 *
 * The endpoint form is the Itô-formula rewrite of the first and reduces to
 * the familiar (1 + ξ_0²/T − ξ_T²/T)/(...) for σ = 1.
 */

#include <span>
#include <string_view>
#include <utility>

#include "oufa/ou_process.hpp"

namespace oufa {

enum class EstimatorForm { kItoDiscrete, kEndpoint };

std::string_view to_string(EstimatorForm f);

struct ThetaEstimate {
  double theta_hat = 0.0;
  double T = 0.0;
  double dt = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  EstimatorForm form = EstimatorForm::kItoDiscrete;

  /// θ̂ ≤ 0 is representable but cannot parameterise an operator.
  bool nonpositive() const noexcept { return !(theta_hat > 0.0); }
};

/// Throws ZeroDenominator when Σ ξ_i² Δt = 0.
ThetaEstimate estimate_theta_ito(const TimeGrid& grid, std::span<const double> values);
ThetaEstimate estimate_theta_ito(const SamplePath& path);

ThetaEstimate estimate_theta_endpoint(const TimeGrid& grid,
                                      std::span<const double> values,
                                      double sigma = 1.0);
/// Uses path.params.sigma.
ThetaEstimate estimate_theta_endpoint(const SamplePath& path);

/// √(2θ/T).
double asymptotic_std(double theta, double T);

struct Band {
  double lo;
  double hi;
  bool contains(double error) const noexcept { return lo <= error && error <= hi; }
};

/// ±k√(2θ/T) around zero, for the error θ̂ − θ. The band is closed.
Band confidence_band(double theta, double T, double k = 3.0);

/// √(4θ log log T / T). Throws DomainError for T ≤ e.
double lil_envelope(double theta, double T);

}  // namespace oufa
