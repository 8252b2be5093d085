#pragma once

// Plug-in one-segment-ahead predictor X̂_n(t) = e^{−θ̂t} X_{n−1}(h) and its
// error functionals. Because ρ is rank one, every error is |X_{n−1}(h)| times
// an operator distance, so the functions take the scalar x_prev_h.

#include <optional>

#include "oufa/functional_frame.hpp"

namespace oufa {

struct PredictionRecord {
  std::optional<double> theta_true;
  double theta_hat = 0.0;
  double x_prev_h = 0.0;
  FunctionalSegment predicted;
  std::optional<double> err_H;
  std::optional<double> err_B;
};

/// Throws DomainError for θ̂ ≤ 0.
FunctionalSegment plug_in_predict(double theta_hat, const FunctionalSegment& x_prev);

/// Prediction plus, when θ is known, the exact H and B errors.
PredictionRecord predict_record(double theta_hat, const FunctionalSegment& x_prev,
                                std::optional<double> theta_true = std::nullopt);

/// ‖(ρ_θ − ρ_θ̂)(X_{n−1})‖_H.
double prediction_error_H(double theta, double theta_hat, double x_prev_h, double h);
/// ‖(ρ_θ − ρ_θ̂)(X_{n−1})‖_B.
double prediction_error_B(double theta, double theta_hat, double x_prev_h, double h);

/// |x(h)| |θ − θ̂| h √(h/3 + 1).
double error_bound_H(double theta, double theta_hat, double x_prev_h, double h);
/// |x(h)| |θ − θ̂| h.
double error_bound_B(double theta, double theta_hat, double x_prev_h, double h);

/// Segment-level versions computed from the two predicted segments with the
/// discrete norms. Used to cross-check the closed forms above.
double prediction_error_H_nodes(double theta, double theta_hat, const FunctionalSegment& x_prev);
double prediction_error_B_nodes(double theta, double theta_hat, const FunctionalSegment& x_prev);

/// Root-mean-square gap between a forecast and the realised segment, using
/// the H norm normalised by ‖1‖_H. Diagnostic only.
double forecast_rmse(const FunctionalSegment& predicted, const FunctionalSegment& actual);

}  // namespace oufa
