#include "oufa/predictor.hpp"

#include <cmath>

#include "oufa/errors.hpp"

namespace oufa {

FunctionalSegment plug_in_predict(double theta_hat, const FunctionalSegment& x_prev) {
  if (!(theta_hat > 0.0)) {
    throw DomainError("plug-in prediction needs theta_hat > 0");
  }
  return apply_rho(RhoOperator(theta_hat, x_prev.grid), x_prev);
}

PredictionRecord predict_record(double theta_hat, const FunctionalSegment& x_prev,
                                std::optional<double> theta_true) {
  PredictionRecord rec{theta_true, theta_hat, x_prev.at_h(),
                       plug_in_predict(theta_hat, x_prev), std::nullopt, std::nullopt};
  if (theta_true) {
    const double h = x_prev.grid.h();
    rec.err_H = prediction_error_H(*theta_true, theta_hat, rec.x_prev_h, h);
    rec.err_B = prediction_error_B(*theta_true, theta_hat, rec.x_prev_h, h);
  }
  return rec;
}

double prediction_error_H(double theta, double theta_hat, double x_prev_h, double h) {
  return std::fabs(x_prev_h) * operator_distance_H(theta, theta_hat, h);
}

double prediction_error_B(double theta, double theta_hat, double x_prev_h, double h) {
  return std::fabs(x_prev_h) * operator_distance_B(theta, theta_hat, h);
}

double error_bound_H(double theta, double theta_hat, double x_prev_h, double h) {
  return std::fabs(x_prev_h) * operator_distance_H_bound(theta, theta_hat, h);
}

double error_bound_B(double theta, double theta_hat, double x_prev_h, double h) {
  if (!(h > 0.0)) throw DomainError("segment length h must be > 0");
  return std::fabs(x_prev_h) * std::fabs(theta - theta_hat) * h;
}

double prediction_error_H_nodes(double theta, double theta_hat,
                                const FunctionalSegment& x_prev) {
  const auto diff = subtract(apply_rho(RhoOperator(theta, x_prev.grid), x_prev),
                             plug_in_predict(theta_hat, x_prev));
  return h_norm(diff);
}

double prediction_error_B_nodes(double theta, double theta_hat,
                                const FunctionalSegment& x_prev) {
  const auto diff = subtract(apply_rho(RhoOperator(theta, x_prev.grid), x_prev),
                             plug_in_predict(theta_hat, x_prev));
  return b_norm(diff);
}

double forecast_rmse(const FunctionalSegment& predicted, const FunctionalSegment& actual) {
  const double h = predicted.grid.h();
  return h_norm(subtract(predicted, actual)) / std::sqrt(h + 1.0);
}

}  // namespace oufa
