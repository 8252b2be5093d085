#include "oufa/mle_estimator.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "oufa/errors.hpp"
#include "oufa/kernels.hpp"

namespace oufa {

namespace {

void check_shape(const TimeGrid& grid, std::span<const double> values) {
  if (values.size() != grid.n_points()) {
    throw GridMismatch("path has " + std::to_string(values.size()) +
                       " values but the grid has " + std::to_string(grid.n_points()) +
                       " points");
  }
}

void check_positive(double theta, double T) {
  if (!(theta > 0.0)) throw DomainError("theta must be > 0");
  if (!(T > 0.0)) throw DomainError("T must be > 0");
}

}  // namespace

std::string_view to_string(EstimatorForm f) {
  return f == EstimatorForm::kItoDiscrete ? "ito" : "endpoint";
}

ThetaEstimate estimate_theta_ito(const TimeGrid& grid, std::span<const double> values) {
  check_shape(grid, values);
  const kernels::ItoSums sums = kernels::ito_sums(values);
  ThetaEstimate est;
  est.form = EstimatorForm::kItoDiscrete;
  est.T = grid.t_end();
  est.dt = grid.dt();
  est.numerator = -sums.cross;
  est.denominator = sums.squares * grid.dt();
  if (!(est.denominator > 0.0)) {
    throw ZeroDenominator("sum of squared path values is zero");
  }
  est.theta_hat = est.numerator / est.denominator;
  return est;
}

ThetaEstimate estimate_theta_ito(const SamplePath& path) {
  return estimate_theta_ito(path.grid, path.values);
}

ThetaEstimate estimate_theta_endpoint(const TimeGrid& grid,
                                      std::span<const double> values, double sigma) {
  check_shape(grid, values);
  const double T = grid.t_end();
  const double integral = kernels::ito_sums(values).squares * grid.dt();
  ThetaEstimate est;
  est.form = EstimatorForm::kEndpoint;
  est.T = T;
  est.dt = grid.dt();
  const double x0 = values.front();
  const double xT = values.back();
  est.numerator = sigma * sigma + x0 * x0 / T - xT * xT / T;
  est.denominator = 2.0 / T * integral;
  if (!(est.denominator > 0.0)) {
    throw ZeroDenominator("sum of squared path values is zero");
  }
  est.theta_hat = est.numerator / est.denominator;
  return est;
}

ThetaEstimate estimate_theta_endpoint(const SamplePath& path) {
  return estimate_theta_endpoint(path.grid, path.values, path.params.sigma);
}

double asymptotic_std(double theta, double T) {
  check_positive(theta, T);
  return std::sqrt(2.0 * theta / T);
}

Band confidence_band(double theta, double T, double k) {
  if (k < 0.0) throw DomainError("band multiplier must be >= 0");
  const double half = k * asymptotic_std(theta, T);
  return {-half, half};
}

double lil_envelope(double theta, double T) {
  check_positive(theta, T);
  if (!(T > std::numbers::e)) {
    throw DomainError("LIL envelope needs T > e, got " + std::to_string(T));
  }
  return std::sqrt(4.0 * theta * std::log(std::log(T)) / T);
}

}  // namespace oufa
