#include "oufa/ou_process.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "oufa/errors.hpp"

namespace oufa {

void OuParams::validate() const {
  if (!std::isfinite(theta) || !std::isfinite(mu) || !std::isfinite(sigma)) {
    throw DomainError("O.U. parameters must be finite");
  }
  if (theta <= 0.0) throw DomainError("theta must be > 0, got " + std::to_string(theta));
  if (sigma <= 0.0) throw DomainError("sigma must be > 0, got " + std::to_string(sigma));
}

TimeGrid::TimeGrid(double t_end, double dt) : t_end_(t_end), dt_(dt), n_steps_(0) {
  if (!(t_end > 0.0) || !(dt > 0.0) || !std::isfinite(t_end) || !std::isfinite(dt)) {
    throw DomainError("time grid needs T > 0 and dt > 0");
  }
  const double ratio = t_end / dt;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::fabs(rounded * dt - t_end) > 1e-9 * t_end) {
    throw GridMismatch("T = " + std::to_string(t_end) +
                       " is not an integer multiple of dt = " + std::to_string(dt));
  }
  n_steps_ = static_cast<std::size_t>(rounded);
}

double TimeGrid::time(std::size_t i) const noexcept {
  return i == n_steps_ ? t_end_ : static_cast<double>(i) * dt_;
}

std::string_view to_string(Scheme s) {
  return s == Scheme::kEuler ? "euler" : "exact";
}

Scheme parse_scheme(std::string_view text) {
  if (text == "euler") return Scheme::kEuler;
  if (text == "exact") return Scheme::kExact;
  throw FormatError("unknown scheme '" + std::string(text) + "' (expected euler|exact)");
}

double stationary_density(const OuParams& params, double x) {
  const double s2 = params.sigma * params.sigma;
  const double d = x - params.mu;
  return std::sqrt(params.theta / (std::numbers::pi * s2)) *
         std::exp(-params.theta * d * d / s2);
}

double covariance(const OuParams& params, double t, double s) {
  return params.stationary_variance() * std::exp(-params.theta * std::fabs(t - s));
}

ConditionalMoments conditional_moments(const OuParams& params, double c, double t,
                                       double s) {
  if (t < 0.0 || s < 0.0) throw DomainError("conditional moments need t, s >= 0");
  const double th = params.theta;
  const double mu = params.mu;
  ConditionalMoments m{};
  m.mean_t = mu + std::exp(-th * t) * (c - mu);
  m.cov_ts = params.stationary_variance() * std::exp(-th * std::fabs(t - s)) +
             (c * c - 2.0 * c * mu + mu * mu) * std::exp(-th * (s + t));
  return m;
}

double gaussian_tail_bound(double sigma, double x) {
  if (!(sigma > 0.0)) throw DomainError("sigma must be > 0");
  if (x < 0.0) throw DomainError("x must be >= 0");
  return std::exp(-x * x / (2.0 * sigma * sigma));
}

SamplePath sample_euler(const OuParams& params, const TimeGrid& grid, double x0,
                        NormalSource& rng) {
  return testing_hooks::sample_euler(params, grid, x0, rng, {});
}

SamplePath sample_exact(const OuParams& params, const TimeGrid& grid,
                        const InitialCondition& init, NormalSource& rng) {
  return testing_hooks::sample_exact(params, grid, init, rng, {});
}

namespace testing_hooks {

SamplePath sample_euler(const OuParams& params, const TimeGrid& grid, double x0,
                        NormalSource& rng, const SamplerHooks& hooks) {
  params.validate();
  SamplePath path{grid, std::vector<double>(grid.n_points()), params, Scheme::kEuler};
  const double dt = grid.dt();
  const double noise_scale = hooks.zero_increments ? 0.0 : params.sigma * std::sqrt(dt);
  const double decay = params.theta * dt;
  double xi = x0;
  path.values[0] = xi;
  for (std::size_t i = 1; i < path.values.size(); ++i) {
    const double dw = noise_scale * rng();
    xi = xi - decay * (xi - params.mu) + dw;
    path.values[i] = xi;
  }
  return path;
}

SamplePath sample_exact(const OuParams& params, const TimeGrid& grid,
                        const InitialCondition& init, NormalSource& rng,
                        const SamplerHooks& hooks) {
  params.validate();
  SamplePath path{grid, std::vector<double>(grid.n_points()), params, Scheme::kExact};
  const double theta_dt = hooks.freeze_transition ? 0.0 : params.theta * grid.dt();
  const double a = std::exp(-theta_dt);
  // σ²(1 − e^{−2θΔ})/(2θ), with expm1 for small θΔ.
  const double innovation_sd =
      std::sqrt(params.sigma * params.sigma * -std::expm1(-2.0 * theta_dt) /
                (2.0 * params.theta));

  double xi = 0.0;
  if (const auto* fixed = std::get_if<FixedStart>(&init)) {
    xi = fixed->x0;
  } else {
    xi = params.mu + std::sqrt(params.stationary_variance()) * rng();
  }
  path.values[0] = xi;
  for (std::size_t i = 1; i < path.values.size(); ++i) {
    const double z = rng();
    xi = params.mu + (xi - params.mu) * a + innovation_sd * z;
    path.values[i] = xi;
  }
  return path;
}

}  // namespace testing_hooks

}  // namespace oufa
