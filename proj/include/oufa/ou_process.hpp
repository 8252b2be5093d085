#pragma once

/**
 * @file ou_process.hpp
 * @brief Ornstein-Uhlenbeck process: parameters, moments, stationary law and
 *        path samplers.
 *
 * The process solves dξ_t = θ(μ − ξ_t) dt + σ dW_t. Two samplers are
 * provided: Euler–Maruyama (the scheme used by the experiments) and the exact
 * Gaussian transition, which serves as an oracle for the first.
 */

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "oufa/rng.hpp"

namespace oufa {

struct OuParams {
  double theta = 1.0;  ///< mean-reversion rate (1/time), > 0
  double mu = 0.0;     ///< long-run mean
  double sigma = 1.0;  ///< diffusion scale, > 0

  /// Throws DomainError unless θ > 0, σ > 0 and all fields are finite.
  void validate() const;

  /// σ²/(2θ).
  double stationary_variance() const { return sigma * sigma / (2.0 * theta); }
};

/// Uniform grid 0 = t_0 < ... < t_n = T with step Δt.
class TimeGrid {
 public:
  /// Throws GridMismatch if T/Δt is not an integer within 1e-9 relative,
  /// DomainError if T or Δt is not positive.
  TimeGrid(double t_end, double dt);

  double t_end() const noexcept { return t_end_; }
  double dt() const noexcept { return dt_; }
  std::size_t n_steps() const noexcept { return n_steps_; }
  std::size_t n_points() const noexcept { return n_steps_ + 1; }
  double time(std::size_t i) const noexcept;

  bool operator==(const TimeGrid&) const = default;

 private:
  double t_end_;
  double dt_;
  std::size_t n_steps_;
};

enum class Scheme { kEuler, kExact };

std::string_view to_string(Scheme s);
/// Accepts "euler" or "exact"; throws FormatError otherwise.
Scheme parse_scheme(std::string_view text);

struct SamplePath {
  TimeGrid grid;
  std::vector<double> values;  ///< n_steps+1 entries, ξ_0 first
  OuParams params;
  Scheme scheme = Scheme::kEuler;
};

/// Start from a fixed value.
struct FixedStart {
  double x0 = 0.0;
};
/// Draw ξ_0 from the stationary law N(μ, σ²/(2θ)).
struct StationaryStart {};
using InitialCondition = std::variant<FixedStart, StationaryStart>;

/// √(θ/(πσ²)) exp(−θ(x−μ)²/σ²).
double stationary_density(const OuParams& params, double x);

/// σ²/(2θ) e^{−θ|t−s|}.
double covariance(const OuParams& params, double t, double s);

struct ConditionalMoments {
  double mean_t;
  double cov_ts;
};

/// Mean at t and covariance between t and s, given ξ_0 = c.
ConditionalMoments conditional_moments(const OuParams& params, double c, double t,
                                       double s);

/// exp(−x²/(2σ²)), an upper bound on P(|N(0,σ²)| ≥ x).
double gaussian_tail_bound(double sigma, double x);

SamplePath sample_euler(const OuParams& params, const TimeGrid& grid, double x0,
                        NormalSource& rng);

SamplePath sample_exact(const OuParams& params, const TimeGrid& grid,
                        const InitialCondition& init, NormalSource& rng);

namespace testing_hooks {

/// Knobs used only by the test suite to expose the deterministic skeleton of
/// the samplers. Not reachable from the command line.
struct SamplerHooks {
  bool zero_increments = false;   ///< Euler: every ΔW_i = 0
  bool freeze_transition = false; ///< exact: θΔ treated as 0
};

SamplePath sample_euler(const OuParams& params, const TimeGrid& grid, double x0,
                        NormalSource& rng, const SamplerHooks& hooks);
SamplePath sample_exact(const OuParams& params, const TimeGrid& grid,
                        const InitialCondition& init, NormalSource& rng,
                        const SamplerHooks& hooks);

}  // namespace testing_hooks

}  // namespace oufa
