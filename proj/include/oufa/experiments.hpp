#pragma once

/**
 * @file experiments.hpp
 * @brief Monte Carlo harness for the consistency experiments: ±kσ band
 *        coverage of θ̂, empirical mean square error, predictor-bound
 *        exceedance probabilities, and the normality / LIL diagnostics.
 *
 * Every replicate draws from its own generator seeded by
 * derive_replicate_seed(master, θ index, T index, replicate index), and
 * results are stored by replicate index and reduced in index order. A report
 * therefore depends only on the configuration, never on the worker count.
 */

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "oufa/ou_process.hpp"

namespace oufa {

struct ExperimentConfig {
  std::vector<double> thetas{1.0};
  std::vector<double> horizons{2000.0};  ///< T values
  double dt = 0.02;
  std::size_t replicates = 200;  ///< N
  double h = 1.0;                ///< segment length
  double epsilon = 0.008;        ///< predictor-bound threshold
  double band_k = 3.0;
  double lil_multiplier = 1.5;
  Scheme scheme = Scheme::kEuler;
  bool stationary_init = false;  ///< false: ξ_0 = x0
  double x0 = 0.0;
  std::uint64_t master_seed = 20240101;

  /// Throws DomainError/GridMismatch on an unusable configuration.
  void validate() const;
  /// Total number of Euler/exact steps the configuration will simulate.
  double total_steps() const;
};

enum class ExperimentKind { kBandCoverage, kEmse, kPredictorBound, kNormality };

std::string_view to_string(ExperimentKind kind);
/// "band-coverage" | "emse" | "predictor-bound" | "normality".
ExperimentKind parse_experiment_kind(std::string_view text);

struct ReplicateOutcome {
  double theta_hat = 0.0;
  double x_prev_h = 0.0;  ///< path value at (n−1)h, n = T/h
  bool failed = false;    ///< estimator hit a zero denominator
};

struct NormalitySummary {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;     ///< unbiased (N−1)
  double ks_distance = 0.0;  ///< sup |F_N − Φ|
};

struct CellResult {
  double theta = 0.0;
  double T = 0.0;
  std::size_t theta_index = 0;
  std::size_t T_index = 0;
  std::size_t replicates = 0;  ///< equals config.replicates
  std::size_t failures = 0;
  double coverage = 0.0;       ///< fraction with |θ̂−θ| ≤ k√(2θ/T)
  double emse = 0.0;
  double two_theta_over_T = 0.0;
  double p_hat_H = 0.0;        ///< 1 − fraction exceeding ε (H bound)
  double p_hat_B = 0.0;        ///< 1 − fraction exceeding ε (B bound)
  double lil_coverage = 0.0;   ///< fraction with |θ̂−θ| ≤ c·LIL envelope
  NormalitySummary normality;
  std::vector<double> z;       ///< (θ̂−θ)/√(2θ/T) per successful replicate
  std::vector<std::size_t> z_replicate;  ///< replicate index of each z
};

struct ExperimentReport {
  ExperimentKind kind = ExperimentKind::kBandCoverage;
  ExperimentConfig config;
  std::vector<CellResult> cells;  ///< θ-major, then T
  std::string software_version;
  std::string rng_algorithm;
  std::string kernel_level;
  double wall_seconds = 0.0;  ///< not part of the serialized report

  const CellResult& cell(std::size_t theta_index, std::size_t T_index) const;
};

struct RunOptions {
  unsigned threads = 1;
  /// Test hook: replace θ̂ by the true θ in every replicate.
  bool oracle_estimates = false;
};

/// Stateless, platform-independent mixing of the four indices. For a fixed
/// master seed the map (θ index, T index, replicate) → seed is injective for
/// θ index < 2^16, T index < 2^16, replicate < 2^32.
std::uint64_t derive_replicate_seed(std::uint64_t master_seed, std::size_t theta_index,
                                    std::size_t T_index, std::size_t replicate_index);

/// Raw per-replicate outcomes for one (θ, T) cell, in replicate order.
std::vector<ReplicateOutcome> run_cell(const ExperimentConfig& config, std::size_t theta_index,
                                       std::size_t T_index, const RunOptions& options = {});

/// Runs every cell and fills all metrics; `kind` selects what the report
/// writers emit.
ExperimentReport run_experiment(const ExperimentConfig& config, ExperimentKind kind,
                                const RunOptions& options = {});

ExperimentReport run_band_coverage(const ExperimentConfig& config, const RunOptions& options = {});
ExperimentReport run_emse(const ExperimentConfig& config, const RunOptions& options = {});
ExperimentReport run_predictor_bound(const ExperimentConfig& config,
                                     const RunOptions& options = {});
ExperimentReport standardized_errors(const ExperimentConfig& config,
                                     const RunOptions& options = {});

/// LIL coverage per cell, in cell order.
std::vector<double> lil_coverage(const ExperimentConfig& config, const RunOptions& options = {});

/// Aggregates outcomes of one cell into the metrics of CellResult.
CellResult summarize_cell(const ExperimentConfig& config, std::size_t theta_index,
                          std::size_t T_index, const std::vector<ReplicateOutcome>& outcomes);

/// Mean, unbiased variance and Kolmogorov distance to N(0,1).
NormalitySummary summarize_normality(std::vector<double> z);

/// Two-sample Kolmogorov–Smirnov statistic sup |F_a − F_b|.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace oufa
