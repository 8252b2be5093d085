#include "oufa/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

#include "oufa/errors.hpp"
#include "oufa/kernels.hpp"
#include "oufa/mle_estimator.hpp"
#include "oufa/rng.hpp"

namespace oufa {

namespace {

bool is_multiple(double value, double step) {
  const double r = std::round(value / step);
  return r >= 1.0 && std::fabs(r * step - value) <= 1e-9 * value;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

std::size_t last_boundary_index(const ExperimentConfig& config, double T) {
  const auto per_segment = static_cast<std::size_t>(std::round(config.h / config.dt));
  const auto segments = static_cast<std::size_t>(std::round(T / config.h));
  return (segments - 1) * per_segment;
}

ReplicateOutcome run_replicate(const ExperimentConfig& config, std::size_t ti, std::size_t Ti,
                               std::size_t r, const RunOptions& options) {
  const OuParams params{config.thetas[ti], 0.0, 1.0};
  const double T = config.horizons[Ti];
  const TimeGrid grid(T, config.dt);
  NormalSource rng(derive_replicate_seed(config.master_seed, ti, Ti, r));

  SamplePath path = [&] {
    if (config.scheme == Scheme::kEuler) {
      double x0 = config.x0;
      if (config.stationary_init) x0 = std::sqrt(params.stationary_variance()) * rng();
      return sample_euler(params, grid, x0, rng);
    }
    if (config.stationary_init) return sample_exact(params, grid, StationaryStart{}, rng);
    return sample_exact(params, grid, FixedStart{config.x0}, rng);
  }();

  ReplicateOutcome out;
  out.x_prev_h = path.values[last_boundary_index(config, T)];
  if (options.oracle_estimates) {
    out.theta_hat = params.theta;
    return out;
  }
  try {
    out.theta_hat = estimate_theta_ito(path).theta_hat;
  } catch (const ZeroDenominator&) {
    out.failed = true;
    out.theta_hat = std::nan("");
  }
  return out;
}

// Runs `count` independent jobs on `threads` workers; job(i) must only touch
// slot i of its output.
template <typename Job>
void parallel_for(std::size_t count, unsigned threads, Job&& job) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(count, 1)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(count);
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (thetas.empty() || horizons.empty()) throw DomainError("config needs at least one theta and one T");
  if (thetas.size() >= (1u << 16) || horizons.size() >= (1u << 16)) {
    throw DomainError("too many theta or T values");
  }
  for (double th : thetas) {
    if (!(th > 0.0) || !std::isfinite(th)) throw DomainError("every theta must be > 0");
  }
  if (!(dt > 0.0) || !(h > 0.0)) throw DomainError("dt and h must be > 0");
  if (replicates < 1 || replicates >= (std::size_t{1} << 32)) {
    throw DomainError("replicates must be in [1, 2^32)");
  }
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be > 0");
  if (!(band_k >= 0.0)) throw DomainError("band_k must be >= 0");
  if (!(lil_multiplier >= 0.0)) throw DomainError("lil_multiplier must be >= 0");
  if (!is_multiple(h, dt)) throw GridMismatch("h must be a multiple of dt");
  for (double T : horizons) {
    if (!(T > 0.0)) throw DomainError("every T must be > 0");
    if (!is_multiple(T, dt)) throw GridMismatch("T = " + std::to_string(T) + " is not a multiple of dt");
    if (!is_multiple(T, h)) throw GridMismatch("T = " + std::to_string(T) + " is not a multiple of h");
  }
}

double ExperimentConfig::total_steps() const {
  double steps = 0.0;
  for (double T : horizons) steps += std::round(T / dt);
  return steps * static_cast<double>(thetas.size()) * static_cast<double>(replicates);
}

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kBandCoverage:
      return "band-coverage";
    case ExperimentKind::kEmse:
      return "emse";
    case ExperimentKind::kPredictorBound:
      return "predictor-bound";
    case ExperimentKind::kNormality:
      return "normality";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view text) {
  for (auto kind : {ExperimentKind::kBandCoverage, ExperimentKind::kEmse,
                    ExperimentKind::kPredictorBound, ExperimentKind::kNormality}) {
    if (to_string(kind) == text) return kind;
  }
  throw FormatError("unknown experiment '" + std::string(text) + "'");
}

const CellResult& ExperimentReport::cell(std::size_t theta_index, std::size_t T_index) const {
  return cells.at(theta_index * config.horizons.size() + T_index);
}

std::uint64_t derive_replicate_seed(std::uint64_t master_seed, std::size_t theta_index,
                                    std::size_t T_index, std::size_t replicate_index) {
  if (theta_index >= (1u << 16) || T_index >= (1u << 16) ||
      replicate_index >= (std::uint64_t{1} << 32)) {
    throw DomainError("replicate seed index out of range");
  }
  const std::uint64_t packed = (std::uint64_t{theta_index} << 48) |
                               (std::uint64_t{T_index} << 32) |
                               std::uint64_t{replicate_index};
  // mix64 is a bijection, so for a fixed master the map packed -> seed is too.
  const std::uint64_t key = mix64(master_seed + 0x9e3779b97f4a7c15ULL);
  return mix64(key ^ packed);
}

std::vector<ReplicateOutcome> run_cell(const ExperimentConfig& config, std::size_t theta_index,
                                       std::size_t T_index, const RunOptions& options) {
  config.validate();
  std::vector<ReplicateOutcome> outcomes(config.replicates);
  parallel_for(config.replicates, options.threads, [&](std::size_t r) {
    outcomes[r] = run_replicate(config, theta_index, T_index, r, options);
  });
  return outcomes;
}

NormalitySummary summarize_normality(std::vector<double> z) {
  NormalitySummary s;
  s.count = z.size();
  if (z.empty()) return s;
  double total = 0.0;
  for (double v : z) total += v;
  s.mean = total / static_cast<double>(z.size());
  double ss = 0.0;
  for (double v : z) ss += (v - s.mean) * (v - s.mean);
  s.variance = z.size() > 1 ? ss / static_cast<double>(z.size() - 1) : 0.0;
  std::sort(z.begin(), z.end());
  const double n = static_cast<double>(z.size());
  double d = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double F = normal_cdf(z[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - F, F - static_cast<double>(i) / n});
  }
  s.ks_distance = d;
  return s;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("KS statistic needs two nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

CellResult summarize_cell(const ExperimentConfig& config, std::size_t theta_index,
                          std::size_t T_index, const std::vector<ReplicateOutcome>& outcomes) {
  CellResult cell;
  cell.theta = config.thetas.at(theta_index);
  cell.T = config.horizons.at(T_index);
  cell.theta_index = theta_index;
  cell.T_index = T_index;
  cell.replicates = outcomes.size();
  cell.two_theta_over_T = 2.0 * cell.theta / cell.T;

  const double theta = cell.theta;
  const double T = cell.T;
  const double h = config.h;
  const double sd = std::sqrt(cell.two_theta_over_T);
  const double band = config.band_k * sd;
  const double lil = T > std::numbers::e ? config.lil_multiplier * lil_envelope(theta, T)
                                         : std::numeric_limits<double>::infinity();
  const double h_factor = h * std::sqrt(h / 3.0 + 1.0);

  std::size_t inside = 0;
  std::size_t inside_lil = 0;
  std::size_t exceed_H = 0;
  std::size_t exceed_B = 0;
  double sq_error = 0.0;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    const auto& o = outcomes[r];
    if (o.failed) {
      ++cell.failures;
      continue;
    }
    const double err = o.theta_hat - theta;
    const double abs_err = std::fabs(err);
    if (abs_err <= band) ++inside;
    if (abs_err <= lil) ++inside_lil;
    if (std::fabs(o.x_prev_h) * abs_err * h_factor > config.epsilon) ++exceed_H;
    if (std::fabs(o.x_prev_h) * abs_err * h > config.epsilon) ++exceed_B;
    sq_error += err * err;
    cell.z.push_back(err / sd);
    cell.z_replicate.push_back(r);
  }
  const std::size_t ok = outcomes.size() - cell.failures;
  if (ok > 0) {
    const double n = static_cast<double>(ok);
    cell.coverage = static_cast<double>(inside) / n;
    cell.lil_coverage = static_cast<double>(inside_lil) / n;
    cell.p_hat_H = 1.0 - static_cast<double>(exceed_H) / n;
    cell.p_hat_B = 1.0 - static_cast<double>(exceed_B) / n;
    cell.emse = sq_error / n;
  }
  cell.normality = summarize_normality(cell.z);
  return cell;
}

ExperimentReport run_experiment(const ExperimentConfig& config, ExperimentKind kind,
                                const RunOptions& options) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  const std::size_t n_T = config.horizons.size();
  const std::size_t n_cells = config.thetas.size() * n_T;
  const std::size_t N = config.replicates;
  std::vector<ReplicateOutcome> buffer(n_cells * N);
  parallel_for(buffer.size(), options.threads, [&](std::size_t job) {
    const std::size_t c = job / N;
    buffer[job] = run_replicate(config, c / n_T, c % n_T, job % N, options);
  });

  ExperimentReport report;
  report.kind = kind;
  report.config = config;
  report.software_version = OUFA_VERSION;
  report.rng_algorithm = std::string(kRngAlgorithm);
  report.kernel_level = std::string(kernels::level_name(kernels::active_level()));
  report.cells.reserve(n_cells);
  for (std::size_t c = 0; c < n_cells; ++c) {
    const auto first = buffer.begin() + static_cast<std::ptrdiff_t>(c * N);
    const std::vector<ReplicateOutcome> outcomes(first, first + static_cast<std::ptrdiff_t>(N));
    report.cells.push_back(summarize_cell(config, c / n_T, c % n_T, outcomes));
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

ExperimentReport run_band_coverage(const ExperimentConfig& config, const RunOptions& options) {
  return run_experiment(config, ExperimentKind::kBandCoverage, options);
}

ExperimentReport run_emse(const ExperimentConfig& config, const RunOptions& options) {
  return run_experiment(config, ExperimentKind::kEmse, options);
}

ExperimentReport run_predictor_bound(const ExperimentConfig& config, const RunOptions& options) {
  return run_experiment(config, ExperimentKind::kPredictorBound, options);
}

ExperimentReport standardized_errors(const ExperimentConfig& config, const RunOptions& options) {
  return run_experiment(config, ExperimentKind::kNormality, options);
}

std::vector<double> lil_coverage(const ExperimentConfig& config, const RunOptions& options) {
  const ExperimentReport report = run_experiment(config, ExperimentKind::kNormality, options);
  std::vector<double> out;
  out.reserve(report.cells.size());
  for (const auto& cell : report.cells) out.push_back(cell.lil_coverage);
  return out;
}

}  // namespace oufa
