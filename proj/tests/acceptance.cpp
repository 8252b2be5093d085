// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Reference values come from oracles.hpp, never from the
// code under test.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "oufa/experiments.hpp"
#include "oufa/functional_frame.hpp"
#include "oufa/mle_estimator.hpp"
#include "oufa/ou_process.hpp"
#include "oufa/predictor.hpp"
#include "oufa/report_io.hpp"

namespace {

using namespace oufa;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome criterion_1() {
  const auto t0 = Clock::now();
  double worst_rel = 0.0;
  double worst_scaling = 0.0;
  for (double theta : {0.1, 0.4, 0.7, 1.0, 2.0, 5.0}) {
    for (double h : {0.5, 1.0, 5.0}) {
      const SegmentGrid grid(h, 10000);
      const double one = rho_norm_H(theta, 1, h);
      const double oracle_one = rho_norm_H_discrete_oracle(theta, 1, grid);
      for (int k : {1, 2, 5}) {
        const double closed = rho_norm_H(theta, k, h);
        const double oracle = rho_norm_H_discrete_oracle(theta, k, grid);
        worst_rel = std::max(worst_rel, std::fabs(closed - oracle) / closed);
        const double factor = std::exp(-theta * (k - 1) * h);
        worst_scaling = std::max(worst_scaling, std::fabs(closed - factor * one) / closed);
        worst_scaling = std::max(worst_scaling, std::fabs(oracle / oracle_one - factor) / factor);
      }
    }
  }
  const double elapsed = seconds_since(t0);
  const bool pass = worst_rel <= 1e-6 && worst_scaling <= 1e-12 && elapsed < 1.0;
  return {pass, fmt("max rel err vs oracle %.3g (<=1e-6), k-scaling %.3g (<=1e-12), %.3f s (<1 s)",
                    worst_rel, worst_scaling, elapsed)};
}

Outcome criterion_2() {
  std::vector<double> grid;
  for (int i = 0; i < 497; ++i) grid.push_back(0.01 + (5.0 - 0.01) * i / 496.0);
  grid.push_back(0.5);
  grid.push_back(0.5 - 1e-9);
  grid.push_back(0.5 + 1e-9);
  int mismatches = 0;
  double boundary_gap = 0.0;
  for (double h : {0.5, 1.0, 5.0}) {
    for (double theta : grid) {
      const double n = rho_norm_H(theta, 1, h);
      if (theta == 0.5) {
        boundary_gap = std::max(boundary_gap, std::fabs(n - 1.0));
        continue;
      }
      if ((n < 1.0) != (theta > 0.5)) ++mismatches;
    }
  }
  const bool pass = mismatches == 0 && boundary_gap <= 1e-12 && grid.size() == 500;
  return {pass, fmt("%zu thetas x 3 h: %d equivalence failures, |norm(0.5)-1| = %.3g (<=1e-12)",
                    grid.size(), mismatches, boundary_gap)};
}

Outcome criterion_3() {
  std::mt19937_64 gen(3003);
  std::uniform_real_distribution<double> rate(0.1, 3.0);
  std::uniform_real_distribution<double> len(0.1, 2.0);
  double worst_rel = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double a = rate(gen);
    const double b = rate(gen);
    const double h = len(gen);
    const double q = test::trapezoid_longhand(
        [&](double t) {
          const double d = std::exp(-a * t) - std::exp(-b * t);
          return d * d;
        },
        0.0, h, 100000);
    const double atom = std::exp(-a * h) - std::exp(-b * h);
    const double oracle = std::sqrt(q + atom * atom);
    const double closed = operator_distance_H(a, b, h);
    worst_rel = std::max(worst_rel, std::fabs(closed - oracle) / oracle);
  }
  std::uniform_real_distribution<double> wide_rate(1e-3, 10.0);
  std::uniform_real_distribution<double> wide_len(1e-3, 10.0);
  int violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const double a = wide_rate(gen);
    const double b = wide_rate(gen);
    const double h = wide_len(gen);
    if (operator_distance_H(a, b, h) > operator_distance_H_bound(a, b, h)) ++violations;
  }
  const bool pass = worst_rel <= 1e-8 && violations == 0;
  return {pass, fmt("closed form vs trapezoid(m=1e5) max rel err %.3g (<=1e-8); bound violations %d/10000",
                    worst_rel, violations)};
}

Outcome criterion_4() {
  std::mt19937_64 gen(4004);
  auto gap = [](double a, double b) {
    return [=](double t) { return std::fabs(std::exp(-a * t) - std::exp(-b * t)); };
  };
  double worst_sup = std::fabs(operator_distance_B(0.7, 1.0, 1.0) - test::grid_sup(gap(0.7, 1.0), 0.0, 1.0, 1000000));
  std::uniform_real_distribution<double> rate(0.05, 5.0);
  std::uniform_real_distribution<double> len(0.1, 5.0);
  for (int i = 0; i < 20; ++i) {
    const double a = rate(gen);
    const double b = rate(gen);
    const double h = len(gen);
    worst_sup = std::max(worst_sup, std::fabs(operator_distance_B(a, b, h) -
                                              test::grid_sup(gap(a, b), 0.0, h, 1000000)));
  }
  std::uniform_real_distribution<double> wide_rate(1e-3, 10.0);
  std::uniform_real_distribution<double> wide_len(1e-3, 10.0);
  std::uniform_real_distribution<double> xh(-10.0, 10.0);
  int lipschitz_violations = 0;
  int prediction_violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const double a = wide_rate(gen);
    const double b = wide_rate(gen);
    const double h = wide_len(gen);
    const double x = xh(gen);
    if (operator_distance_B(a, b, h) > h * std::fabs(a - b)) ++lipschitz_violations;
    if (prediction_error_H(a, b, x, h) > error_bound_H(a, b, x, h)) ++prediction_violations;
    if (prediction_error_B(a, b, x, h) > error_bound_B(a, b, x, h)) ++prediction_violations;
  }
  const bool pass = worst_sup <= 1e-9 && lipschitz_violations == 0 && prediction_violations == 0;
  return {pass, fmt("analytic sup vs 1e6-node grid max gap %.3g (<=1e-9); h|dtheta| violations %d/10000; "
                    "prediction bound violations %d/20000",
                    worst_sup, lipschitz_violations, prediction_violations)};
}

ExperimentConfig desk(std::vector<double> thetas, std::vector<double> horizons, Scheme scheme) {
  ExperimentConfig c;
  c.thetas = std::move(thetas);
  c.horizons = std::move(horizons);
  c.dt = 0.02;
  c.replicates = 200;
  c.scheme = scheme;
  return c;
}

Outcome criterion_5() {
  const auto t0 = Clock::now();
  const auto report = run_band_coverage(desk({0.4, 1.0}, {2000.0}, Scheme::kExact));
  const double elapsed = seconds_since(t0);
  double worst = 1.0;
  std::size_t failures = 0;
  for (const auto& c : report.cells) {
    worst = std::min(worst, c.coverage);
    failures += c.failures;
  }
  const bool pass = worst >= 0.98 && elapsed <= 600.0 && failures == 0;
  return {pass, fmt("coverage theta=0.4: %.3f, theta=1: %.3f (>=0.98); failures %zu; %.1f s (<=600 s)",
                    report.cell(0, 0).coverage, report.cell(1, 0).coverage, failures, elapsed)};
}

Outcome criterion_6() {
  const auto report = run_emse(desk({0.4, 0.7, 1.0}, {500.0, 1000.0, 2000.0, 4000.0}, Scheme::kEuler));
  const auto& cell = report.cell(1, 2);
  const double ratio = cell.emse * cell.T / (2.0 * cell.theta);
  int increases = 0;
  for (std::size_t ti = 0; ti < 3; ++ti) {
    for (std::size_t Ti = 1; Ti < 4; ++Ti) {
      if (report.cell(ti, Ti).emse > report.cell(ti, Ti - 1).emse) ++increases;
    }
  }
  const bool pass = ratio >= 0.6 && ratio <= 1.5 && increases == 0;
  return {pass, fmt("EMSE*T/(2theta) at (0.7, 2000) = %.3f (in [0.6,1.5]); EMSE increases along T: %d",
                    ratio, increases)};
}

Outcome criterion_7() {
  const auto report = standardized_errors(desk({1.0}, {2000.0}, Scheme::kEuler));
  const auto& s = report.cell(0, 0).normality;
  const bool pass = std::fabs(s.mean) <= 0.15 && s.variance >= 0.8 && s.variance <= 1.2 &&
                    s.ks_distance <= 0.12 && s.count == 200;
  return {pass, fmt("N=%zu mean %.4f (|.|<=0.15), variance %.4f (in [0.8,1.2]), KS %.4f (<=0.12)", s.count,
                    s.mean, s.variance, s.ks_distance)};
}

Outcome criterion_8() {
  auto cfg = desk({1.0}, {2000.0, 4000.0, 8000.0}, Scheme::kEuler);
  cfg.epsilon = 0.05;
  cfg.h = 1.0;
  const auto report = run_predictor_bound(cfg);
  const double n = static_cast<double>(cfg.replicates);
  bool monotone = true;
  bool ordered = true;
  for (std::size_t Ti = 0; Ti < 3; ++Ti) {
    const auto& c = report.cell(0, Ti);
    if (c.p_hat_B < c.p_hat_H) ordered = false;
    if (Ti > 0) {
      const auto& prev = report.cell(0, Ti - 1);
      const double se = std::sqrt(prev.p_hat_H * (1.0 - prev.p_hat_H) / n +
                                  c.p_hat_H * (1.0 - c.p_hat_H) / n);
      if (c.p_hat_H < prev.p_hat_H - 3.0 * se) monotone = false;
    }
  }
  const double last = report.cell(0, 2).p_hat_H;
  const bool pass = monotone && ordered && last >= 0.9;
  return {pass, fmt("P_H = %.3f, %.3f, %.3f (nondecreasing within 3 SE: %s; >=0.9 at T=8000); "
                    "P_B = %.3f, %.3f, %.3f (P_B>=P_H: %s)",
                    report.cell(0, 0).p_hat_H, report.cell(0, 1).p_hat_H, last, monotone ? "yes" : "no",
                    report.cell(0, 0).p_hat_B, report.cell(0, 1).p_hat_B, report.cell(0, 2).p_hat_B,
                    ordered ? "yes" : "no")};
}

Outcome criterion_9() {
  int tail_violations = 0;
  int tail_points = 0;
  for (double sigma : {0.5, 1.0, 2.0}) {
    for (int i = 0; i <= 50; ++i) {
      const double x = 0.1 * i;
      ++tail_points;
      if (test::two_sided_tail(sigma, x) > gaussian_tail_bound(sigma, x)) ++tail_violations;
    }
  }
  std::mt19937_64 gen(9009);
  std::uniform_real_distribution<double> rate(0.0, 10.0);
  std::uniform_real_distribution<double> time(0.0, 100.0);
  int lip_violations = 0;
  int lip_points = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rate(gen);
    const double v = rate(gen);
    const double t = time(gen);
    ++lip_points;
    if (std::fabs(std::exp(-u * t) - std::exp(-v * t)) > std::fabs(u - v) * t) ++lip_violations;
    if (u > 0.0 && v > 0.0 && t > 0.0 && operator_distance_B(u, v, t) > std::fabs(u - v) * t) {
      ++lip_violations;
    }
  }
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      const double u = 0.1 * i;
      const double v = 0.1 * j;
      for (double t : {0.0, 0.5, 1.0, 10.0, 100.0}) {
        ++lip_points;
        if (std::fabs(std::exp(-u * t) - std::exp(-v * t)) > std::fabs(u - v) * t) ++lip_violations;
      }
    }
  }
  const bool pass = tail_violations == 0 && lip_violations == 0;
  return {pass, fmt("Gaussian tail: %d/%d violations; exponential Lipschitz: %d/%d violations",
                    tail_violations, tail_points, lip_violations, lip_points)};
}

std::string dir_bytes(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    all += f.filename().string() + "\n" + os.str();
  }
  return all;
}

Outcome criterion_10() {
  ExperimentConfig cfg;
  cfg.thetas = {0.7};
  cfg.horizons = {100.0, 200.0};
  cfg.replicates = 50;
  const auto base = std::filesystem::temp_directory_path() / "oufa_acceptance_determinism";
  std::filesystem::remove_all(base);
  int mismatches = 0;
  int comparisons = 0;
  for (auto kind : {ExperimentKind::kBandCoverage, ExperimentKind::kEmse,
                    ExperimentKind::kPredictorBound, ExperimentKind::kNormality}) {
    std::string reference;
    int run = 0;
    for (unsigned threads : {1u, 1u, 2u, 8u}) {
      const auto dir = base / (std::string(to_string(kind)) + "_" + std::to_string(run++));
      io::write_report_files(run_experiment(cfg, kind, {.threads = threads}), dir);
      const std::string bytes = dir_bytes(dir);
      if (reference.empty()) {
        reference = bytes;
      } else {
        ++comparisons;
        if (bytes != reference) ++mismatches;
      }
    }
  }
  std::filesystem::remove_all(base);
  return {mismatches == 0,
          fmt("2 cells, threads {1,1,2,8}, 4 report kinds: %d/%d byte mismatches", mismatches, comparisons)};
}

Outcome criterion_11() {
  const OuParams params{1.0, 0.0, 1.0};
  const TimeGrid grid(5.0, 0.02);
  const std::size_t reps = 10000;
  std::vector<double> euler;
  std::vector<double> exact;
  euler.reserve(reps);
  exact.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    NormalSource a(derive_replicate_seed(1111, 0, 0, r));
    euler.push_back(sample_euler(params, grid, 0.0, a).values.back());
    NormalSource b(derive_replicate_seed(1111, 1, 0, r));
    exact.push_back(sample_exact(params, grid, FixedStart{0.0}, b).values.back());
  }
  const double ks = ks_two_sample(euler, exact);

  // Lagged products ξ_0 ξ_τ under stationary start.
  const TimeGrid cov_grid(2.0, 0.02);
  const std::vector<std::size_t> lags{0, 10, 25, 50, 100};
  std::vector<double> sum(lags.size(), 0.0);
  std::vector<double> sum_sq(lags.size(), 0.0);
  for (std::size_t r = 0; r < reps; ++r) {
    NormalSource rng(derive_replicate_seed(2222, 0, 0, r));
    const auto path = sample_exact(params, cov_grid, StationaryStart{}, rng);
    for (std::size_t l = 0; l < lags.size(); ++l) {
      const double v = path.values[0] * path.values[lags[l]];
      sum[l] += v;
      sum_sq[l] += v * v;
    }
  }
  int outside = 0;
  double worst_z = 0.0;
  for (std::size_t l = 0; l < lags.size(); ++l) {
    const double n = static_cast<double>(reps);
    const double mean = sum[l] / n;
    const double se = std::sqrt((sum_sq[l] / n - mean * mean) / n);
    const double tau = cov_grid.time(lags[l]);
    const double target = 0.5 * std::exp(-params.theta * tau);
    const double z = std::fabs(mean - target) / se;
    worst_z = std::max(worst_z, z);
    if (z > 3.0) ++outside;
  }
  const bool pass = ks <= 0.05 && outside == 0;
  return {pass, fmt("Euler vs exact terminal KS %.4f (<=0.05, 1e4 reps); covariance lags outside 3 SE: %d/5 "
                    "(max |z| %.2f)",
                    ks, outside, worst_z)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"operator-norm exactness", criterion_1},
      {"contraction threshold equivalence", criterion_2},
      {"operator-distance correctness", criterion_3},
      {"Banach distance and prediction bounds", criterion_4},
      {"MLE band coverage (desk scale)", criterion_5},
      {"asymptotic efficiency (EMSE)", criterion_6},
      {"asymptotic normality", criterion_7},
      {"predictor-bound probabilities (desk scale)", criterion_8},
      {"inequality suites", criterion_9},
      {"determinism across thread counts", criterion_10},
      {"sampler cross-validation", criterion_11},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out{false, ""};
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    if (!out.pass) ++failed;
    std::printf("%s criterion %zu (%s): %s\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
