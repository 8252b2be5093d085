// oufa: command-line front end for simulation, estimation, operator norms,
// segmentation/prediction and the Monte Carlo experiments.
//
// Exit codes: 0 ok, 2 invalid flags or configuration, 3 grid mismatch or
// unreadable input, 4 estimation failure (zero denominator or θ̂ ≤ 0 where a
// positive rate is needed), 5 unwritable output.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "oufa/errors.hpp"
#include "oufa/experiments.hpp"
#include "oufa/functional_frame.hpp"
#include "oufa/mle_estimator.hpp"
#include "oufa/ou_process.hpp"
#include "oufa/predictor.hpp"
#include "oufa/report_io.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

enum Exit : int {
  kOk = 0,
  kBadFlags = 2,
  kBadInput = 3,
  kEstimationFailed = 4,
  kUnwritable = 5,
};

void emit(const std::optional<std::string>& out, const std::string& text) {
  if (out) {
    oufa::io::write_text(*out, text);
  } else {
    std::cout << text;
  }
}

struct SimulateFlags {
  double theta = 0.0;
  double mu = 0.0;
  double sigma = 1.0;
  double t_end = 0.0;
  double dt = 0.02;
  std::string scheme = "euler";
  double x0 = 0.0;
  bool stationary = false;
  std::uint64_t seed = 1;
  std::string out;
};

int run_simulate(const SimulateFlags& f) {
  const oufa::OuParams params{f.theta, f.mu, f.sigma};
  try {
    params.validate();
  } catch (const oufa::DomainError& e) {
    std::cerr << "simulate: " << e.what() << "\n";
    return kBadFlags;
  }
  std::optional<oufa::TimeGrid> grid;
  try {
    grid.emplace(f.t_end, f.dt);
  } catch (const oufa::GridMismatch& e) {
    std::cerr << "simulate: " << e.what() << "\n";
    return kBadInput;
  } catch (const oufa::DomainError& e) {
    std::cerr << "simulate: " << e.what() << "\n";
    return kBadFlags;
  }

  const oufa::Scheme scheme = oufa::parse_scheme(f.scheme);
  oufa::NormalSource rng(f.seed);
  oufa::SamplePath path = [&] {
    if (scheme == oufa::Scheme::kExact) {
      if (f.stationary) return oufa::sample_exact(params, *grid, oufa::StationaryStart{}, rng);
      return oufa::sample_exact(params, *grid, oufa::FixedStart{f.x0}, rng);
    }
    double x0 = f.x0;
    if (f.stationary) x0 = params.mu + std::sqrt(params.stationary_variance()) * rng();
    return oufa::sample_euler(params, *grid, x0, rng);
  }();

  const json config{{"theta", f.theta}, {"mu", f.mu},         {"sigma", f.sigma},
                    {"t_end", f.t_end}, {"dt", f.dt},         {"scheme", f.scheme},
                    {"x0", f.x0},       {"stationary", f.stationary}, {"seed", f.seed}};
  const oufa::io::Provenance prov{f.seed, oufa::io::fnv1a_hex(config.dump())};
  oufa::io::write_text(f.out, oufa::io::path_csv(path, prov));
  oufa::io::write_text(f.out + ".json",
                       oufa::io::path_sidecar(path, prov, f.stationary, f.x0).dump(2) + "\n");
  return kOk;
}

struct EstimateFlags {
  std::string input;
  std::string form = "ito";
  double sigma = 1.0;
  std::optional<std::string> out;
};

int run_estimate(const EstimateFlags& f) {
  std::optional<oufa::io::LoadedPath> loaded;
  try {
    loaded.emplace(oufa::io::read_path_csv(fs::path(f.input)));
  } catch (const oufa::Error& e) {
    std::cerr << "estimate: " << e.what() << "\n";
    return kBadInput;
  }
  try {
    json doc;
    if (f.form == "ito") {
      doc = oufa::io::estimate_to_json(oufa::estimate_theta_ito(loaded->grid, loaded->values));
    } else if (f.form == "endpoint") {
      doc = oufa::io::estimate_to_json(
          oufa::estimate_theta_endpoint(loaded->grid, loaded->values, f.sigma));
    } else {
      const auto ito = oufa::estimate_theta_ito(loaded->grid, loaded->values);
      const auto end = oufa::estimate_theta_endpoint(loaded->grid, loaded->values, f.sigma);
      doc = json{{"ito", oufa::io::estimate_to_json(ito)},
                 {"endpoint", oufa::io::estimate_to_json(end)},
                 {"difference", ito.theta_hat - end.theta_hat}};
    }
    emit(f.out, doc.dump(2) + "\n");
  } catch (const oufa::ZeroDenominator& e) {
    std::cerr << "estimate: " << e.what() << "\n";
    return kEstimationFailed;
  }
  return kOk;
}

struct NormsFlags {
  double theta = 0.0;
  double h = 1.0;
  int k_max = 5;
  std::optional<double> theta_hat;
  std::string format = "json";
  std::optional<std::string> out;
};

int run_norms(const NormsFlags& f) {
  if (!(f.theta > 0.0) || !(f.h > 0.0) || f.k_max < 1 || (f.theta_hat && !(*f.theta_hat > 0.0))) {
    std::cerr << "norms: need theta > 0, h > 0, k-max >= 1 and theta-hat > 0\n";
    return kBadFlags;
  }
  const int k0 = oufa::k0(f.theta);
  std::string text;
  if (f.format == "csv") {
    text = "k,rho_norm_H,rho_norm_B,k0\n";
    for (int k = 1; k <= f.k_max; ++k) {
      text += std::to_string(k) + "," + oufa::io::format_double(oufa::rho_norm_H(f.theta, k, f.h)) +
              "," + oufa::io::format_double(oufa::rho_norm_B(f.theta, k, f.h)) + "," +
              std::to_string(k0) + "\n";
    }
  } else {
    json rows = json::array();
    for (int k = 1; k <= f.k_max; ++k) {
      rows.push_back({{"k", k},
                      {"rho_norm_H", oufa::rho_norm_H(f.theta, k, f.h)},
                      {"rho_norm_B", oufa::rho_norm_B(f.theta, k, f.h)}});
    }
    json doc{{"theta", f.theta}, {"h", f.h}, {"k0", k0}, {"norms", rows}};
    if (f.theta_hat) {
      const double th = *f.theta_hat;
      doc["theta_hat"] = th;
      doc["distances"] = {{"H", oufa::operator_distance_H(f.theta, th, f.h)},
                          {"H_bound", oufa::operator_distance_H_bound(f.theta, th, f.h)},
                          {"B", oufa::operator_distance_B(f.theta, th, f.h)},
                          {"B_bound", std::fabs(f.theta - th) * f.h}};
    }
    text = doc.dump(2) + "\n";
  }
  emit(f.out, text);
  return kOk;
}

struct SegmentFlags {
  std::string input;
  double h = 1.0;
  std::optional<double> theta_hat;
  std::optional<std::string> out;
};

int run_segment(const SegmentFlags& f, bool predict) {
  std::optional<oufa::io::LoadedPath> loaded;
  std::vector<oufa::FunctionalSegment> segments;
  try {
    loaded.emplace(oufa::io::read_path_csv(fs::path(f.input)));
    segments = oufa::segment_path(loaded->grid, loaded->values, f.h);
  } catch (const oufa::DomainError& e) {
    std::cerr << e.what() << "\n";
    return kBadFlags;
  } catch (const oufa::Error& e) {
    std::cerr << e.what() << "\n";
    return kBadInput;
  }
  const json config{{"input", f.input}, {"h", f.h}};
  const oufa::io::Provenance prov{0, oufa::io::fnv1a_hex(config.dump())};
  if (!predict) {
    emit(f.out, oufa::io::segments_csv(segments, prov));
    return kOk;
  }

  double theta_hat = 0.0;
  try {
    theta_hat = f.theta_hat ? *f.theta_hat
                            : oufa::estimate_theta_ito(loaded->grid, loaded->values).theta_hat;
  } catch (const oufa::ZeroDenominator& e) {
    std::cerr << "predict: " << e.what() << "\n";
    return kEstimationFailed;
  }
  if (!(theta_hat > 0.0)) {
    std::cerr << "predict: theta_hat = " << theta_hat << " is not positive\n";
    return kEstimationFailed;
  }
  std::vector<oufa::io::PredictionRow> rows;
  for (std::size_t n = 1; n <= segments.size(); ++n) {
    const auto* actual = n < segments.size() ? &segments[n] : nullptr;
    rows.push_back({n, oufa::plug_in_predict(theta_hat, segments[n - 1]), actual});
  }
  emit(f.out, oufa::io::predictions_csv(rows, prov));
  return kOk;
}

struct ExperimentFlags {
  std::string kind;
  std::optional<std::string> config;
  std::optional<std::string> profile;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replicates;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  bool yes = false;
};

int run_experiment(const ExperimentFlags& f) {
  oufa::io::CliConfig cli;
  oufa::ExperimentKind kind{};
  try {
    kind = oufa::parse_experiment_kind(f.kind);
    if (!f.config && !f.profile) {
      throw oufa::FormatError("need --config or --profile");
    }
    json doc = json::object();
    if (f.config) {
      std::ifstream in(*f.config);
      if (!in) throw oufa::FormatError("cannot open config " + *f.config);
      try {
        doc = json::parse(in);
      } catch (const json::parse_error& e) {
        throw oufa::FormatError(std::string("config: ") + e.what());
      }
    }
    if (f.profile) {
      if (!doc.is_object()) throw oufa::FormatError("configuration must be a JSON object");
      doc["profile"] = *f.profile;
    }
    cli = oufa::io::parse_cli_config(doc, kind);
    if (f.seed) cli.experiment.master_seed = *f.seed;
    if (f.replicates) cli.experiment.replicates = *f.replicates;
    if (f.out) cli.output_dir = *f.out;
    cli.experiment.validate();
  } catch (const oufa::Error& e) {
    std::cerr << "experiment: " << e.what() << "\n";
    return kBadFlags;
  }

  const double steps = cli.experiment.total_steps();
  if (cli.profile == oufa::io::Profile::kFull) {
    std::cerr << "full profile: " << steps << " simulation steps (about "
              << steps * 1.5e-8 / 60.0 << " CPU-minutes at ~15 ns/step)\n";
    if (!f.yes) {
      std::cerr << "rerun with --yes to start\n";
      return kBadFlags;
    }
  }

  const auto report = oufa::run_experiment(cli.experiment, kind, {f.threads, false});
  try {
    const auto files = oufa::io::write_report_files(report, cli.output_dir, cli.write_json,
                                                    cli.write_csv);
    for (const auto& file : files) std::cerr << "wrote " << file.string() << "\n";
  } catch (const oufa::IoError& e) {
    std::cerr << "experiment: " << e.what() << "\n";
    return kUnwritable;
  }
  std::cerr << "wall time " << report.wall_seconds << " s, " << f.threads << " thread(s)\n";
  std::size_t failures = 0;
  for (const auto& cell : report.cells) failures += cell.failures;
  if (failures > 0) std::cerr << failures << " replicate(s) failed estimation\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ornstein-Uhlenbeck simulation, estimation and functional prediction"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", OUFA_VERSION);

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate one O.U. path to CSV");
  simulate->add_option("--theta", sim.theta, "Mean-reversion rate")->required();
  simulate->add_option("--mu", sim.mu, "Long-run mean");
  simulate->add_option("--sigma", sim.sigma, "Diffusion scale");
  simulate->add_option("--t-end", sim.t_end, "Horizon T")->required();
  simulate->add_option("--dt", sim.dt, "Step size");
  simulate->add_option("--scheme", sim.scheme, "euler|exact")
      ->check(CLI::IsMember({"euler", "exact"}));
  auto* x0_opt = simulate->add_option("--x0", sim.x0, "Initial value");
  simulate->add_flag("--stationary", sim.stationary, "Draw the initial value from the stationary law")
      ->excludes(x0_opt);
  simulate->add_option("--seed", sim.seed, "Seed");
  simulate->add_option("--out", sim.out, "Output CSV (sidecar: <out>.json)")->required();

  EstimateFlags est;
  auto* estimate = app.add_subcommand("estimate", "Estimate theta from a path CSV");
  estimate->add_option("--input", est.input, "Path CSV (t,xi)")->required();
  estimate->add_option("--form", est.form, "ito|endpoint|both")
      ->check(CLI::IsMember({"ito", "endpoint", "both"}));
  estimate->add_option("--sigma", est.sigma, "Diffusion scale used by the endpoint form");
  estimate->add_option("--out", est.out, "Output JSON (default stdout)");

  NormsFlags nf;
  auto* norms = app.add_subcommand("norms", "Operator norms of rho_theta^k");
  norms->add_option("--theta", nf.theta, "theta")->required();
  norms->add_option("--h", nf.h, "Segment length");
  norms->add_option("--k-max", nf.k_max, "Largest power");
  norms->add_option("--theta-hat", nf.theta_hat, "Also report operator distances to this rate");
  norms->add_option("--format", nf.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  norms->add_option("--out", nf.out, "Output file (default stdout)");

  SegmentFlags sf;
  auto* segment = app.add_subcommand("segment", "Cut a path CSV into segments of length h");
  segment->add_option("--input", sf.input, "Path CSV (t,xi)")->required();
  segment->add_option("--h", sf.h, "Segment length");
  segment->add_option("--out", sf.out, "Output CSV (default stdout)");

  SegmentFlags pf;
  auto* predict = app.add_subcommand("predict", "Plug-in one-segment-ahead predictions");
  predict->add_option("--input", pf.input, "Path CSV (t,xi)")->required();
  predict->add_option("--h", pf.h, "Segment length");
  predict->add_option("--theta-hat", pf.theta_hat, "Rate to plug in (default: Ito MLE of the path)");
  predict->add_option("--out", pf.out, "Output CSV (default stdout)");

  ExperimentFlags xf;
  auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo experiment");
  experiment->add_option("kind", xf.kind, "band-coverage|emse|predictor-bound|normality")
      ->required()
      ->check(CLI::IsMember({"band-coverage", "emse", "predictor-bound", "normality"}));
  experiment->add_option("--config", xf.config, "JSON configuration document");
  experiment->add_option("--profile", xf.profile, "desk|full|custom")
      ->check(CLI::IsMember({"desk", "full", "custom"}));
  experiment->add_option("--out", xf.out, "Output directory");
  experiment->add_option("--seed", xf.seed, "Override master_seed");
  experiment->add_option("--replicates", xf.replicates, "Override replicates");
  experiment->add_option("--threads", xf.threads, "Worker threads")->check(CLI::PositiveNumber);
  experiment->add_flag("--yes", xf.yes, "Confirm a full-profile run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << "\n" << app.help();
    return kBadFlags;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*estimate) return run_estimate(est);
    if (*norms) return run_norms(nf);
    if (*segment) return run_segment(sf, false);
    if (*predict) return run_segment(pf, true);
    if (*experiment) return run_experiment(xf);
  } catch (const oufa::IoError& e) {
    std::cerr << e.what() << "\n";
    return kUnwritable;
  } catch (const oufa::Error& e) {
    std::cerr << e.what() << "\n";
    return kBadFlags;
  }
  return kOk;
}
