#include "oufa/report_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "oufa/errors.hpp"
#include "oufa/rng.hpp"

namespace oufa::io {

using nlohmann::json;

namespace {

std::vector<double> arithmetic(double first, double step, int count) {
  std::vector<double> out;
  for (int l = 0; l < count; ++l) out.push_back(first + step * l);
  return out;
}

std::string csv_preamble(std::string_view table, std::uint64_t seed, const std::string& hash) {
  std::ostringstream os;
  os << "# oufa " << table << "\n"
     << "# schema_version: " << kSchemaVersion << "\n"
     << "# software_version: " << OUFA_VERSION << "\n"
     << "# seed: " << seed << "\n"
     << "# config_hash: " << hash << "\n";
  return os.str();
}

std::string report_preamble(const ExperimentReport& report, std::string_view table) {
  return csv_preamble(table, report.config.master_seed, config_hash(report.config));
}

template <typename T>
T required_as(const json& value, std::string_view key) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw FormatError("config key '" + std::string(key) + "' has the wrong type");
  }
}

}  // namespace

std::string_view to_string(Profile p) {
  switch (p) {
    case Profile::kDesk:
      return "desk";
    case Profile::kFull:
      return "full";
    case Profile::kCustom:
      return "custom";
  }
  return "custom";
}

Profile parse_profile(std::string_view text) {
  if (text == "desk") return Profile::kDesk;
  if (text == "full") return Profile::kFull;
  if (text == "custom") return Profile::kCustom;
  throw FormatError("unknown profile '" + std::string(text) + "' (expected desk|full|custom)");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, hash);
  return buf;
}

ExperimentConfig profile_config(Profile profile, ExperimentKind kind) {
  ExperimentConfig c;
  if (profile == Profile::kCustom) return c;

  if (profile == Profile::kFull) {
    c.dt = 0.02;
    c.replicates = 1000;
    c.scheme = Scheme::kEuler;
    switch (kind) {
      case ExperimentKind::kBandCoverage:
      case ExperimentKind::kNormality:
        c.thetas = {0.1, 0.4, 0.7, 1.0, 2.0, 5.0};
        c.horizons = arithmetic(12000.0, 1000.0, 7);
        break;
      case ExperimentKind::kEmse:
        c.thetas = {0.1, 0.4, 0.7, 1.0, 2.0};
        c.horizons = arithmetic(50.0, 250.0, 25);
        break;
      case ExperimentKind::kPredictorBound:
        c.thetas = {0.4, 0.7, 1.0};
        c.horizons = arithmetic(200000.0, 200000.0, 5);
        c.epsilon = 0.008;
        c.h = 1.0;
        break;
    }
    return c;
  }

  c.dt = 0.02;
  c.replicates = 200;
  switch (kind) {
    case ExperimentKind::kBandCoverage:
      c.thetas = {0.4, 1.0};
      c.horizons = {2000.0};
      c.scheme = Scheme::kExact;
      break;
    case ExperimentKind::kEmse:
      c.thetas = {0.4, 0.7, 1.0};
      c.horizons = {500.0, 1000.0, 2000.0, 4000.0};
      break;
    case ExperimentKind::kPredictorBound:
      c.thetas = {1.0};
      c.horizons = {2000.0, 4000.0, 8000.0};
      c.epsilon = 0.05;
      break;
    case ExperimentKind::kNormality:
      c.thetas = {1.0};
      c.horizons = {2000.0};
      break;
  }
  return c;
}

json config_to_json(const ExperimentConfig& config) {
  return json{{"thetas", config.thetas},
              {"horizons", config.horizons},
              {"dt", config.dt},
              {"replicates", config.replicates},
              {"h", config.h},
              {"epsilon", config.epsilon},
              {"band_k", config.band_k},
              {"lil_multiplier", config.lil_multiplier},
              {"scheme", std::string(oufa::to_string(config.scheme))},
              {"init", config.stationary_init ? "stationary" : "fixed"},
              {"x0", config.x0},
              {"master_seed", config.master_seed}};
}

std::string config_hash(const ExperimentConfig& config) {
  return fnv1a_hex(config_to_json(config).dump());
}

CliConfig parse_cli_config(const json& doc, ExperimentKind kind) {
  if (!doc.is_object()) throw FormatError("configuration must be a JSON object");
  static const std::set<std::string> known{
      "profile", "thetas", "horizons", "dt", "replicates", "h", "epsilon", "band_k",
      "lil_multiplier", "scheme", "init", "x0", "master_seed", "output_dir"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) throw FormatError("unknown config key '" + key + "'");
  }

  CliConfig cli;
  if (doc.contains("profile")) {
    cli.profile = parse_profile(required_as<std::string>(doc["profile"], "profile"));
  }
  ExperimentConfig& c = cli.experiment;
  c = profile_config(cli.profile, kind);

  auto number = [&](const char* key, double& field) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_number()) throw FormatError(std::string("config key '") + key + "' must be a number");
    field = doc[key].get<double>();
  };
  auto number_list = [&](const char* key, std::vector<double>& field) {
    if (!doc.contains(key)) return;
    const auto& arr = doc[key];
    if (!arr.is_array() || arr.empty()) {
      throw FormatError(std::string("config key '") + key + "' must be a nonempty array");
    }
    field.clear();
    for (const auto& v : arr) {
      if (!v.is_number()) throw FormatError(std::string("config key '") + key + "' must hold numbers");
      field.push_back(v.get<double>());
    }
  };

  number_list("thetas", c.thetas);
  number_list("horizons", c.horizons);
  number("dt", c.dt);
  number("h", c.h);
  number("epsilon", c.epsilon);
  number("band_k", c.band_k);
  number("lil_multiplier", c.lil_multiplier);
  number("x0", c.x0);
  if (doc.contains("replicates")) {
    if (!doc["replicates"].is_number_integer() || doc["replicates"].get<long long>() < 1) {
      throw FormatError("config key 'replicates' must be a positive integer");
    }
    c.replicates = doc["replicates"].get<std::size_t>();
  }
  if (doc.contains("master_seed")) {
    if (!doc["master_seed"].is_number_unsigned()) {
      throw FormatError("config key 'master_seed' must be a nonnegative integer");
    }
    c.master_seed = doc["master_seed"].get<std::uint64_t>();
  }
  if (doc.contains("scheme")) {
    c.scheme = parse_scheme(required_as<std::string>(doc["scheme"], "scheme"));
  }
  if (doc.contains("init")) {
    const auto init = required_as<std::string>(doc["init"], "init");
    if (init == "stationary") {
      c.stationary_init = true;
    } else if (init == "fixed") {
      c.stationary_init = false;
    } else {
      throw FormatError("config key 'init' must be fixed|stationary");
    }
  }
  if (doc.contains("output_dir")) {
    cli.output_dir = required_as<std::string>(doc["output_dir"], "output_dir");
  }
  return cli;
}

CliConfig load_cli_config(const std::filesystem::path& file, ExperimentKind kind) {
  std::ifstream in(file);
  if (!in) throw FormatError("cannot open config file " + file.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("config file " + file.string() + ": " + e.what());
  }
  return parse_cli_config(doc, kind);
}

json report_to_json(const ExperimentReport& report) {
  json cells = json::array();
  for (const auto& cell : report.cells) {
    json j{{"theta", cell.theta},
           {"T", cell.T},
           {"replicates", cell.replicates},
           {"failures", cell.failures}};
    switch (report.kind) {
      case ExperimentKind::kBandCoverage:
        j["coverage"] = cell.coverage;
        break;
      case ExperimentKind::kEmse:
        j["emse"] = cell.emse;
        j["two_theta_over_T"] = cell.two_theta_over_T;
        break;
      case ExperimentKind::kPredictorBound:
        j["p_hat_H"] = cell.p_hat_H;
        j["p_hat_B"] = cell.p_hat_B;
        break;
      case ExperimentKind::kNormality:
        j["lil_coverage"] = cell.lil_coverage;
        break;
    }
    j["standardized_errors"] = {{"count", cell.normality.count},
                                {"mean", cell.normality.mean},
                                {"variance", cell.normality.variance},
                                {"ks_distance", cell.normality.ks_distance}};
    cells.push_back(std::move(j));
  }
  return json{{"schema_version", kSchemaVersion},
              {"experiment", std::string(oufa::to_string(report.kind))},
              {"config", config_to_json(report.config)},
              {"provenance",
               {{"master_seed", report.config.master_seed},
                {"config_hash", config_hash(report.config)},
                {"software_version", report.software_version},
                {"rng_algorithm", report.rng_algorithm},
                {"kernels", report.kernel_level}}},
              {"cells", cells}};
}

std::string band_coverage_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << report_preamble(report, "band-coverage") << "theta,T,N,k,coverage,failures\n";
  for (const auto& c : report.cells) {
    os << format_double(c.theta) << ',' << format_double(c.T) << ',' << c.replicates << ','
       << format_double(report.config.band_k) << ',' << format_double(c.coverage) << ','
       << c.failures << '\n';
  }
  return os.str();
}

std::string emse_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << report_preamble(report, "emse") << "theta,T,N,emse,two_theta_over_T\n";
  for (const auto& c : report.cells) {
    os << format_double(c.theta) << ',' << format_double(c.T) << ',' << c.replicates << ','
       << format_double(c.emse) << ',' << format_double(c.two_theta_over_T) << '\n';
  }
  return os.str();
}

std::string predictor_bound_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << report_preamble(report, "predictor-bound") << "theta,T,N,epsilon,p_hat_H,p_hat_B\n";
  for (const auto& c : report.cells) {
    os << format_double(c.theta) << ',' << format_double(c.T) << ',' << c.replicates << ','
       << format_double(report.config.epsilon) << ',' << format_double(c.p_hat_H) << ','
       << format_double(c.p_hat_B) << '\n';
  }
  return os.str();
}

std::string standardized_errors_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << report_preamble(report, "standardized-errors") << "theta,T,replicate,z\n";
  for (const auto& c : report.cells) {
    for (std::size_t i = 0; i < c.z.size(); ++i) {
      os << format_double(c.theta) << ',' << format_double(c.T) << ',' << c.z_replicate[i]
         << ',' << format_double(c.z[i]) << '\n';
    }
  }
  return os.str();
}

void write_text(const std::filesystem::path& file, std::string_view text) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + file.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("failed writing " + file.string());
}

std::vector<std::filesystem::path> write_report_files(const ExperimentReport& report,
                                                      const std::filesystem::path& dir,
                                                      bool write_json, bool write_csv) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const std::string& text) {
    const auto file = dir / name;
    write_text(file, text);
    written.push_back(file);
  };
  if (write_json) emit("report.json", report_to_json(report).dump(2) + "\n");
  if (write_csv) {
    switch (report.kind) {
      case ExperimentKind::kBandCoverage:
        emit("band_coverage.csv", band_coverage_csv(report));
        break;
      case ExperimentKind::kEmse:
        emit("emse.csv", emse_csv(report));
        break;
      case ExperimentKind::kPredictorBound:
        emit("predictor_bound.csv", predictor_bound_csv(report));
        break;
      case ExperimentKind::kNormality:
        emit("standardized_errors.csv", standardized_errors_csv(report));
        break;
    }
  }
  return written;
}

std::string path_csv(const SamplePath& path, const Provenance& prov) {
  std::ostringstream os;
  os << csv_preamble("path", prov.seed, prov.config_hash) << "t,xi\n";
  for (std::size_t i = 0; i < path.values.size(); ++i) {
    os << format_double(path.grid.time(i)) << ',' << format_double(path.values[i]) << '\n';
  }
  return os.str();
}

json path_sidecar(const SamplePath& path, const Provenance& prov, bool stationary, double x0) {
  json init = stationary ? json{{"kind", "stationary"}} : json{{"kind", "fixed"}, {"x0", x0}};
  return json{{"schema_version", kSchemaVersion},
              {"software_version", OUFA_VERSION},
              {"rng_algorithm", std::string(kRngAlgorithm)},
              {"seed", prov.seed},
              {"config_hash", prov.config_hash},
              {"scheme", std::string(oufa::to_string(path.scheme))},
              {"params",
               {{"theta", path.params.theta}, {"mu", path.params.mu}, {"sigma", path.params.sigma}}},
              {"grid",
               {{"t_end", path.grid.t_end()},
                {"dt", path.grid.dt()},
                {"n_steps", path.grid.n_steps()}}},
              {"init", init}};
}

LoadedPath read_path_csv(std::istream& in) {
  std::string line;
  bool header_seen = false;
  std::vector<double> times;
  std::vector<double> values;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != "t,xi") throw FormatError("expected header 't,xi', got '" + line + "'");
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw FormatError("line " + std::to_string(line_no) + ": expected two columns");
    }
    try {
      std::size_t used = 0;
      const std::string t_text = line.substr(0, comma);
      const std::string x_text = line.substr(comma + 1);
      const double t = std::stod(t_text, &used);
      if (used != t_text.size()) throw std::invalid_argument("t");
      const double x = std::stod(x_text, &used);
      if (used != x_text.size()) throw std::invalid_argument("xi");
      if (!std::isfinite(t) || !std::isfinite(x)) throw std::invalid_argument("nonfinite");
      times.push_back(t);
      values.push_back(x);
    } catch (const std::exception&) {
      throw FormatError("line " + std::to_string(line_no) + ": not a pair of finite numbers");
    }
  }
  if (!header_seen) throw FormatError("missing 't,xi' header");
  if (values.size() < 2) throw FormatError("path needs at least two rows");
  if (times.front() != 0.0) throw FormatError("path must start at t = 0");

  const double t_end = times.back();
  const double dt = t_end / static_cast<double>(times.size() - 1);
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::fabs(times[i] - static_cast<double>(i) * dt) > 1e-9 * t_end) {
      throw GridMismatch("path times are not on a uniform grid (row " + std::to_string(i) + ")");
    }
  }
  return {TimeGrid(t_end, dt), std::move(values)};
}

LoadedPath read_path_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw FormatError("cannot open " + file.string());
  return read_path_csv(in);
}

json estimate_to_json(const ThetaEstimate& est) {
  return json{{"theta_hat", est.theta_hat},
              {"form", std::string(oufa::to_string(est.form))},
              {"numerator", est.numerator},
              {"denominator", est.denominator},
              {"T", est.T},
              {"dt", est.dt},
              {"nonpositive", est.nonpositive()}};
}

std::string segments_csv(const std::vector<FunctionalSegment>& segments, const Provenance& prov) {
  std::ostringstream os;
  os << csv_preamble("segments", prov.seed, prov.config_hash) << "segment_index,node_index,t,value\n";
  for (std::size_t n = 0; n < segments.size(); ++n) {
    const auto& seg = segments[n];
    for (std::size_t j = 0; j < seg.values.size(); ++j) {
      os << n << ',' << j << ',' << format_double(seg.grid.node(j)) << ','
         << format_double(seg.values[j]) << '\n';
    }
  }
  return os.str();
}

std::string predictions_csv(const std::vector<PredictionRow>& rows, const Provenance& prov) {
  std::ostringstream os;
  os << csv_preamble("predictions", prov.seed, prov.config_hash)
     << "segment_index,node_index,t,predicted_value,actual_value\n";
  for (const auto& row : rows) {
    const auto& pred = row.predicted;
    for (std::size_t j = 0; j < pred.values.size(); ++j) {
      os << row.segment_index << ',' << j << ',' << format_double(pred.grid.node(j)) << ','
         << format_double(pred.values[j]) << ',';
      if (row.actual != nullptr) os << format_double(row.actual->values.at(j));
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace oufa::io
