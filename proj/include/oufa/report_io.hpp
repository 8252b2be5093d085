#pragma once

/**
 * @file report_io.hpp
 * @brief Configuration documents and the CSV/JSON files written by the CLI.
 *
 * Every CSV starts with `#`-prefixed provenance lines (schema version,
 * software version, seed, config hash) followed by a header row. Doubles are
 * printed with 17 significant digits so they round-trip exactly.
 *
 * Configuration documents are JSON objects. Recognised keys:
 *
 *   profile         "desk" | "full" | "custom"   (default "custom")
 *   thetas          array of numbers
 *   horizons        array of numbers (T values)
 *   dt, h, epsilon, band_k, lil_multiplier, x0   numbers
 *   replicates      integer
 *   scheme          "euler" | "exact"
 *   init            "fixed" | "stationary"
 *   master_seed     unsigned 64-bit integer
 *   output_dir      string
 *
 * Profile values are applied first and explicit keys override them; any
 * other key is rejected.
 */

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "oufa/experiments.hpp"
#include "oufa/functional_frame.hpp"
#include "oufa/mle_estimator.hpp"
#include "oufa/ou_process.hpp"

namespace oufa::io {

inline constexpr int kSchemaVersion = 1;

enum class Profile { kDesk, kFull, kCustom };

std::string_view to_string(Profile p);
Profile parse_profile(std::string_view text);

struct CliConfig {
  Profile profile = Profile::kCustom;
  ExperimentConfig experiment;
  std::string output_dir = "out";
  bool write_json = true;
  bool write_csv = true;
};

/// "%.17g".
std::string format_double(double v);

/// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// Defaults of a named profile for the given experiment. kCustom returns the
/// plain ExperimentConfig defaults.
ExperimentConfig profile_config(Profile profile, ExperimentKind kind);

nlohmann::json config_to_json(const ExperimentConfig& config);
/// Hash of the canonical JSON form of `config`.
std::string config_hash(const ExperimentConfig& config);

/// Parses a configuration document. Throws FormatError on unknown keys or
/// wrongly typed values.
CliConfig parse_cli_config(const nlohmann::json& doc, ExperimentKind kind);
CliConfig load_cli_config(const std::filesystem::path& file, ExperimentKind kind);

/// Serialised report without timing, so equal inputs give equal bytes.
nlohmann::json report_to_json(const ExperimentReport& report);

/// Writes report.json and the CSV tables for report.kind into `dir`
/// (created if missing). Returns the files written. Throws IoError.
std::vector<std::filesystem::path> write_report_files(const ExperimentReport& report,
                                                      const std::filesystem::path& dir,
                                                      bool write_json = true,
                                                      bool write_csv = true);

std::string band_coverage_csv(const ExperimentReport& report);
std::string emse_csv(const ExperimentReport& report);
std::string predictor_bound_csv(const ExperimentReport& report);
std::string standardized_errors_csv(const ExperimentReport& report);

struct Provenance {
  std::uint64_t seed = 0;
  std::string config_hash;
};

/// `t,xi` rows, one per grid point.
std::string path_csv(const SamplePath& path, const Provenance& prov);
nlohmann::json path_sidecar(const SamplePath& path, const Provenance& prov, bool stationary,
                            double x0);

struct LoadedPath {
  TimeGrid grid;
  std::vector<double> values;
};

/// Reads a `t,xi` CSV (comment lines skipped). Requires a uniform time grid
/// starting at 0. Throws FormatError or GridMismatch.
LoadedPath read_path_csv(std::istream& in);
LoadedPath read_path_csv(const std::filesystem::path& file);

nlohmann::json estimate_to_json(const ThetaEstimate& est);

/// `segment_index,node_index,t,value`.
std::string segments_csv(const std::vector<FunctionalSegment>& segments, const Provenance& prov);

struct PredictionRow {
  std::size_t segment_index;
  FunctionalSegment predicted;
  const FunctionalSegment* actual;  ///< may be null
};

/// `segment_index,node_index,t,predicted_value,actual_value`; the last column
/// is empty when no realisation is attached.
std::string predictions_csv(const std::vector<PredictionRow>& rows, const Provenance& prov);

/// Writes `text` to `file`, throwing IoError on failure.
void write_text(const std::filesystem::path& file, std::string_view text);

}  // namespace oufa::io
