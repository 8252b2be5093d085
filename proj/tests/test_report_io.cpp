#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oufa/errors.hpp"
#include "oufa/report_io.hpp"

namespace oufa::io {
namespace {

using nlohmann::json;

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("oufa_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ExperimentReport tiny_report(ExperimentKind kind) {
  ExperimentConfig c;
  c.thetas = {1.0};
  c.horizons = {20.0, 40.0};
  c.replicates = 5;
  return run_experiment(c, kind);
}

TEST(FormatDouble, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.3212582926823432}) {
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
  EXPECT_EQ(format_double(2.0), "2");
}

TEST(Fnv1a, ReferenceVectors) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}

TEST(Profiles, DeskPresets) {
  const auto band = profile_config(Profile::kDesk, ExperimentKind::kBandCoverage);
  EXPECT_EQ(band.thetas, (std::vector<double>{0.4, 1.0}));
  EXPECT_EQ(band.horizons, (std::vector<double>{2000.0}));
  EXPECT_EQ(band.replicates, 200u);
  EXPECT_EQ(band.scheme, Scheme::kExact);
  const auto emse = profile_config(Profile::kDesk, ExperimentKind::kEmse);
  EXPECT_EQ(emse.horizons, (std::vector<double>{500.0, 1000.0, 2000.0, 4000.0}));
  const auto pred = profile_config(Profile::kDesk, ExperimentKind::kPredictorBound);
  EXPECT_EQ(pred.epsilon, 0.05);
  EXPECT_EQ(pred.horizons, (std::vector<double>{2000.0, 4000.0, 8000.0}));
}

TEST(Profiles, FullPresetsCarryTableGrids) {
  const auto band = profile_config(Profile::kFull, ExperimentKind::kBandCoverage);
  EXPECT_EQ(band.replicates, 1000u);
  EXPECT_EQ(band.horizons.front(), 12000.0);
  EXPECT_EQ(band.horizons.back(), 18000.0);
  EXPECT_EQ(band.thetas.size(), 6u);
  const auto pred = profile_config(Profile::kFull, ExperimentKind::kPredictorBound);
  EXPECT_EQ(pred.horizons.back(), 1e6);
  EXPECT_EQ(pred.epsilon, 0.008);
  for (auto kind : {ExperimentKind::kBandCoverage, ExperimentKind::kEmse,
                    ExperimentKind::kPredictorBound, ExperimentKind::kNormality}) {
    EXPECT_NO_THROW(profile_config(Profile::kFull, kind).validate());
    EXPECT_NO_THROW(profile_config(Profile::kDesk, kind).validate());
  }
}

TEST(ParseConfig, ProfileThenOverrides) {
  const json doc = json::parse(R"({"profile":"desk","replicates":17,"init":"stationary",
                                    "master_seed":18446744073709551615,"output_dir":"x"})");
  const auto cfg = parse_cli_config(doc, ExperimentKind::kEmse);
  EXPECT_EQ(cfg.profile, Profile::kDesk);
  EXPECT_EQ(cfg.experiment.replicates, 17u);
  EXPECT_TRUE(cfg.experiment.stationary_init);
  EXPECT_EQ(cfg.experiment.master_seed, 18446744073709551615ULL);
  EXPECT_EQ(cfg.experiment.thetas.size(), 3u);
  EXPECT_EQ(cfg.output_dir, "x");
}

TEST(ParseConfig, RejectsUnknownAndMistypedKeys) {
  EXPECT_THROW(parse_cli_config(json::parse(R"({"theta":1})"), ExperimentKind::kEmse), FormatError);
  EXPECT_THROW(parse_cli_config(json::parse(R"({"dt":"small"})"), ExperimentKind::kEmse), FormatError);
  EXPECT_THROW(parse_cli_config(json::parse(R"({"thetas":[]})"), ExperimentKind::kEmse), FormatError);
  EXPECT_THROW(parse_cli_config(json::parse(R"({"replicates":2.5})"), ExperimentKind::kEmse), FormatError);
  EXPECT_THROW(parse_cli_config(json::parse(R"({"master_seed":-1})"), ExperimentKind::kEmse), FormatError);
  EXPECT_THROW(parse_cli_config(json::parse(R"({"scheme":"rk4"})"), ExperimentKind::kEmse), FormatError);
  EXPECT_THROW(parse_cli_config(json::parse(R"([1,2])"), ExperimentKind::kEmse), FormatError);
}

TEST(ParseConfig, LoadFromFile) {
  const auto dir = scratch_dir("cfg");
  std::filesystem::create_directories(dir);
  write_text(dir / "c.json", R"({"thetas":[0.5],"horizons":[100],"replicates":3})");
  const auto cfg = load_cli_config(dir / "c.json", ExperimentKind::kBandCoverage);
  EXPECT_EQ(cfg.experiment.thetas, (std::vector<double>{0.5}));
  write_text(dir / "bad.json", "{not json");
  EXPECT_THROW(load_cli_config(dir / "bad.json", ExperimentKind::kBandCoverage), FormatError);
  EXPECT_THROW(load_cli_config(dir / "missing.json", ExperimentKind::kBandCoverage), FormatError);
}

TEST(ConfigHash, StableAndSensitive) {
  ExperimentConfig a;
  ExperimentConfig b;
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.master_seed += 1;
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(ReportJson, HasProvenanceAndNoTiming) {
  const auto report = tiny_report(ExperimentKind::kBandCoverage);
  const json j = report_to_json(report);
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  EXPECT_EQ(j["experiment"], "band-coverage");
  EXPECT_EQ(j["provenance"]["master_seed"], report.config.master_seed);
  EXPECT_EQ(j["provenance"]["config_hash"], config_hash(report.config));
  EXPECT_EQ(j["cells"].size(), 2u);
  EXPECT_FALSE(j.dump().find("wall") != std::string::npos);
}

TEST(ReportCsv, SchemasAndPreamble) {
  const std::vector<std::pair<ExperimentKind, std::string>> expected{
      {ExperimentKind::kBandCoverage, "theta,T,N,k,coverage,failures"},
      {ExperimentKind::kEmse, "theta,T,N,emse,two_theta_over_T"},
      {ExperimentKind::kPredictorBound, "theta,T,N,epsilon,p_hat_H,p_hat_B"},
      {ExperimentKind::kNormality, "theta,T,replicate,z"}};
  for (const auto& [kind, header] : expected) {
    const auto report = tiny_report(kind);
    const auto dir = scratch_dir("csv");
    const auto files = write_report_files(report, dir);
    ASSERT_EQ(files.size(), 2u);
    const std::string csv = slurp(files[1]);
    EXPECT_NE(csv.find("# schema_version: 1\n"), std::string::npos);
    EXPECT_NE(csv.find("# seed: " + std::to_string(report.config.master_seed) + "\n"), std::string::npos);
    EXPECT_NE(csv.find("# config_hash: " + config_hash(report.config) + "\n"), std::string::npos);
    EXPECT_NE(csv.find("\n" + header + "\n"), std::string::npos) << header;
  }
}

TEST(ReportFiles, UnwritableDirectoryThrowsIoError) {
  const auto dir = scratch_dir("blocked");
  std::filesystem::create_directories(dir.parent_path());
  write_text(dir, "a file, not a directory");
  EXPECT_THROW(write_report_files(tiny_report(ExperimentKind::kEmse), dir / "sub"), IoError);
  std::filesystem::remove(dir);
}

TEST(PathCsv, RoundTripsExactly) {
  const TimeGrid g(5.0, 0.02);
  NormalSource rng(1);
  const auto path = sample_euler(OuParams{5.0, 0.0, 1.0}, g, 0.0, rng);
  const std::string text = path_csv(path, {1, "abc"});
  std::istringstream in(text);
  const auto loaded = read_path_csv(in);
  EXPECT_EQ(loaded.values, path.values);
  EXPECT_EQ(loaded.grid.n_steps(), 250u);
  EXPECT_NEAR(loaded.grid.dt(), 0.02, 1e-15);
  const json side = path_sidecar(path, {1, "abc"}, false, 0.0);
  EXPECT_EQ(side["seed"], 1);
  EXPECT_EQ(side["scheme"], "euler");
  EXPECT_EQ(side["rng_algorithm"], std::string(kRngAlgorithm));
}

TEST(PathCsv, RejectsMalformedInput) {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return read_path_csv(in);
  };
  EXPECT_THROW(parse("x,y\n0,1\n1,2\n"), FormatError);
  EXPECT_THROW(parse("t,xi\n0,1\n"), FormatError);
  EXPECT_THROW(parse("t,xi\n0,1\n1,abc\n"), FormatError);
  EXPECT_THROW(parse("t,xi\n0.5,1\n1,2\n"), FormatError);
  EXPECT_THROW(parse("t,xi\n0,1\n1,2\n3,3\n"), GridMismatch);
  EXPECT_NO_THROW(parse("# note\nt,xi\n0,1\n0.5,2\n1,3\n"));
}

TEST(EstimateJson, Fields) {
  ThetaEstimate est{0.0, 1.0, 0.1, 0.0, 2.0, EstimatorForm::kEndpoint};
  const json j = estimate_to_json(est);
  EXPECT_EQ(j["form"], "endpoint");
  EXPECT_EQ(j["nonpositive"], true);
  EXPECT_EQ(j["denominator"], 2.0);
}

TEST(SegmentCsv, Schemas) {
  const SegmentGrid g(1.0, 2);
  const std::vector<FunctionalSegment> segs{{g, {1.0, 2.0, 3.0}}};
  const auto s = segments_csv(segs, {4, "h"});
  EXPECT_NE(s.find("segment_index,node_index,t,value\n0,0,0,1\n0,1,0.5,2\n0,2,1,3\n"), std::string::npos);
  const std::vector<PredictionRow> rows{{1, {g, {3.0, 2.0, 1.0}}, nullptr},
                                        {2, {g, {3.0, 2.0, 1.0}}, &segs[0]}};
  const auto p = predictions_csv(rows, {4, "h"});
  EXPECT_NE(p.find("segment_index,node_index,t,predicted_value,actual_value\n1,0,0,3,\n"), std::string::npos);
  EXPECT_NE(p.find("2,2,1,1,3\n"), std::string::npos);
}

}  // namespace
}  // namespace oufa::io
