#pragma once

// Batch pipeline behind the CLI: one scenario run (generate, train the three
// hypotheses, estimate), sweep execution over a knob with ordered output
// files, and report aggregation into plot-ready series.

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "g2r/config.hpp"
#include "g2r/estimators.hpp"
#include "g2r/prediction.hpp"

namespace g2r::cli {

inline constexpr std::string_view kToolVersion = "g2r 0.1.0";

struct RunArtifacts {
  est::BoundReport report;
  std::vector<PredictionRecord> predictions;
};

// Generates the scenario's dataset pair, trains h on the synthetic train
// split, h-star jointly, and the domain classifier, then assembles the
// report plus per-sample prediction records for external audit.
RunArtifacts run_scenario(const gen::ScenarioConfig& scfg, const train::TrainConfig& tcfg,
                          const est::ConfidenceConfig& conf = {});

struct SweepOptions {
  FileConfig config;
  gen::Knob knob = gen::Knob::gamma;
  std::vector<double> values;
  std::vector<Seed> seeds;
  est::ConfidenceConfig conf{};
  std::filesystem::path out_dir;
  bool dump_predictions = false;
  std::size_t threads = 0;            // 0 = pick from hardware
  std::string config_digest;          // hex digest of the config file bytes
};

struct SweepResult {
  std::vector<est::BoundReport> reports;  // sweep order (value-major, then seed)
  std::filesystem::path csv_path;
  std::filesystem::path series_path;
  std::filesystem::path manifest_path;
};

// Points run in a bounded worker pool; rows land in sweep order regardless
// of completion order.
SweepResult run_sweep(const SweepOptions& opts);

// Groups reports by the swept knob value and emits mean and sample standard
// deviation per curve. The knob is inferred; rows varying in both gamma and
// rho are rejected.
nlohmann::json aggregate_series(const std::vector<est::BoundReport>& reports);

std::vector<est::BoundReport> read_report_csv(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);
std::string iso8601_utc_now();

}  // namespace g2r::cli
