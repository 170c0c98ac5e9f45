// Command-line front door: verify (oracle fuzz), sweep (experiment grid),
// estimate (bound report from an external prediction file), report
// (aggregate sweep CSVs into plot series).
//
// Exit codes: 0 success, 1 property/validation failure, 2 usage error,
// 3 I/O error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "g2r/harness.hpp"
#include "g2r/serialize.hpp"
#include "g2r/verify.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw g2r::IoError("cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw g2r::IoError("cannot write file: " + path.string());
  out << content;
}

int cmd_verify(std::size_t fuzz, g2r::Seed seed, const std::string& out_path, bool corrupt) {
  if (fuzz == 0) {
    std::cerr << "verify: --fuzz must be >= 1\n";
    return kExitUsage;
  }
  g2r::verify::FuzzOptions opts;
  opts.fuzz_count = fuzz;
  opts.seed = seed;
  opts.corrupt_self_test = corrupt;
  const g2r::verify::VerifySummary summary = g2r::verify::run_fuzz(opts);
  const std::string text = g2r::verify::summary_to_json(summary).dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
  return summary.violations == 0 ? kExitOk : kExitFailure;
}

int cmd_sweep(const std::string& config_path, const std::string& knob_name,
              const std::vector<double>& values, const std::vector<g2r::Seed>& seeds,
              double delta, const std::string& out_dir, bool dump_predictions,
              std::size_t threads) {
  g2r::cli::SweepOptions opts;
  const std::string config_bytes = read_file(config_path);
  opts.config = g2r::cli::parse_config_text(config_bytes);
  opts.config_digest = g2r::cli::hex64(g2r::cli::fnv1a64(config_bytes));

  if (knob_name == "gamma") {
    opts.knob = g2r::gen::Knob::gamma;
  } else if (knob_name == "rho") {
    opts.knob = g2r::gen::Knob::rho;
  } else {
    std::cerr << "sweep: --knob must be 'gamma' or 'rho'\n";
    return kExitUsage;
  }
  if (values.empty()) {
    std::cerr << "sweep: --values must be nonempty\n";
    return kExitUsage;
  }
  opts.values = values;
  opts.seeds = seeds.empty() ? std::vector<g2r::Seed>{opts.config.scenario.seed} : seeds;
  opts.conf.delta = delta;
  opts.out_dir = out_dir;
  opts.dump_predictions = dump_predictions;
  opts.threads = threads;

  const g2r::cli::SweepResult result = g2r::cli::run_sweep(opts);
  std::cout << "wrote " << result.csv_path.string() << " (" << result.reports.size()
            << " rows), " << result.series_path.string() << ", "
            << result.manifest_path.string() << "\n";
  return kExitOk;
}

int cmd_estimate(const std::string& predictions_path, double delta, const std::string& out_path) {
  g2r::est::ConfidenceConfig conf{delta};
  const std::vector<g2r::cli::PredictionRecord> records =
      g2r::cli::load_predictions(predictions_path);
  const g2r::cli::EstimateResult result = g2r::cli::estimate_from_predictions(records, conf);
  if (!result.hda_present) {
    std::cerr << "warning: pred_hda column absent; DA-side estimates skipped\n";
  }
  const std::string json_text = g2r::bound_report_to_json(result.report).dump(2) + "\n";
  const std::string csv_text =
      g2r::est::BoundReport::csv_header() + "\n" + result.report.csv_row() + "\n";
  std::cout << json_text << csv_text;
  if (!out_path.empty()) {
    write_file(out_path, json_text);
    fs::path csv_path(out_path);
    csv_path.replace_extension(".csv");
    write_file(csv_path, csv_text);
  }
  return kExitOk;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out_path) {
  std::vector<g2r::est::BoundReport> reports;
  for (const std::string& path : inputs) {
    const std::vector<g2r::est::BoundReport> part = g2r::cli::read_report_csv(path);
    reports.insert(reports.end(), part.begin(), part.end());
  }
  const std::string text = g2r::cli::aggregate_series(reports).dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalization bounds for classifiers trained on synthetic data"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "fuzz the exact-oracle inequalities");
  std::size_t fuzz = 500;
  g2r::Seed verify_seed = 0;
  std::string verify_out;
  bool corrupt = false;
  verify->add_option("--fuzz", fuzz, "number of random instances");
  verify->add_option("--seed", verify_seed, "fuzz seed");
  verify->add_option("--out", verify_out, "write the JSON summary to this path");
  verify->add_flag("--self-test-corrupt", corrupt,
                   "negative control: corrupt one report so the checker must fail");

  auto* sweep = app.add_subcommand("sweep", "run an experiment sweep over gamma or rho");
  std::string config_path;
  std::string knob = "gamma";
  std::vector<double> values;
  std::vector<g2r::Seed> seeds;
  double sweep_delta = 0.05;
  std::string sweep_out = "out";
  bool dump_predictions = false;
  std::size_t threads = 0;
  sweep->add_option("--config", config_path, "scenario/train config file")->required();
  sweep->add_option("--knob", knob, "gamma or rho");
  sweep->add_option("--values", values, "knob values, comma separated")->delimiter(',');
  sweep->add_option("--seeds", seeds, "scenario seeds, comma separated")->delimiter(',');
  sweep->add_option("--delta", sweep_delta, "confidence level for Hoeffding margins");
  sweep->add_option("--out", sweep_out, "output directory");
  sweep->add_flag("--dump-predictions", dump_predictions,
                  "write per-point prediction CSVs for external audit");
  sweep->add_option("--threads", threads, "worker threads (0 = auto)");

  auto* estimate = app.add_subcommand("estimate", "estimate bounds from a prediction file");
  std::string predictions_path;
  double est_delta = 0.05;
  std::string est_out;
  estimate->add_option("predictions", predictions_path, "prediction CSV path")->required();
  estimate->add_option("--delta", est_delta, "confidence level");
  estimate->add_option("--out", est_out, "write the JSON report to this path");

  auto* report = app.add_subcommand("report", "aggregate sweep CSVs into plot series");
  std::vector<std::string> report_inputs;
  std::string report_out;
  report->add_option("inputs", report_inputs, "report CSV paths")->required();
  report->add_option("--out", report_out, "write the aggregated series to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(fuzz, verify_seed, verify_out, corrupt);
    if (sweep->parsed()) {
      return cmd_sweep(config_path, knob, values, seeds, sweep_delta, sweep_out,
                       dump_predictions, threads);
    }
    if (estimate->parsed()) return cmd_estimate(predictions_path, est_delta, est_out);
    if (report->parsed()) return cmd_report(report_inputs, report_out);
  } catch (const g2r::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
