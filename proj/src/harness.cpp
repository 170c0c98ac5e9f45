#include "g2r/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "g2r/train.hpp"

namespace g2r::cli {

namespace {

void append_predictions(std::vector<PredictionRecord>& out, const SampleSet& set,
                        const Hypothesis& h, const Hypothesis& h_star,
                        const Hypothesis& h_da) {
  const std::vector<Label> pred_h = evaluate(h, set);
  const std::vector<Label> pred_star = evaluate(h_star, set);
  const std::vector<Label> pred_da = evaluate(h_da, set);
  const std::vector<Label>& truth = set.require_labels();
  const std::string prefix = std::string(to_string(set.origin)) + "-" + to_string(set.split) + "-";
  for (std::size_t i = 0; i < set.size(); ++i) {
    PredictionRecord rec;
    rec.split = set.split;
    rec.origin = set.origin;
    rec.sample_id = prefix + std::to_string(i);
    rec.true_label = truth[i];
    rec.pred_h = pred_h[i];
    rec.pred_hstar = pred_star[i];
    rec.pred_hda = pred_da[i];
    out.push_back(std::move(rec));
  }
}

DatasetPair sample_pair_from_instance(const exact::DiscreteInstance& inst,
                                      const gen::ScenarioConfig& cfg) {
  DatasetPair data;
  data.n = cfg.n;
  data.m = cfg.m;
  data.real_train = apply_labeling(
      inst.f_r, sample(inst.dist_r, cfg.n, derive_seed(cfg.seed, 6), Origin::real, Split::train));
  data.real_test = apply_labeling(
      inst.f_r, sample(inst.dist_r, cfg.m, derive_seed(cfg.seed, 7), Origin::real, Split::test));
  data.synth_train = apply_labeling(
      inst.f_g,
      sample(inst.dist_g, cfg.n, derive_seed(cfg.seed, 8), Origin::synthetic, Split::train));
  data.synth_test = apply_labeling(
      inst.f_g,
      sample(inst.dist_g, cfg.m, derive_seed(cfg.seed, 9), Origin::synthetic, Split::test));
  data.validate();
  return data;
}

std::string knob_value_tag(double v) {
  std::ostringstream os;
  os << v;
  std::string s = os.str();
  for (char& c : s) {
    if (c == '.') c = 'p';
  }
  return s;
}

}  // namespace

RunArtifacts run_scenario(const gen::ScenarioConfig& scfg, const train::TrainConfig& tcfg,
                          const est::ConfidenceConfig& conf) {
  scfg.validate();
  tcfg.validate();

  DatasetPair data;
  HypothesisSpace task_space = HypothesisSpace::thresholds_1d(1);   // replaced below
  HypothesisSpace domain_space = HypothesisSpace::thresholds_1d(1);

  switch (scfg.kind) {
    case gen::ScenarioKind::gaussian_pair: {
      data = gen::make_gaussian_pair(scfg);
      task_space = HypothesisSpace::linear_softmax_family(scfg.dims, scfg.arity);
      domain_space = HypothesisSpace::linear_softmax_family(scfg.dims, 2);
      break;
    }
    case gen::ScenarioKind::discrete_instance: {
      gen::DiscreteScenario sc = gen::make_discrete_instance(scfg);
      data = std::move(sc.data);
      task_space = sc.instance.space;
      domain_space = sc.instance.space.arity() == 2
                         ? sc.instance.space
                         : HypothesisSpace::thresholds_1d(sc.instance.domain_size());
      break;
    }
    case gen::ScenarioKind::overestimation: {
      const exact::DiscreteInstance inst = gen::make_overestimation_instance(scfg.seed);
      data = sample_pair_from_instance(inst, scfg);
      task_space = inst.space;
      domain_space = inst.space;
      break;
    }
  }

  const Hypothesis h = train::erm_train(task_space, data.synth_train, tcfg);
  const Hypothesis h_star = train::joint_train(task_space, data.real_train, data.synth_train, tcfg);
  const Hypothesis h_da = train::domain_train(domain_space, data.synth_train, data.real_train, tcfg);

  RunArtifacts out;
  out.report =
      est::make_bound_report(h, h_star, h_da, data, conf, scfg.seed, scfg.gamma, scfg.rho);
  out.predictions.reserve(2 * (data.n + data.m));
  append_predictions(out.predictions, data.real_train, h, h_star, h_da);
  append_predictions(out.predictions, data.real_test, h, h_star, h_da);
  append_predictions(out.predictions, data.synth_train, h, h_star, h_da);
  append_predictions(out.predictions, data.synth_test, h, h_star, h_da);
  return out;
}

SweepResult run_sweep(const SweepOptions& opts) {
  const std::vector<gen::ScenarioConfig> configs =
      gen::sweep(opts.config.scenario, opts.knob, opts.values, opts.seeds);

  std::error_code ec;
  std::filesystem::create_directories(opts.out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + opts.out_dir.string());
  if (opts.dump_predictions) {
    std::filesystem::create_directories(opts.out_dir / "predictions", ec);
    if (ec) throw IoError("cannot create predictions directory");
  }

  const std::string started = iso8601_utc_now();

  std::vector<RunArtifacts> results(configs.size());
  const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  const std::size_t workers =
      std::min(configs.size(), opts.threads ? opts.threads : std::min<std::size_t>(hw, 8));

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= configs.size()) return;
      try {
        results[i] = run_scenario(configs[i], opts.config.train, opts.conf);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  SweepResult out;
  out.reports.reserve(results.size());
  for (const RunArtifacts& r : results) out.reports.push_back(r.report);

  out.csv_path = opts.out_dir / "reports.csv";
  {
    std::ofstream csv(out.csv_path);
    if (!csv) throw IoError("cannot write " + out.csv_path.string());
    csv << est::BoundReport::csv_header() << '\n';
    for (const est::BoundReport& r : out.reports) csv << r.csv_row() << '\n';
  }

  out.series_path = opts.out_dir / "series.json";
  {
    std::ofstream series(out.series_path);
    if (!series) throw IoError("cannot write " + out.series_path.string());
    series << aggregate_series(out.reports).dump(2) << '\n';
  }

  std::vector<std::string> output_files = {out.csv_path.filename().string(),
                                           out.series_path.filename().string()};
  if (opts.dump_predictions) {
    for (std::size_t i = 0; i < configs.size(); ++i) {
      const gen::ScenarioConfig& cfg = configs[i];
      const double value = opts.knob == gen::Knob::gamma ? cfg.gamma : cfg.rho;
      const std::string name = std::string("predictions/") + gen::to_string(opts.knob) + "_" +
                               knob_value_tag(value) + "_seed" + std::to_string(cfg.seed) + ".csv";
      const std::filesystem::path path = opts.out_dir / name;
      std::ofstream f(path);
      if (!f) throw IoError("cannot write " + path.string());
      f << predictions_to_csv(results[i].predictions);
      output_files.push_back(name);
    }
  }

  out.manifest_path = opts.out_dir / "manifest.json";
  {
    nlohmann::json manifest;
    manifest["command"] = "sweep";
    manifest["tool_version"] = std::string(kToolVersion);
    manifest["config_digest"] =
        opts.config_digest.empty() ? hex64(fnv1a64(config_to_text(opts.config)))
                                   : opts.config_digest;
    manifest["knob"] = gen::to_string(opts.knob);
    manifest["values"] = opts.values;
    manifest["seeds"] = opts.seeds;
    manifest["delta"] = opts.conf.delta;
    manifest["started"] = started;
    manifest["finished"] = iso8601_utc_now();
    manifest["outputs"] = output_files;
    std::ofstream mf(out.manifest_path);
    if (!mf) throw IoError("cannot write " + out.manifest_path.string());
    mf << manifest.dump(2) << '\n';
    output_files.push_back("manifest.json");
  }
  return out;
}

nlohmann::json aggregate_series(const std::vector<est::BoundReport>& reports) {
  if (reports.empty()) throw ValidationError("aggregate_series: no reports");
  for (const est::BoundReport& r : reports) {
    if (!r.gamma || !r.rho) {
      throw ValidationError("aggregate_series: reports lack scenario knob values");
    }
  }
  std::vector<double> gammas;
  std::vector<double> rhos;
  for (const est::BoundReport& r : reports) {
    if (std::find(gammas.begin(), gammas.end(), *r.gamma) == gammas.end()) {
      gammas.push_back(*r.gamma);
    }
    if (std::find(rhos.begin(), rhos.end(), *r.rho) == rhos.end()) rhos.push_back(*r.rho);
  }
  if (gammas.size() > 1 && rhos.size() > 1) {
    throw ValidationError("aggregate_series: rows mix gamma and rho sweeps");
  }
  const bool by_gamma = gammas.size() > 1 || rhos.size() == 1;

  std::map<double, std::vector<const est::BoundReport*>> groups;
  for (const est::BoundReport& r : reports) groups[by_gamma ? *r.gamma : *r.rho].push_back(&r);

  nlohmann::json curves;
  const auto add_curve = [&](const char* name, auto&& getter) {
    std::vector<double> means;
    std::vector<double> stds;
    for (const auto& [value, rows] : groups) {
      std::vector<double> xs;
      for (const est::BoundReport* r : rows) {
        if (const auto x = getter(*r)) xs.push_back(*x);
      }
      if (xs.empty()) return;  // curve absent from this report set
      double mean = 0.0;
      for (double x : xs) mean += x;
      mean /= static_cast<double>(xs.size());
      double var = 0.0;
      for (double x : xs) var += (x - mean) * (x - mean);
      const double std_dev =
          xs.size() > 1 ? std::sqrt(var / static_cast<double>(xs.size() - 1)) : 0.0;
      means.push_back(mean);
      stds.push_back(std_dev);
    }
    curves[name] = {{"mean", means}, {"std", stds}};
  };

  using Opt = std::optional<double>;
  add_curve("eps_test_g_h", [](const est::BoundReport& r) { return Opt(r.eps_test_g_h); });
  add_curve("eps_test_r_h", [](const est::BoundReport& r) { return Opt(r.eps_test_r_h); });
  add_curve("lambda_hat", [](const est::BoundReport& r) { return Opt(r.lambda_hat); });
  add_curve("d_g2r_hat", [](const est::BoundReport& r) { return Opt(r.d_g2r_hat); });
  add_curve("d_da_hat", [](const est::BoundReport& r) { return r.d_da_hat; });
  add_curve("b_g2r_hat", [](const est::BoundReport& r) { return Opt(r.b_g2r_hat); });
  add_curve("b_da_hat", [](const est::BoundReport& r) { return r.b_da_hat; });

  nlohmann::json j;
  j["knob"] = by_gamma ? "gamma" : "rho";
  std::vector<double> values;
  std::vector<std::size_t> counts;
  for (const auto& [value, rows] : groups) {
    values.push_back(value);
    counts.push_back(rows.size());
  }
  j["values"] = values;
  j["count_per_value"] = counts;
  j["curves"] = curves;
  return j;
}

std::vector<est::BoundReport> read_report_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open report CSV: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty report CSV", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != est::BoundReport::csv_header()) {
    throw ValidationError("report CSV header does not match the expected schema: " +
                          path.string());
  }

  const auto split_line = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : s) {
      if (c == ',') {
        cells.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur.push_back(c);
      }
    }
    cells.push_back(cur);
    return cells;
  };

  std::vector<est::BoundReport> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != 14) {
      throw ParseError("expected 14 columns, got " + std::to_string(cells.size()), line_no);
    }
    const auto num = [&](const std::string& v) -> double {
      try {
        return std::stod(v);
      } catch (...) {
        throw ParseError("bad number '" + v + "'", line_no);
      }
    };
    const auto opt_num = [&](const std::string& v) -> std::optional<double> {
      if (v.empty()) return std::nullopt;
      return num(v);
    };
    est::BoundReport r;
    r.n = static_cast<std::size_t>(num(cells[0]));
    r.m = static_cast<std::size_t>(num(cells[1]));
    r.delta = num(cells[2]);
    {
      Seed s = 0;
      const auto [p, ec2] = std::from_chars(cells[3].data(), cells[3].data() + cells[3].size(), s);
      if (ec2 != std::errc{} || p != cells[3].data() + cells[3].size()) {
        throw ParseError("bad seed '" + cells[3] + "'", line_no);
      }
      r.seed = s;
    }
    r.gamma = opt_num(cells[4]);
    r.rho = opt_num(cells[5]);
    r.eps_test_g_h = num(cells[6]);
    r.eps_test_r_h = num(cells[7]);
    r.lambda_hat = num(cells[8]);
    r.d_g2r_hat = num(cells[9]);
    r.d_da_hat = opt_num(cells[10]);
    r.b_g2r_hat = num(cells[11]);
    r.b_da_hat = opt_num(cells[12]);
    r.hoeffding_margin = num(cells[13]);
    out.push_back(r);
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string iso8601_utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace g2r::cli
