// Acceptance suite: runs every gate the project must clear and prints one
// PASS/FAIL line per criterion. Exits nonzero if any gate fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "g2r/estimators.hpp"
#include "g2r/exact.hpp"
#include "g2r/harness.hpp"
#include "g2r/prediction.hpp"
#include "g2r/scenario.hpp"
#include "g2r/train.hpp"
#include "g2r/verify.hpp"
#include "testutil.hpp"

using namespace g2r;

namespace {

struct Criterion {
  int id;
  std::string name;
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------

Criterion criterion_theorem_fuzz() {
  Criterion c{1, "theorem fuzz: 500 random worlds, zero violations, < 30 s"};
  const auto start = std::chrono::steady_clock::now();
  verify::FuzzOptions opts;
  opts.fuzz_count = 500;
  opts.seed = 20260810;
  opts.max_domain = 12;
  opts.max_space = 256;
  const verify::VerifySummary s = verify::run_fuzz(opts);
  const double elapsed = seconds_since(start);
  c.pass = s.violations == 0 && elapsed < 30.0;
  c.detail = "violations=" + std::to_string(s.violations) +
             " min_slack=" + fmt(s.min_final_slack) +
             " max_dominance_gap=" + fmt(s.max_dominance_gap) + " time=" + fmt(elapsed) + "s";
  return c;
}

Criterion criterion_adversarial_hstar() {
  Criterion c{2, "adversarial h*: 500 non-optimal references keep the proof chain"};
  Rng rng(777001);
  std::size_t failures = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const exact::DiscreteInstance inst = verify::random_instance(rng, 12, 256, 4);
    const std::size_t count = inst.space.member_count();
    const Hypothesis h = inst.space.member(rng.next_below(count));

    // Locate the joint argmin independently, then pick a different member.
    std::size_t best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < count; ++i) {
      const Hypothesis cand = inst.space.member(i);
      const double v = exact::exact_risk(cand, inst.f_g, inst.dist_g) +
                       exact::exact_risk(cand, inst.f_r, inst.dist_r);
      if (v < best_value) {
        best_value = v;
        best = i;
      }
    }
    const std::size_t other = (best + 1 + rng.next_below(count - 1)) % count;
    const Hypothesis h_star = inst.space.member(other);
    if (!exact::verify_proof_chain(inst, h, h_star).all_hold) ++failures;
  }
  c.pass = failures == 0;
  c.detail = "failures=" + std::to_string(failures) + "/500";
  return c;
}

Criterion criterion_overestimation() {
  Criterion c{3, "over-estimation: DA saturates while G2R stays tight (10 seeds)"};
  gen::ScenarioConfig cfg;
  cfg.kind = gen::ScenarioKind::overestimation;
  cfg.n = 5000;
  cfg.m = 10000;
  cfg.arity = 2;

  bool ok = true;
  double worst_gap = 2.0;
  double worst_dg2r = 0.0;
  for (Seed seed = 0; seed < 10; ++seed) {
    cfg.seed = seed;
    const exact::DiscreteInstance inst = gen::make_overestimation_instance(seed);
    const double half_dhdh = 0.5 * exact::exact_d_HdH(inst.space, inst.dist_g, inst.dist_r);
    if (half_dhdh != 1.0) ok = false;

    const cli::RunArtifacts run = cli::run_scenario(cfg, {}, {0.05});
    const est::BoundReport& r = run.report;
    if (!r.d_da_hat || *r.d_da_hat < 0.95) ok = false;
    if (r.d_g2r_hat > 0.05) ok = false;
    const double gap = *r.b_da_hat - r.b_g2r_hat;
    if (gap < 0.80) ok = false;
    worst_gap = std::min(worst_gap, gap);
    worst_dg2r = std::max(worst_dg2r, r.d_g2r_hat);
  }
  c.pass = ok;
  c.detail = "min(B_da-B_g2r)=" + fmt(worst_gap) + " max(d_g2r)=" + fmt(worst_dg2r);
  return c;
}

Criterion criterion_estimator_consistency() {
  Criterion c{4, "estimator consistency: Hoeffding coverage and sqrt(m) shrink"};
  const est::ConfidenceConfig conf{0.05};
  const double margin_10k = est::hoeffding_margin(10000, conf);

  std::size_t covered = 0;
  std::vector<double> errs_1k;
  std::vector<double> errs_10k;
  errs_1k.reserve(1000);
  errs_10k.reserve(1000);

  gen::ScenarioConfig cfg;
  cfg.kind = gen::ScenarioKind::discrete_instance;
  cfg.dims = 12;
  cfg.arity = 3;
  cfg.gamma = 0.5;
  cfg.rho = 0.3;
  cfg.n = 10;
  cfg.m = 10;

  for (Seed scenario = 0; scenario < 20; ++scenario) {
    cfg.seed = 40000 + scenario;
    const auto sc = gen::make_discrete_instance(cfg);
    const exact::DiscreteInstance& inst = sc.instance;

    // First member with a clearly non-degenerate exact risk.
    Hypothesis h = inst.space.member(0);
    double truth = exact::exact_risk(h, inst.f_g, inst.dist_g);
    for (std::size_t i = 0; truth > 0.85 || truth < 0.15; ++i) {
      h = inst.space.member(i);
      truth = exact::exact_risk(h, inst.f_g, inst.dist_g);
    }

    for (Seed t = 0; t < 50; ++t) {
      const Seed trial_seed = derive_seed(scenario * 1000 + t, 4242);
      const SampleSet big = apply_labeling(
          inst.f_g, sample(inst.dist_g, 10000, trial_seed, Origin::synthetic, Split::test));
      const double err_big = std::abs(est::empirical_risk(h, big) - truth);
      errs_10k.push_back(err_big);
      if (err_big <= margin_10k) ++covered;

      const SampleSet small = apply_labeling(
          inst.f_g,
          sample(inst.dist_g, 1000, derive_seed(trial_seed, 5), Origin::synthetic, Split::test));
      errs_1k.push_back(std::abs(est::empirical_risk(h, small) - truth));
    }
  }

  const double coverage = static_cast<double>(covered) / 1000.0;
  const double shrink = testutil::median(errs_1k) / testutil::median(errs_10k);
  c.pass = coverage >= 0.93 && shrink >= 2.5;
  c.detail = "coverage=" + fmt(coverage) + " median_shrink=" + fmt(shrink);
  return c;
}

struct SweepOutcome {
  std::vector<est::BoundReport> reports;
  std::vector<double> values;
};

SweepOutcome run_trend_sweep(gen::Knob knob, const std::filesystem::path& out_dir) {
  cli::SweepOptions opts;
  opts.config.scenario.kind = gen::ScenarioKind::gaussian_pair;  // defaults: n=5000, m=2000, dims=8, arity=10
  opts.knob = knob;
  for (int i = 0; i < 8; ++i) opts.values.push_back(static_cast<double>(i) / 7.0);
  opts.seeds = {1, 2, 3, 4, 5};
  opts.out_dir = out_dir;
  const cli::SweepResult result = cli::run_sweep(opts);
  return {result.reports, opts.values};
}

std::vector<double> mean_per_value(const SweepOutcome& sweep,
                                   const std::function<double(const est::BoundReport&)>& getter) {
  std::vector<double> means;
  const std::size_t seeds = sweep.reports.size() / sweep.values.size();
  for (std::size_t v = 0; v < sweep.values.size(); ++v) {
    double total = 0.0;
    for (std::size_t s = 0; s < seeds; ++s) total += getter(sweep.reports[v * seeds + s]);
    means.push_back(total / static_cast<double>(seeds));
  }
  return means;
}

void criterion_trends(std::vector<Criterion>& out) {
  Criterion c5{5, "trend reproduction: gamma drives d_g2r and real error, rho drives lambda"};
  Criterion c6{6, "bound robustness: real testing error within B_g2r on sweep rows"};
  const auto start = std::chrono::steady_clock::now();

  const SweepOutcome gamma_sweep = run_trend_sweep(gen::Knob::gamma, "acceptance_out/gamma");
  const SweepOutcome rho_sweep = run_trend_sweep(gen::Knob::rho, "acceptance_out/rho");
  const double elapsed = seconds_since(start);

  const std::vector<double> mean_dg2r =
      mean_per_value(gamma_sweep, [](const est::BoundReport& r) { return r.d_g2r_hat; });
  const std::vector<double> mean_eps_r =
      mean_per_value(gamma_sweep, [](const est::BoundReport& r) { return r.eps_test_r_h; });
  const std::vector<double> mean_lambda =
      mean_per_value(rho_sweep, [](const est::BoundReport& r) { return r.lambda_hat; });

  const double rho_d = testutil::spearman(gamma_sweep.values, mean_dg2r);
  const double rho_eps = testutil::spearman(gamma_sweep.values, mean_eps_r);
  const double rho_lambda = testutil::spearman(rho_sweep.values, mean_lambda);

  c5.pass = rho_d >= 0.9 && rho_eps >= 0.8 && rho_lambda >= 0.9 && elapsed < 600.0;
  c5.detail = "spearman(gamma,d_g2r)=" + fmt(rho_d) + " spearman(gamma,eps_r)=" + fmt(rho_eps) +
              " spearman(rho,lambda)=" + fmt(rho_lambda) + " time=" + fmt(elapsed) + "s";
  out.push_back(c5);

  std::size_t rows = 0;
  std::size_t bounded = 0;
  for (const SweepOutcome* sweep : {&gamma_sweep, &rho_sweep}) {
    for (const est::BoundReport& r : sweep->reports) {
      ++rows;
      if (r.eps_test_r_h <= r.b_g2r_hat) ++bounded;
    }
  }
  const double frac = static_cast<double>(bounded) / static_cast<double>(rows);
  c6.pass = frac >= 0.98;
  c6.detail = "bounded_rows=" + std::to_string(bounded) + "/" + std::to_string(rows) +
              " (" + fmt(frac) + ")";
  out.push_back(c6);
}

Criterion criterion_scalar_formulas() {
  Criterion c{7, "scalar formulas match 50-digit references to 1e-12"};
  struct Ref {
    double got;
    double want;
  };
  const std::vector<Ref> refs = {
      {est::hoeffding_margin(10000, {0.05}), 0.0135810151574061949849077},
      {est::vc_bound(0.0, 50000, 1, {0.05}), 0.05043007372533831231080982},
      {est::vc_bound(0.25, 1000, 3, {0.1}), 0.710361482600273007568649},
      {est::vc_bound(0.5, 128, 5, {0.01}), 1.951666106786995336482397},
  };
  double worst = 0.0;
  for (const Ref& r : refs) worst = std::max(worst, std::abs(r.got - r.want) / r.want);
  c.pass = worst <= 1e-12;
  c.detail = "worst_rel_err=" + fmt(worst);
  return c;
}

Criterion criterion_finite_optimality() {
  Criterion c{8, "finite-space trainers equal brute-force optima exactly (100 spaces)"};
  Rng rng(606060);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 4 + rng.next_below(7);
    std::vector<Hypothesis> members;
    members.push_back(Hypothesis::lookup(2, std::vector<Label>(k, 0)));
    const std::size_t extra = 7 + rng.next_below(17);
    for (std::size_t i = 0; i < extra; ++i) {
      std::vector<Label> t(k);
      for (Label& y : t) y = static_cast<Label>(rng.next_below(2));
      members.push_back(Hypothesis::lookup(2, t));
    }
    const HypothesisSpace space = HypothesisSpace::finite(members);

    const auto draw_set = [&](std::size_t count, Origin origin) {
      std::vector<PointId> ids(count);
      std::vector<Label> labels(count);
      for (std::size_t i = 0; i < count; ++i) {
        ids[i] = static_cast<PointId>(rng.next_below(k));
        labels[i] = static_cast<Label>(rng.next_below(2));
      }
      SampleSet s;
      s.features = FeatureBlock::discrete(std::move(ids));
      s.labels = std::move(labels);
      s.origin = origin;
      return s;
    };
    const SampleSet synth = draw_set(40 + rng.next_below(40), Origin::synthetic);
    const SampleSet real = draw_set(40 + rng.next_below(40), Origin::real);

    // Brute force, recomputed with plain loops.
    double best_erm = std::numeric_limits<double>::infinity();
    double best_joint = std::numeric_limits<double>::infinity();
    double best_domain = 0.0;
    for (const Hypothesis& cand : members) {
      std::size_t miss_g = 0;
      std::size_t zero_g = 0;
      for (std::size_t i = 0; i < synth.size(); ++i) {
        const Label pred = cand.predict_id(synth.features.id(i));
        miss_g += pred != (*synth.labels)[i];
        zero_g += pred == 0;
      }
      std::size_t miss_r = 0;
      std::size_t one_r = 0;
      for (std::size_t i = 0; i < real.size(); ++i) {
        const Label pred = cand.predict_id(real.features.id(i));
        miss_r += pred != (*real.labels)[i];
        one_r += pred == 1;
      }
      const double risk_g = static_cast<double>(miss_g) / static_cast<double>(synth.size());
      const double risk_r = static_cast<double>(miss_r) / static_cast<double>(real.size());
      best_erm = std::min(best_erm, risk_g);
      best_joint = std::min(best_joint, risk_r + risk_g);
      const double psi_v = 0.5 * (static_cast<double>(zero_g) / static_cast<double>(synth.size()) +
                                  static_cast<double>(one_r) / static_cast<double>(real.size()));
      best_domain = std::max(best_domain, std::abs(1.0 - 2.0 * psi_v));
    }

    const Hypothesis h_erm = train::erm_train(space, synth, {});
    const Hypothesis h_joint = train::joint_train(space, real, synth, {});
    const Hypothesis h_domain = train::domain_train(space, synth, real, {});

    if (est::empirical_risk(h_erm, synth) != best_erm) ++mismatches;
    if (est::empirical_risk(h_joint, real) + est::empirical_risk(h_joint, synth) != best_joint) {
      ++mismatches;
    }
    if (std::abs(1.0 - 2.0 * est::psi(h_domain, synth, real)) != best_domain) ++mismatches;
  }
  c.pass = mismatches == 0;
  c.detail = "objective_mismatches=" + std::to_string(mismatches) + "/300";
  return c;
}

Criterion criterion_gradient_check() {
  Criterion c{9, "surrogate gradients match central differences (100 points)"};
  Rng rng(313370);
  const double step = 1e-5;
  double worst = 0.0;
  int points = 0;

  const auto check_softmax = [&](const train::ParametricModel& model, std::size_t rows) {
    std::vector<double> xs(rows * model.dims());
    for (double& v : xs) v = rng.next_gaussian();
    const FeatureBlock fb = FeatureBlock::dense(model.dims(), xs);
    std::vector<Label> ys(rows);
    for (Label& y : ys) {
      y = static_cast<Label>(rng.next_below(static_cast<std::uint64_t>(model.arity())));
    }
    std::vector<std::size_t> idx(rows);
    for (std::size_t i = 0; i < rows; ++i) idx[i] = i;

    std::vector<double> params(model.param_count());
    for (double& p : params) p = rng.next_gaussian();
    std::vector<double> grad(params.size());
    train::softmax_xent(model, params, fb, idx, ys, grad);
    const auto loss_at = [&](const std::vector<double>& p) {
      std::vector<double> scratch(p.size());
      return train::softmax_xent(model, p, fb, idx, ys, scratch);
    };
    worst = std::max(worst, testutil::rel_l2_gap(grad, testutil::fd_gradient(loss_at, params, step)));
    ++points;
  };

  const auto check_balanced = [&](const train::ParametricModel& model, std::size_t rows) {
    std::vector<double> xs_g(rows * model.dims());
    std::vector<double> xs_r(rows * model.dims());
    for (double& v : xs_g) v = rng.next_gaussian();
    for (double& v : xs_r) v = rng.next_gaussian();
    const FeatureBlock fg = FeatureBlock::dense(model.dims(), xs_g);
    const FeatureBlock fr = FeatureBlock::dense(model.dims(), xs_r);
    std::vector<std::size_t> idx(rows);
    for (std::size_t i = 0; i < rows; ++i) idx[i] = i;

    std::vector<double> params(model.param_count());
    for (double& p : params) p = rng.next_gaussian();
    std::vector<double> grad(params.size());
    train::balanced_domain_xent(model, params, fg, idx, fr, idx, grad);
    const auto loss_at = [&](const std::vector<double>& p) {
      std::vector<double> scratch(p.size());
      return train::balanced_domain_xent(model, p, fg, idx, fr, idx, scratch);
    };
    worst = std::max(worst, testutil::rel_l2_gap(grad, testutil::fd_gradient(loss_at, params, step)));
    ++points;
  };

  for (int i = 0; i < 25; ++i) check_softmax(train::ParametricModel::linear(4, 3), 6);
  for (int i = 0; i < 25; ++i) check_softmax(train::ParametricModel::net(4, 5, 3), 6);
  for (int i = 0; i < 25; ++i) check_balanced(train::ParametricModel::linear(4, 2), 5);
  for (int i = 0; i < 25; ++i) check_balanced(train::ParametricModel::net(4, 5, 2), 5);

  c.pass = points == 100 && worst <= 1e-4;
  c.detail = "points=" + std::to_string(points) + " worst_rel_gap=" + fmt(worst);
  return c;
}

Criterion criterion_cli_round_trip() {
  Criterion c{10, "prediction round trip is bit-exact; fixture hand count holds"};
  bool ok = true;
  std::string note;

  gen::ScenarioConfig scfg;
  scfg.kind = gen::ScenarioKind::gaussian_pair;
  scfg.n = 600;
  scfg.m = 400;
  scfg.dims = 4;
  scfg.arity = 5;
  scfg.gamma = 0.4;
  scfg.rho = 0.1;
  scfg.seed = 99;
  train::TrainConfig tcfg;
  tcfg.max_steps = 1000;

  const cli::RunArtifacts run = cli::run_scenario(scfg, tcfg, {0.05});
  const auto parsed = cli::parse_prediction_csv(cli::predictions_to_csv(run.predictions));
  const cli::EstimateResult re = cli::estimate_from_predictions(parsed, {0.05});
  const est::BoundReport& a = re.report;
  const est::BoundReport& b = run.report;
  if (a.eps_test_g_h != b.eps_test_g_h || a.eps_test_r_h != b.eps_test_r_h ||
      a.lambda_hat != b.lambda_hat || a.d_g2r_hat != b.d_g2r_hat ||
      a.b_g2r_hat != b.b_g2r_hat || *a.d_da_hat != *b.d_da_hat || *a.b_da_hat != *b.b_da_hat ||
      a.hoeffding_margin != b.hoeffding_margin || a.n != b.n || a.m != b.m) {
    ok = false;
    note += "round-trip rates differ; ";
  }

  const auto fixture =
      cli::load_predictions(std::string(G2R_TEST_DATA_DIR) + "/predictions_fixture.csv");
  const cli::EstimateResult fx = cli::estimate_from_predictions(fixture, {0.05});
  if (std::abs(fx.report.b_g2r_hat - 0.40) > 1e-12) {
    ok = false;
    note += "fixture B_g2r=" + fmt(fx.report.b_g2r_hat) + "; ";
  }
  c.pass = ok;
  c.detail = note.empty() ? "b_g2r(fixture)=" + fmt(fx.report.b_g2r_hat) + " rates bit-equal"
                          : note;
  return c;
}

}  // namespace

int main() {
  std::vector<Criterion> results;
  results.push_back(criterion_theorem_fuzz());
  results.push_back(criterion_adversarial_hstar());
  results.push_back(criterion_overestimation());
  results.push_back(criterion_estimator_consistency());
  criterion_trends(results);
  results.push_back(criterion_scalar_formulas());
  results.push_back(criterion_finite_optimality());
  results.push_back(criterion_gradient_check());
  results.push_back(criterion_cli_round_trip());

  std::sort(results.begin(), results.end(),
            [](const Criterion& a, const Criterion& b) { return a.id < b.id; });
  int failures = 0;
  for (const Criterion& c : results) {
    failures += c.pass ? 0 : 1;
    std::printf("%s  criterion %2d: %s [%s]\n", c.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                c.detail.c_str());
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
