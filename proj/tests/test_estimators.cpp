#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "g2r/estimators.hpp"
#include "g2r/exact.hpp"
#include "g2r/scenario.hpp"
#include "testutil.hpp"

using namespace g2r;
using namespace g2r::est;

namespace {

SampleSet labeled_ids(std::vector<PointId> ids, std::vector<Label> labels,
                      Origin origin = Origin::real, Split split = Split::test) {
  SampleSet s;
  s.features = FeatureBlock::discrete(std::move(ids));
  s.labels = std::move(labels);
  s.origin = origin;
  s.split = split;
  return s;
}

SampleSet ids_only(std::vector<PointId> ids, Origin origin = Origin::real) {
  SampleSet s;
  s.features = FeatureBlock::discrete(std::move(ids));
  s.origin = origin;
  s.split = Split::test;
  return s;
}

}  // namespace

TEST_CASE("empirical_risk: trivial values, fixture count, errors") {
  const Hypothesis ident = Hypothesis::lookup(2, {0, 1});
  const SampleSet good = labeled_ids({0, 1, 0, 1}, {0, 1, 0, 1});
  CHECK(empirical_risk(ident, good) == 0.0);

  const SampleSet flipped = labeled_ids({0, 1, 0, 1}, {1, 0, 1, 0});
  CHECK(empirical_risk(ident, flipped) == 1.0);

  // 10 points, 3 mismatches.
  const SampleSet fixture = labeled_ids({0, 0, 0, 0, 0, 0, 0, 1, 1, 1}, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
  CHECK(empirical_risk(ident, fixture) == doctest::Approx(0.3).epsilon(1e-15));

  CHECK_THROWS_AS(empirical_risk(ident, labeled_ids({}, {})), ValidationError);
  CHECK_THROWS_AS(empirical_risk(ident, ids_only({0, 1})), ValidationError);
}

TEST_CASE("disagreement_rate: trivial values and fixture count") {
  const Hypothesis a = Hypothesis::lookup(2, {0, 1, 0, 1});
  CHECK(disagreement_rate(a, a, ids_only({0, 1, 2, 3})) == 0.0);
  CHECK(disagreement_rate(a, a.complemented(), ids_only({0, 1, 2, 3})) == 1.0);

  // 4 of 20 points differ.
  const Hypothesis b = Hypothesis::lookup(2, {1, 1, 0, 1});
  std::vector<PointId> pts;
  for (PointId i = 0; i < 20; ++i) pts.push_back(i % 5 == 0 ? 0 : 1);  // ids 0,5,10,15 -> point 0
  CHECK(disagreement_rate(a, b, ids_only(pts)) == doctest::Approx(0.2).epsilon(1e-15));

  CHECK_THROWS_AS(disagreement_rate(a, b, ids_only({})), ValidationError);
}

TEST_CASE("lambda_hat: perfect, half-flipped, hand-counted pair") {
  const Hypothesis star = Hypothesis::lookup(2, {0, 1});
  const SampleSet real_ok = labeled_ids({0, 1, 0, 1}, {0, 1, 0, 1});
  const SampleSet synth_ok = labeled_ids({0, 1, 1, 0}, {0, 1, 1, 0}, Origin::synthetic);
  CHECK(lambda_hat(star, real_ok, synth_ok) == 0.0);

  const SampleSet synth_flipped = labeled_ids({0, 1, 1, 0}, {1, 0, 0, 1}, Origin::synthetic);
  CHECK(lambda_hat(star, real_ok, synth_flipped) == 1.0);

  // 25 points each: 3 and 2 mismatches -> 0.12 + 0.08 = 0.20.
  std::vector<PointId> ids(25, 0);
  std::vector<Label> real_labels(25, 0);
  std::vector<Label> synth_labels(25, 0);
  for (int i = 0; i < 3; ++i) real_labels[static_cast<std::size_t>(i)] = 1;
  for (int i = 0; i < 2; ++i) synth_labels[static_cast<std::size_t>(i)] = 1;
  const double got = lambda_hat(star, labeled_ids(ids, real_labels),
                                labeled_ids(ids, synth_labels, Origin::synthetic));
  CHECK(got == doctest::Approx(0.20).epsilon(1e-15));
}

TEST_CASE("d_g2r_hat: trivial zeroes") {
  const Hypothesis h = Hypothesis::lookup(2, {0, 1, 1, 0});
  const Hypothesis star = Hypothesis::lookup(2, {0, 1, 0, 1});
  CHECK(d_g2r_hat(h, h, ids_only({0, 1, 2}, Origin::synthetic), ids_only({3, 0, 1})) == 0.0);
  CHECK(d_g2r_hat(h, star, ids_only({0, 1, 2, 3}, Origin::synthetic), ids_only({0, 1, 2, 3})) ==
        0.0);
}

TEST_CASE("d_g2r_hat: covers the exact half-distance on a discrete scenario") {
  gen::ScenarioConfig cfg;
  cfg.kind = gen::ScenarioKind::discrete_instance;
  cfg.dims = 10;  // domain size
  cfg.arity = 3;
  cfg.gamma = 0.6;
  cfg.rho = 0.3;
  cfg.n = 10;
  cfg.m = 10;
  cfg.seed = 99;
  const auto scenario = gen::make_discrete_instance(cfg);
  const exact::DiscreteInstance& inst = scenario.instance;

  const Hypothesis h = inst.space.member(1);
  const Hypothesis star = inst.space.member(2);
  const double v = 0.5 * exact::exact_d_hdh(h, star, inst.dist_g, inst.dist_r);
  const double margin = hoeffding_margin(10000, ConfidenceConfig{0.05});

  std::size_t covered = 0;
  for (Seed seed = 0; seed < 200; ++seed) {
    const SampleSet synth = sample(inst.dist_g, 10000, derive_seed(seed, 1), Origin::synthetic,
                                   Split::test);
    const SampleSet real = sample(inst.dist_r, 10000, derive_seed(seed, 2));
    const double est_v = d_g2r_hat(h, star, synth, real);
    if (std::abs(est_v - v) <= 2.0 * margin) ++covered;
  }
  CHECK(covered >= 186);  // >= 93% of 200
}

TEST_CASE("psi: constants sit exactly at one half; separators at zero") {
  const SampleSet synth = ids_only({0, 1, 2, 3, 4}, Origin::synthetic);
  const SampleSet real = ids_only({5, 6, 7}, Origin::real);
  CHECK(psi(Hypothesis::constant(2, 1), synth, real) == 0.5);
  CHECK(psi(Hypothesis::constant(2, 0), synth, real) == 0.5);

  // 1 on the synthetic support {0,1,2}, 0 on the real support {5,6,7}.
  const Hypothesis sep = Hypothesis::lookup(2, {1, 1, 1, 0, 0, 0, 0, 0});
  CHECK(psi(sep, ids_only({0, 1, 2}, Origin::synthetic), ids_only({5, 6, 7})) == 0.0);

  CHECK_THROWS_AS(psi(Hypothesis::lookup(3, {0, 1, 2}), synth, real), ValidationError);
}

TEST_CASE("psi: hand-counted rates average to 0.2") {
  // Synthetic: 1 of 10 predicted 0 -> 0.1. Real: 3 of 10 predicted 1 -> 0.3.
  const Hypothesis h = Hypothesis::lookup(2, {0, 1, 1, 1});
  std::vector<PointId> synth_ids(10, 1);
  synth_ids[0] = 0;
  std::vector<PointId> real_ids(10, 0);
  real_ids[0] = real_ids[1] = real_ids[2] = 1;
  const double got =
      psi(h, ids_only(synth_ids, Origin::synthetic), ids_only(real_ids, Origin::real));
  CHECK(got == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("d_da_hat: constants vanish, separators peak, side swap invariant") {
  const SampleSet synth = ids_only({0, 1, 2}, Origin::synthetic);
  const SampleSet real = ids_only({5, 6, 7});
  CHECK(d_da_hat(Hypothesis::constant(2, 1), synth, real) == 0.0);

  const Hypothesis sep = Hypothesis::lookup(2, {1, 1, 1, 0, 0, 0, 0, 0});
  CHECK(d_da_hat(sep, synth, real) == 1.0);

  Rng rng(64);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Label> table(8);
    for (Label& y : table) y = static_cast<Label>(rng.next_below(2));
    const Hypothesis h = Hypothesis::lookup(2, table);
    const double forward = d_da_hat(h, synth, real);
    const double swapped = d_da_hat(h, real, synth);
    REQUIRE(forward == doctest::Approx(swapped).epsilon(1e-12));
  }
}

TEST_CASE("hoeffding_margin: frozen references, exact halving, errors") {
  // References computed at 50-digit precision.
  const double ref_10000 = 0.0135810151574061949849077;
  CHECK(std::abs(hoeffding_margin(10000, {0.05}) - ref_10000) <= 1e-12 * ref_10000);
  const double ref_2000 = 0.03036807309541525842961854;
  CHECK(std::abs(hoeffding_margin(2000, {0.05}) - ref_2000) <= 1e-12 * ref_2000);

  for (std::size_t m : {10ull, 100ull, 2500ull, 10000ull}) {
    CHECK(hoeffding_margin(4 * m, {0.05}) == hoeffding_margin(m, {0.05}) / 2.0);
  }
  for (std::size_t m = 1; m < 200; ++m) {
    CHECK(hoeffding_margin(m + 1, {0.1}) < hoeffding_margin(m, {0.1}));
  }
  CHECK_THROWS_AS(hoeffding_margin(0, {0.05}), ValidationError);
  CHECK_THROWS_AS(hoeffding_margin(100, {2.0}), ValidationError);
  CHECK_THROWS_AS(hoeffding_margin(100, {0.0}), ValidationError);
}

TEST_CASE("vc_bound: frozen references, additive structure, monotonicity") {
  const double ref_a = 0.05043007372533831231080982;  // (n=50000, d=1, delta=0.05, emp=0)
  CHECK(std::abs(vc_bound(0.0, 50000, 1, {0.05}) - ref_a) <= 1e-12 * ref_a);
  const double ref_b = 0.710361482600273007568649;  // (n=1000, d=3, delta=0.1, emp=0.25)
  CHECK(std::abs(vc_bound(0.25, 1000, 3, {0.1}) - ref_b) <= 1e-12 * ref_b);
  const double ref_c = 1.951666106786995336482397;  // (n=128, d=5, delta=0.01, emp=0.5)
  CHECK(std::abs(vc_bound(0.5, 128, 5, {0.01}) - ref_c) <= 1e-12 * ref_c);

  const double low = vc_bound(0.0, 5000, 2, {0.05});
  const double high = vc_bound(0.1, 5000, 2, {0.05});
  CHECK(std::abs((high - low) - 0.1) <= 1e-15);

  double prev = vc_bound(0.0, 100, 3, {0.05});
  for (std::size_t n = 200; n <= 100000; n *= 2) {
    const double cur = vc_bound(0.0, n, 3, {0.05});
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK(vc_bound(0.5, 10, 5, {0.05}) > 1.0);  // vacuous values are reported as-is
  CHECK_THROWS_AS(vc_bound(0.0, 0, 1, {0.05}), ValidationError);
  CHECK_THROWS_AS(vc_bound(0.0, 10, 0, {0.05}), ValidationError);
}

TEST_CASE("empirical risk concentrates around the exact risk at Hoeffding rate") {
  gen::ScenarioConfig cfg;
  cfg.kind = gen::ScenarioKind::discrete_instance;
  cfg.dims = 12;
  cfg.arity = 3;
  cfg.gamma = 0.4;
  cfg.rho = 0.2;
  cfg.n = 10;
  cfg.m = 10;

  const ConfidenceConfig conf{0.05};
  for (const std::size_t m : {std::size_t{100}, std::size_t{1000}, std::size_t{10000}}) {
    std::size_t within = 0;
    std::size_t trials = 0;
    for (Seed scenario_seed = 0; scenario_seed < 4; ++scenario_seed) {
      cfg.seed = 1000 + scenario_seed;
      const auto sc = gen::make_discrete_instance(cfg);
      const Hypothesis h = sc.instance.space.member(1);
      const double truth = exact::exact_risk(h, sc.instance.f_g, sc.instance.dist_g);
      const double margin = hoeffding_margin(m, conf);
      for (Seed t = 0; t < 250; ++t) {
        const SampleSet feats =
            sample(sc.instance.dist_g, m, derive_seed(t, 77 + scenario_seed), Origin::synthetic,
                   Split::test);
        const SampleSet labeled = apply_labeling(sc.instance.f_g, feats);
        if (std::abs(empirical_risk(h, labeled) - truth) <= margin) ++within;
        ++trials;
      }
    }
    CHECK(trials == 1000);
    CHECK(static_cast<double>(within) / static_cast<double>(trials) >= 1.0 - conf.delta - 0.02);
  }
}

TEST_CASE("bound report: exact identities, ordering, consistency error") {
  SampleSet rt = labeled_ids({0, 1, 0, 1}, {0, 1, 0, 1}, Origin::real, Split::train);
  SampleSet re = labeled_ids({0, 1, 1, 0}, {0, 1, 1, 1}, Origin::real, Split::test);
  SampleSet gt = labeled_ids({0, 0, 1, 1}, {0, 0, 1, 1}, Origin::synthetic, Split::train);
  SampleSet ge = labeled_ids({1, 1, 0, 0}, {1, 0, 0, 0}, Origin::synthetic, Split::test);
  DatasetPair data{rt, re, gt, ge, 4, 4};

  const Hypothesis h = Hypothesis::lookup(2, {0, 1});
  const Hypothesis star = Hypothesis::lookup(2, {0, 0});
  const Hypothesis da = Hypothesis::lookup(2, {1, 0});
  const BoundReport rep = make_bound_report(h, star, da, data, {0.05}, 7, 0.25, 0.5);

  CHECK(rep.b_g2r_hat == rep.eps_test_g_h + rep.lambda_hat + rep.d_g2r_hat);
  REQUIRE(rep.d_da_hat.has_value());
  CHECK(*rep.b_da_hat == rep.eps_test_g_h + rep.lambda_hat + *rep.d_da_hat);
  if (*rep.d_da_hat >= rep.d_g2r_hat) CHECK(*rep.b_da_hat >= rep.b_g2r_hat);
  CHECK(rep.m == 4);
  CHECK(rep.hoeffding_margin == hoeffding_margin(4, {0.05}));
  CHECK(*rep.gamma == 0.25);

  DatasetPair bad = data;
  bad.real_test = labeled_ids({0, 1, 1}, {0, 1, 1}, Origin::real, Split::test);
  bad.m = 3;
  CHECK_THROWS_AS(make_bound_report(h, star, da, bad, {0.05}, 7, 0.0, 0.0), ValidationError);

  // Without a domain classifier the DA fields stay empty.
  const BoundReport no_da = make_bound_report(h, star, std::nullopt, data, {0.05}, 7, 0.0, 0.0);
  CHECK_FALSE(no_da.d_da_hat.has_value());
  CHECK_FALSE(no_da.b_da_hat.has_value());
}

TEST_CASE("bound report CSV row shape") {
  BoundReport r;
  r.n = 100;
  r.m = 50;
  r.seed = 3;
  r.gamma = 0.5;
  r.rho = 0.0;
  r.eps_test_g_h = 0.125;
  r.b_g2r_hat = 0.25;
  r.hoeffding_margin = 0.1;
  const std::string row = r.csv_row();
  CHECK(row.substr(0, 9) == "100,50,0.");
  CHECK(BoundReport::csv_header().substr(0, 4) == "n,m,");
  // d_da and b_da cells are empty when absent.
  std::size_t commas = 0;
  for (char c : row) commas += c == ',';
  CHECK(commas == 13);
  CHECK(row.find(",,") != std::string::npos);
}
