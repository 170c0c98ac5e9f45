#include "g2r/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "g2r/serialize.hpp"

namespace g2r::verify {

namespace {

std::vector<double> random_masses(Rng& rng, std::size_t k) {
  std::vector<double> mass(k);
  double sum = 0.0;
  for (double& v : mass) {
    v = -std::log(1.0 - rng.next_unit());
    sum += v;
  }
  for (double& v : mass) v /= sum;
  auto largest = std::max_element(mass.begin(), mass.end());
  double total = 0.0;
  for (double v : mass) total += v;
  *largest += 1.0 - total;
  return mass;
}

}  // namespace

exact::DiscreteInstance random_instance(Rng& rng, std::size_t max_domain, std::size_t max_space,
                                        int max_arity) {
  const std::size_t k = 2 + rng.next_below(max_domain - 1);
  const int arity = 2 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_arity - 1)));
  const std::size_t space_size = 2 + rng.next_below(max_space - 1);

  std::vector<Label> f_r(k);
  std::vector<Label> f_g(k);
  for (std::size_t x = 0; x < k; ++x) {
    f_r[x] = static_cast<Label>(rng.next_below(static_cast<std::uint64_t>(arity)));
    f_g[x] = static_cast<Label>(rng.next_below(static_cast<std::uint64_t>(arity)));
  }

  std::vector<Hypothesis> members;
  members.reserve(space_size);
  members.push_back(Hypothesis::lookup(arity, std::vector<Label>(k, 0)));
  while (members.size() < space_size) {
    std::vector<Label> table(k);
    for (Label& y : table) y = static_cast<Label>(rng.next_below(static_cast<std::uint64_t>(arity)));
    members.push_back(Hypothesis::lookup(arity, std::move(table)));
  }

  exact::DiscreteInstance inst{ProbTable(random_masses(rng, k)), ProbTable(random_masses(rng, k)),
                               LabelingFunction::table(arity, std::move(f_r)),
                               LabelingFunction::table(arity, std::move(f_g)),
                               HypothesisSpace::finite(std::move(members))};
  inst.validate();
  return inst;
}

VerifySummary run_fuzz(const FuzzOptions& opts) {
  if (opts.fuzz_count == 0) throw ValidationError("run_fuzz: fuzz_count must be >= 1");
  if (opts.max_domain < 2 || opts.max_space < 2 || opts.max_arity < 2) {
    throw ValidationError("run_fuzz: domain, space, and arity bounds must be >= 2");
  }

  VerifySummary summary;
  summary.min_final_slack = std::numeric_limits<double>::infinity();
  summary.max_dominance_gap = -std::numeric_limits<double>::infinity();

  Rng rng(opts.seed);
  for (std::size_t trial = 0; trial < opts.fuzz_count; ++trial) {
    const exact::DiscreteInstance inst =
        random_instance(rng, opts.max_domain, opts.max_space, opts.max_arity);
    const std::size_t count = inst.space.member_count();
    const Hypothesis h = inst.space.member(rng.next_below(count));

    exact::ExactBoundReport rep = exact_bounds(inst, h);
    if (opts.corrupt_self_test && trial == 0) rep.b_g2r -= 0.5;

    const exact::ProofChainReport chain = verify_proof_chain(inst, h, rep.h_star);
    const Hypothesis h_star_adv = inst.space.member(rng.next_below(count));
    const exact::ProofChainReport adv_chain = verify_proof_chain(inst, h, h_star_adv);

    std::vector<std::string> failures;
    if (rep.b_g2r != rep.eps_g_h + rep.lambda + 0.5 * rep.d_hdh ||
        rep.b_da != rep.eps_g_h + rep.lambda + 0.5 * rep.d_HdH) {
      failures.push_back("report: bound value does not equal its parts");
    }
    if (!(rep.eps_r_h <= rep.b_g2r + exact::kInequalityTolerance)) {
      failures.push_back("bound: eps_r_h > b_g2r");
    }
    if (!(rep.eps_r_h <= rep.b_da + exact::kInequalityTolerance)) {
      failures.push_back("bound: eps_r_h > b_da");
    }
    if (!(rep.d_hdh <= rep.d_HdH + exact::kIdentityTolerance)) {
      failures.push_back("dominance: d_hdh > d_HdH");
    }
    if (!chain.all_hold) failures.push_back("proof chain failed for the joint minimizer");
    if (!adv_chain.all_hold) failures.push_back("proof chain failed for a random h_star");

    summary.instances += 1;
    summary.checks += 6;
    summary.min_final_slack = std::min(summary.min_final_slack, rep.b_g2r - rep.eps_r_h);
    summary.max_dominance_gap = std::max(summary.max_dominance_gap, rep.d_hdh - rep.d_HdH);

    if (!failures.empty()) {
      summary.violations += failures.size();
      if (!summary.first_violation) {
        nlohmann::json v;
        v["trial"] = trial;
        v["failures"] = failures;
        v["instance"] = instance_to_json(inst);
        v["h"] = hypothesis_to_json(h);
        v["h_star"] = hypothesis_to_json(rep.h_star);
        v["h_star_adversarial"] = hypothesis_to_json(h_star_adv);
        summary.first_violation = std::move(v);
      }
    }
  }
  return summary;
}

nlohmann::json summary_to_json(const VerifySummary& s) {
  nlohmann::json j;
  j["instances"] = s.instances;
  j["checks"] = s.checks;
  j["violations"] = s.violations;
  j["min_final_slack"] = s.min_final_slack;
  j["max_dominance_gap"] = s.max_dominance_gap;
  j["ok"] = s.violations == 0;
  if (s.first_violation) j["first_violation"] = *s.first_violation;
  return j;
}

}  // namespace g2r::verify
