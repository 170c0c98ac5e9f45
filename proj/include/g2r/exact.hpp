#pragma once

// Exact computation of risks, distances, bounds, and the proof-chain checks
// on finite discrete worlds with enumerable hypothesis spaces.

#include <cstddef>
#include <utility>

#include "g2r/domain.hpp"

namespace g2r::exact {

// Enumeration guard: |H| for instances, and pair count |H|^2 for the
// HdH-distance scan.
inline constexpr std::size_t kEnumerationGuard = std::size_t{1} << 16;

inline constexpr double kIdentityTolerance = 1e-12;
inline constexpr double kInequalityTolerance = 1e-9;

// A fully specified finite world: K points, two distributions, two labeling
// tables, one enumerable hypothesis space.
struct DiscreteInstance {
  ProbTable dist_r;
  ProbTable dist_g;
  LabelingFunction f_r;
  LabelingFunction f_g;
  HypothesisSpace space;

  std::size_t domain_size() const { return dist_r.size(); }
  void validate() const;
};

struct ExactBoundReport {
  double eps_r_h = 0.0;   // actual risk on the real side
  double eps_g_h = 0.0;   // actual risk on the synthetic side
  Hypothesis h_star;      // joint minimizer over the space
  double lambda = 0.0;    // combined error of h_star
  double d_hdh = 0.0;     // distance through the fixed (h, h_star) disagreement
  double d_HdH = 0.0;     // supremum distance over all hypothesis pairs
  double b_g2r = 0.0;     // eps_g_h + lambda + d_hdh / 2
  double b_da = 0.0;      // eps_g_h + lambda + d_HdH / 2
};

// Numeric check of the four derivation steps behind the bound; valid for any
// reference hypothesis h_star, optimal or not.
struct ProofChainReport {
  double lhs_s3 = 0.0;
  double rhs_s3 = 0.0;
  double lhs_s4 = 0.0;
  double rhs_s4 = 0.0;
  double s5_identity_gap = 0.0;
  double final_slack = 0.0;
  bool all_hold = false;
};

// sum_x mass(x) * [f(x) != h(x)], in [0, 1].
double exact_risk(const Hypothesis& h, const LabelingFunction& f, const ProbTable& dist);

// sum_x mass(x) * [h1(x) != h2(x)].
double exact_disagreement(const Hypothesis& h1, const Hypothesis& h2, const ProbTable& dist);

// 2 * |P_g[h != h_star] - P_r[h != h_star]|, in [0, 2].
double exact_d_hdh(const Hypothesis& h, const Hypothesis& h_star, const ProbTable& dist_g,
                   const ProbTable& dist_r);

// 2 * max over ordered pairs (h', h'') in H x H of |P_g[h' != h''] - P_r[h' != h'']|.
double exact_d_HdH(const HypothesisSpace& space, const ProbTable& dist_g,
                   const ProbTable& dist_r);

// argmin over the space of eps_g + eps_r (ties to the lowest index) and the
// attained minimum.
std::pair<Hypothesis, double> exact_joint_opt(const HypothesisSpace& space,
                                              const DiscreteInstance& inst);

ExactBoundReport exact_bounds(const DiscreteInstance& inst, const Hypothesis& h);

ProofChainReport verify_proof_chain(const DiscreteInstance& inst, const Hypothesis& h,
                                    const Hypothesis& h_star);

}  // namespace g2r::exact
