#pragma once

// Property fuzzing of the exact oracle: random finite worlds are generated
// and every inequality behind the bounds is checked numerically, including a
// pass with a deliberately non-optimal reference hypothesis (the derivation
// chain never uses optimality).

#include <json.hpp>
#include <optional>

#include "g2r/exact.hpp"
#include "g2r/rng.hpp"

namespace g2r::verify {

struct FuzzOptions {
  std::size_t fuzz_count = 500;
  Seed seed = 0;
  std::size_t max_domain = 12;
  std::size_t max_space = 256;
  int max_arity = 4;
  // Negative control: corrupts the first bound report before checking, which
  // must surface as a violation.
  bool corrupt_self_test = false;
};

struct VerifySummary {
  std::size_t instances = 0;
  std::size_t checks = 0;
  std::size_t violations = 0;
  double min_final_slack = 0.0;
  double max_dominance_gap = 0.0;  // max of d_hdh - d_HdH; positive would violate Eq-15-style dominance
  std::optional<nlohmann::json> first_violation;  // offending instance, for replay
};

exact::DiscreteInstance random_instance(Rng& rng, std::size_t max_domain, std::size_t max_space,
                                        int max_arity);

VerifySummary run_fuzz(const FuzzOptions& opts);

nlohmann::json summary_to_json(const VerifySummary& s);

}  // namespace g2r::verify
