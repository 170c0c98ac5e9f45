#pragma once

// Controllable real/synthetic dataset generators. Two knobs drive every
// scenario: gamma moves the synthetic feature distribution away from the
// real one, rho resamples synthetic labels away from the real labeling.

#include <cstddef>
#include <vector>

#include "g2r/domain.hpp"
#include "g2r/exact.hpp"

namespace g2r::gen {

enum class ScenarioKind { gaussian_pair, discrete_instance, overestimation };
enum class Knob { gamma, rho };

const char* to_string(ScenarioKind k);
const char* to_string(Knob k);

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::gaussian_pair;
  double gamma = 0.0;  // feature discrepancy in [0,1]
  double rho = 0.0;    // label inconsistency in [0,1]
  std::size_t n = 5000;
  std::size_t m = 2000;
  std::size_t dims = 8;  // feature dimension; domain size K for discrete kinds
  int arity = 10;
  Seed seed = 0;

  void validate() const;
};

// Real side: balanced mixture of `arity` unit-variance Gaussians on a fixed
// layout with pairwise mean distance >= 4. Synthetic side: each component
// mean shifted by gamma * 2 along a fixed per-component direction, covariance
// inflated by (1 + gamma); labels resampled to another class with
// probability rho.
DatasetPair make_gaussian_pair(const ScenarioConfig& cfg);

// Component means of the layout (arity x dims, row-major) and the fixed unit
// shift directions; deterministic functions of (dims, arity).
std::vector<double> component_means(std::size_t dims, int arity);
std::vector<double> component_shift_dirs(std::size_t dims, int arity);

struct DiscreteScenario {
  exact::DiscreteInstance instance;
  DatasetPair data;
};

// Random finite world with total-variation distance controlled by gamma and
// per-point label flips controlled by rho, plus a dataset sampled from it.
DiscreteScenario make_discrete_instance(const ScenarioConfig& cfg);

// Disjoint-support construction: real mass on the lower half of the domain,
// synthetic mass on the upper half, the same labeling pattern on both
// halves, and a threshold space containing both a support separator and the
// constant-0 hypothesis. The seed picks the domain size from {8, 16, 32}.
exact::DiscreteInstance make_overestimation_instance(Seed seed);

// Cartesian product of knob values and seeds in value-major order; all other
// fields copied from base.
std::vector<ScenarioConfig> sweep(const ScenarioConfig& base, Knob knob,
                                  const std::vector<double>& values,
                                  const std::vector<Seed>& seeds);

}  // namespace g2r::gen
