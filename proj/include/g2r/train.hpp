#pragma once

// The three trained hypotheses of the pipeline: the main classifier, the
// joint minimizer over both sides, and the binary domain classifier.
// Finite-enumeration spaces are optimized exactly; parametric families run
// Adam on a cross-entropy surrogate with periodic 0-1 checkpoint selection.

#include <cstddef>
#include <span>
#include <vector>

#include "g2r/domain.hpp"

namespace g2r::train {

struct TrainConfig {
  double learning_rate = 0.0002;
  std::size_t batch_size = 128;
  std::size_t max_steps = 10000;
  double beta1 = 0.5;
  double beta2 = 0.999;
  Seed seed = 0;

  void validate() const;
};

inline constexpr double kAdamEpsilon = 1e-8;
inline constexpr std::size_t kCheckpointInterval = 500;

// Minimizes empirical risk on one labeled set.
Hypothesis erm_train(const HypothesisSpace& space, const SampleSet& train,
                     const TrainConfig& cfg);

// Minimizes the sum of the two per-set empirical risks (each set enters as
// its own mean term, never pooled).
Hypothesis joint_train(const HypothesisSpace& space, const SampleSet& real_train,
                       const SampleSet& synth_train, const TrainConfig& cfg);

// Trains a binary synthetic-vs-real classifier (synthetic -> 1, real -> 0) by
// minimizing its balanced error psi-hat; if the selected hypothesis ends with
// psi-hat > 0.5 the complemented hypothesis is returned, so the reported
// psi-hat never exceeds 0.5.
Hypothesis domain_train(const HypothesisSpace& space, const SampleSet& synth_features,
                        const SampleSet& real_features, const TrainConfig& cfg);

// ---------------------------------------------------------------------------
// Differentiable surrogate internals, exposed so the analytic gradients can
// be verified against finite differences.

class ParametricModel {
 public:
  static ParametricModel linear(std::size_t dims, int arity);
  static ParametricModel net(std::size_t dims, std::size_t hidden, int arity);
  static ParametricModel for_space(const HypothesisSpace& space);

  std::size_t param_count() const;
  std::size_t dims() const { return dims_; }
  int arity() const { return arity_; }

  std::vector<double> init_params(Seed seed) const;
  Hypothesis to_hypothesis(std::span<const double> params) const;

  // Adds weight * grad of CE(softmax(logits(x)), y) into grad; returns the
  // weighted loss term.
  double ce_term(std::span<const double> params, std::span<const double> x, Label y,
                 double weight, std::span<double> grad) const;

 private:
  ParametricModel() = default;
  bool has_hidden_ = false;
  std::size_t dims_ = 0;
  std::size_t hidden_ = 0;
  int arity_ = 2;
};

// Mean softmax cross-entropy over the chosen rows; grad is overwritten.
double softmax_xent(const ParametricModel& model, std::span<const double> params,
                    const FeatureBlock& features, std::span<const std::size_t> indices,
                    const std::vector<Label>& labels, std::span<double> grad);

// (mean CE on synthetic rows, target 1) / 2 + (mean CE on real rows, target 0) / 2.
double balanced_domain_xent(const ParametricModel& model, std::span<const double> params,
                            const FeatureBlock& synth, std::span<const std::size_t> synth_idx,
                            const FeatureBlock& real, std::span<const std::size_t> real_idx,
                            std::span<double> grad);

}  // namespace g2r::train
