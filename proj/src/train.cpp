#include "g2r/train.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "g2r/estimators.hpp"

namespace g2r::train {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ValidationError("TrainConfig: learning_rate must be > 0");
  if (batch_size == 0) throw ValidationError("TrainConfig: batch_size must be >= 1");
  if (max_steps == 0) throw ValidationError("TrainConfig: max_steps must be >= 1");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) {
    throw ValidationError("TrainConfig: momentum parameters must lie in [0,1)");
  }
}

namespace {

void check_labels_fit(const SampleSet& s, int arity, const char* what) {
  for (Label y : s.require_labels()) {
    if (y < 0 || y >= arity) {
      throw ValidationError(std::string(what) + ": label " + std::to_string(y) +
                            " outside space arity " + std::to_string(arity));
    }
  }
}

// ---------------------------------------------------------------------------
// Exact optimization over enumerable spaces.

template <typename Score>
std::size_t argbest_member(const HypothesisSpace& space, bool maximize, Score&& score) {
  const std::size_t count = space.member_count();
  std::size_t best = 0;
  double best_score = score(space.member(0));
  for (std::size_t i = 1; i < count; ++i) {
    const double s = score(space.member(i));
    if (maximize ? s > best_score : s < best_score) {
      best_score = s;
      best = i;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Adam over a surrogate objective. step_fn fills grad for one minibatch;
// metric_fn scores a parameter snapshot on the full training data (lower is
// better). Snapshots are taken every kCheckpointInterval steps and at the
// final step; the earliest best snapshot wins.

using StepFn = std::function<void(std::span<const double>, std::span<double>, Rng&)>;
using MetricFn = std::function<double(std::span<const double>)>;

std::vector<double> run_adam(const ParametricModel& model, const TrainConfig& cfg,
                             const StepFn& step_fn, const MetricFn& metric_fn) {
  const std::size_t p = model.param_count();
  Rng root(cfg.seed);
  Rng batch_rng = root.split(1);

  std::vector<double> params = model.init_params(cfg.seed);
  std::vector<double> grad(p, 0.0);
  std::vector<double> m(p, 0.0);
  std::vector<double> v(p, 0.0);

  std::vector<double> best_params = params;
  double best_metric = metric_fn(params);

  double beta1_pow = 1.0;
  double beta2_pow = 1.0;
  for (std::size_t step = 1; step <= cfg.max_steps; ++step) {
    std::fill(grad.begin(), grad.end(), 0.0);
    step_fn(params, grad, batch_rng);

    beta1_pow *= cfg.beta1;
    beta2_pow *= cfg.beta2;
    for (std::size_t i = 0; i < p; ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * grad[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
      const double m_hat = m[i] / (1.0 - beta1_pow);
      const double v_hat = v[i] / (1.0 - beta2_pow);
      params[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + kAdamEpsilon);
    }

    if (step % kCheckpointInterval == 0 || step == cfg.max_steps) {
      const double metric = metric_fn(params);
      if (metric < best_metric) {
        best_metric = metric;
        best_params = params;
      }
    }
  }
  return best_params;
}

std::vector<std::size_t> draw_batch(Rng& rng, std::size_t n, std::size_t batch_size) {
  std::vector<std::size_t> idx(std::min(batch_size, n) == 0 ? 0 : batch_size);
  for (std::size_t& i : idx) i = static_cast<std::size_t>(rng.next_below(n));
  return idx;
}

void require_dense_for(const HypothesisSpace& space, const SampleSet& s, const char* what) {
  if (s.features.discrete_form()) {
    throw ValidationError(std::string(what) + ": parametric space needs dense features");
  }
  if (s.features.dims() != space.dims()) {
    throw ValidationError(std::string(what) + ": feature dims " +
                          std::to_string(s.features.dims()) + " do not match space dims " +
                          std::to_string(space.dims()));
  }
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  return idx;
}

}  // namespace

// ------------------------------------------------------------------ erm

Hypothesis erm_train(const HypothesisSpace& space, const SampleSet& train,
                     const TrainConfig& cfg) {
  cfg.validate();
  if (train.size() == 0) throw ValidationError("erm_train: empty training set");
  check_labels_fit(train, space.arity(), "erm_train");

  if (space.enumerable()) {
    const std::size_t best = argbest_member(space, /*maximize=*/false, [&](const Hypothesis& h) {
      return est::empirical_risk(h, train);
    });
    return space.member(best);
  }

  require_dense_for(space, train, "erm_train");
  const ParametricModel model = ParametricModel::for_space(space);
  const std::vector<Label>& ys = train.require_labels();
  const FeatureBlock& fb = train.features;
  const std::vector<std::size_t> full = all_indices(train.size());

  const auto step_fn = [&](std::span<const double> p, std::span<double> g, Rng& rng) {
    const std::vector<std::size_t> idx = draw_batch(rng, train.size(), cfg.batch_size);
    softmax_xent(model, p, fb, idx, ys, g);
  };
  const auto metric_fn = [&](std::span<const double> p) {
    return est::empirical_risk(model.to_hypothesis(p), train);
  };
  return model.to_hypothesis(run_adam(model, cfg, step_fn, metric_fn));
}

// ---------------------------------------------------------------- joint

Hypothesis joint_train(const HypothesisSpace& space, const SampleSet& real_train,
                       const SampleSet& synth_train, const TrainConfig& cfg) {
  cfg.validate();
  if (real_train.size() == 0 || synth_train.size() == 0) {
    throw ValidationError("joint_train: both training sets must be nonempty");
  }
  check_labels_fit(real_train, space.arity(), "joint_train");
  check_labels_fit(synth_train, space.arity(), "joint_train");

  if (space.enumerable()) {
    const std::size_t best = argbest_member(space, /*maximize=*/false, [&](const Hypothesis& h) {
      return est::empirical_risk(h, real_train) + est::empirical_risk(h, synth_train);
    });
    return space.member(best);
  }

  require_dense_for(space, real_train, "joint_train");
  require_dense_for(space, synth_train, "joint_train");
  const ParametricModel model = ParametricModel::for_space(space);
  const std::vector<Label>& ys_r = real_train.require_labels();
  const std::vector<Label>& ys_g = synth_train.require_labels();

  // Sum of the two per-set mean losses, one minibatch from each side.
  const auto step_fn = [&](std::span<const double> p, std::span<double> g, Rng& rng) {
    const std::vector<std::size_t> idx_r = draw_batch(rng, real_train.size(), cfg.batch_size);
    const std::vector<std::size_t> idx_g = draw_batch(rng, synth_train.size(), cfg.batch_size);
    const double w_r = 1.0 / static_cast<double>(idx_r.size());
    const double w_g = 1.0 / static_cast<double>(idx_g.size());
    for (std::size_t i : idx_r) model.ce_term(p, real_train.features.row(i), ys_r[i], w_r, g);
    for (std::size_t i : idx_g) model.ce_term(p, synth_train.features.row(i), ys_g[i], w_g, g);
  };
  const auto metric_fn = [&](std::span<const double> p) {
    const Hypothesis h = model.to_hypothesis(p);
    return est::empirical_risk(h, real_train) + est::empirical_risk(h, synth_train);
  };
  return model.to_hypothesis(run_adam(model, cfg, step_fn, metric_fn));
}

// --------------------------------------------------------------- domain

Hypothesis domain_train(const HypothesisSpace& space, const SampleSet& synth_features,
                        const SampleSet& real_features, const TrainConfig& cfg) {
  cfg.validate();
  if (space.arity() != 2) {
    throw ValidationError("domain_train: space must be binary, got arity " +
                          std::to_string(space.arity()));
  }
  if (synth_features.size() == 0 || real_features.size() == 0) {
    throw ValidationError("domain_train: both feature sets must be nonempty");
  }

  if (space.enumerable()) {
    const std::size_t best = argbest_member(space, /*maximize=*/true, [&](const Hypothesis& h) {
      return std::abs(1.0 - 2.0 * est::psi(h, synth_features, real_features));
    });
    const Hypothesis h = space.member(best);
    if (est::psi(h, synth_features, real_features) > 0.5) return h.complemented();
    return h;
  }

  require_dense_for(space, synth_features, "domain_train");
  require_dense_for(space, real_features, "domain_train");
  const ParametricModel model = ParametricModel::for_space(space);

  const auto step_fn = [&](std::span<const double> p, std::span<double> g, Rng& rng) {
    const std::vector<std::size_t> idx_g = draw_batch(rng, synth_features.size(), cfg.batch_size);
    const std::vector<std::size_t> idx_r = draw_batch(rng, real_features.size(), cfg.batch_size);
    balanced_domain_xent(model, p, synth_features.features, idx_g, real_features.features, idx_r,
                         g);
  };
  const auto metric_fn = [&](std::span<const double> p) {
    return est::psi(model.to_hypothesis(p), synth_features, real_features);
  };
  const std::vector<double> params = run_adam(model, cfg, step_fn, metric_fn);
  const Hypothesis h = model.to_hypothesis(params);
  if (est::psi(h, synth_features, real_features) > 0.5) return h.complemented();
  return h;
}

// ------------------------------------------------------- ParametricModel

ParametricModel ParametricModel::linear(std::size_t dims, int arity) {
  if (dims == 0 || arity < 2) throw ValidationError("ParametricModel: bad linear shape");
  ParametricModel m;
  m.dims_ = dims;
  m.arity_ = arity;
  return m;
}

ParametricModel ParametricModel::net(std::size_t dims, std::size_t hidden, int arity) {
  if (dims == 0 || hidden == 0 || arity < 2) throw ValidationError("ParametricModel: bad net shape");
  ParametricModel m;
  m.has_hidden_ = true;
  m.dims_ = dims;
  m.hidden_ = hidden;
  m.arity_ = arity;
  return m;
}

ParametricModel ParametricModel::for_space(const HypothesisSpace& space) {
  switch (space.kind()) {
    case HypothesisSpace::Kind::linear_softmax_family:
      return linear(space.dims(), space.arity());
    case HypothesisSpace::Kind::small_net_family:
      return net(space.dims(), space.hidden(), space.arity());
    default:
      throw ValidationError("ParametricModel: space kind is not parametric");
  }
}

std::size_t ParametricModel::param_count() const {
  const std::size_t a = static_cast<std::size_t>(arity_);
  if (!has_hidden_) return a * dims_ + a;
  return hidden_ * dims_ + hidden_ + a * hidden_ + a;
}

std::vector<double> ParametricModel::init_params(Seed seed) const {
  std::vector<double> p(param_count(), 0.0);
  if (has_hidden_) {
    // Small random weights break hidden-unit symmetry; biases start at zero.
    Rng rng = Rng(seed).split(0);
    const double scale1 = 1.0 / std::sqrt(static_cast<double>(dims_));
    const double scale2 = 1.0 / std::sqrt(static_cast<double>(hidden_));
    std::size_t at = 0;
    for (std::size_t i = 0; i < hidden_ * dims_; ++i) p[at++] = scale1 * rng.next_gaussian();
    at += hidden_;  // b1
    for (std::size_t i = 0; i < static_cast<std::size_t>(arity_) * hidden_; ++i) {
      p[at++] = scale2 * rng.next_gaussian();
    }
  }
  return p;
}

Hypothesis ParametricModel::to_hypothesis(std::span<const double> params) const {
  if (params.size() != param_count()) throw ValidationError("ParametricModel: bad param length");
  const std::size_t a = static_cast<std::size_t>(arity_);
  if (!has_hidden_) {
    std::vector<double> w(params.begin(), params.begin() + static_cast<std::ptrdiff_t>(a * dims_));
    std::vector<double> b(params.end() - static_cast<std::ptrdiff_t>(a), params.end());
    return Hypothesis::linear_softmax(dims_, arity_, std::move(w), std::move(b));
  }
  std::size_t at = 0;
  const auto take = [&](std::size_t count) {
    std::vector<double> out(params.begin() + static_cast<std::ptrdiff_t>(at),
                            params.begin() + static_cast<std::ptrdiff_t>(at + count));
    at += count;
    return out;
  };
  std::vector<double> w1 = take(hidden_ * dims_);
  std::vector<double> b1 = take(hidden_);
  std::vector<double> w2 = take(a * hidden_);
  std::vector<double> b2 = take(a);
  return Hypothesis::one_hidden_net(dims_, hidden_, arity_, std::move(w1), std::move(b1),
                                    std::move(w2), std::move(b2));
}

double ParametricModel::ce_term(std::span<const double> params, std::span<const double> x,
                                Label y, double weight, std::span<double> grad) const {
  if (x.size() != dims_) throw ValidationError("ParametricModel: feature dims mismatch");
  if (y < 0 || y >= arity_) throw ValidationError("ParametricModel: label out of range");
  const std::size_t a = static_cast<std::size_t>(arity_);

  if (!has_hidden_) {
    const double* w = params.data();
    const double* b = params.data() + a * dims_;
    std::vector<double> z(a);
    for (std::size_t c = 0; c < a; ++c) {
      double s = b[c];
      const double* wc = w + c * dims_;
      for (std::size_t j = 0; j < dims_; ++j) s += wc[j] * x[j];
      z[c] = s;
    }
    const double zmax = *std::max_element(z.begin(), z.end());
    double denom = 0.0;
    for (double& s : z) {
      s = std::exp(s - zmax);
      denom += s;
    }
    const double loss = -std::log(z[static_cast<std::size_t>(y)] / denom);
    double* gw = grad.data();
    double* gb = grad.data() + a * dims_;
    for (std::size_t c = 0; c < a; ++c) {
      const double gz = weight * (z[c] / denom - (static_cast<Label>(c) == y ? 1.0 : 0.0));
      gb[c] += gz;
      double* gwc = gw + c * dims_;
      for (std::size_t j = 0; j < dims_; ++j) gwc[j] += gz * x[j];
    }
    return weight * loss;
  }

  // One hidden tanh layer.
  const double* w1 = params.data();
  const double* b1 = w1 + hidden_ * dims_;
  const double* w2 = b1 + hidden_;
  const double* b2 = w2 + a * hidden_;
  std::vector<double> hid(hidden_);
  for (std::size_t k = 0; k < hidden_; ++k) {
    double s = b1[k];
    const double* row = w1 + k * dims_;
    for (std::size_t j = 0; j < dims_; ++j) s += row[j] * x[j];
    hid[k] = std::tanh(s);
  }
  std::vector<double> z(a);
  for (std::size_t c = 0; c < a; ++c) {
    double s = b2[c];
    const double* row = w2 + c * hidden_;
    for (std::size_t k = 0; k < hidden_; ++k) s += row[k] * hid[k];
    z[c] = s;
  }
  const double zmax = *std::max_element(z.begin(), z.end());
  double denom = 0.0;
  for (double& s : z) {
    s = std::exp(s - zmax);
    denom += s;
  }
  const double loss = -std::log(z[static_cast<std::size_t>(y)] / denom);

  double* g_w1 = grad.data();
  double* g_b1 = g_w1 + hidden_ * dims_;
  double* g_w2 = g_b1 + hidden_;
  double* g_b2 = g_w2 + a * hidden_;
  std::vector<double> d_hid(hidden_, 0.0);
  for (std::size_t c = 0; c < a; ++c) {
    const double gz = weight * (z[c] / denom - (static_cast<Label>(c) == y ? 1.0 : 0.0));
    g_b2[c] += gz;
    double* g_row = g_w2 + c * hidden_;
    const double* row = w2 + c * hidden_;
    for (std::size_t k = 0; k < hidden_; ++k) {
      g_row[k] += gz * hid[k];
      d_hid[k] += gz * row[k];
    }
  }
  for (std::size_t k = 0; k < hidden_; ++k) {
    const double du = d_hid[k] * (1.0 - hid[k] * hid[k]);
    g_b1[k] += du;
    double* g_row = g_w1 + k * dims_;
    for (std::size_t j = 0; j < dims_; ++j) g_row[j] += du * x[j];
  }
  return weight * loss;
}

double softmax_xent(const ParametricModel& model, std::span<const double> params,
                    const FeatureBlock& features, std::span<const std::size_t> indices,
                    const std::vector<Label>& labels, std::span<double> grad) {
  if (indices.empty()) throw ValidationError("softmax_xent: empty index set");
  std::fill(grad.begin(), grad.end(), 0.0);
  const double w = 1.0 / static_cast<double>(indices.size());
  double loss = 0.0;
  for (std::size_t i : indices) loss += model.ce_term(params, features.row(i), labels[i], w, grad);
  return loss;
}

double balanced_domain_xent(const ParametricModel& model, std::span<const double> params,
                            const FeatureBlock& synth, std::span<const std::size_t> synth_idx,
                            const FeatureBlock& real, std::span<const std::size_t> real_idx,
                            std::span<double> grad) {
  if (model.arity() != 2) throw ValidationError("balanced_domain_xent: model must be binary");
  if (synth_idx.empty() || real_idx.empty()) {
    throw ValidationError("balanced_domain_xent: empty index set");
  }
  std::fill(grad.begin(), grad.end(), 0.0);
  const double w_g = 0.5 / static_cast<double>(synth_idx.size());
  const double w_r = 0.5 / static_cast<double>(real_idx.size());
  double loss = 0.0;
  for (std::size_t i : synth_idx) loss += model.ce_term(params, synth.row(i), 1, w_g, grad);
  for (std::size_t i : real_idx) loss += model.ce_term(params, real.row(i), 0, w_r, grad);
  return loss;
}

}  // namespace g2r::train
