#include "g2r/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace g2r::gen {

const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::gaussian_pair:
      return "gaussian-pair";
    case ScenarioKind::discrete_instance:
      return "discrete-instance";
    case ScenarioKind::overestimation:
      return "overestimation";
  }
  return "?";
}

const char* to_string(Knob k) { return k == Knob::gamma ? "gamma" : "rho"; }

void ScenarioConfig::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ValidationError("ScenarioConfig: gamma outside [0,1]");
  if (!(rho >= 0.0 && rho <= 1.0)) throw ValidationError("ScenarioConfig: rho outside [0,1]");
  if (n == 0 || m == 0) throw ValidationError("ScenarioConfig: n and m must be >= 1");
  if (dims == 0) throw ValidationError("ScenarioConfig: dims must be >= 1");
  if (arity < 2) throw ValidationError("ScenarioConfig: arity must be >= 2");
}

namespace {

constexpr double kMeanSeparation = 4.0;  // pairwise distance between component means
constexpr double kShiftLength = 2.0;     // synthetic mean displacement at gamma = 1
constexpr Seed kLayoutKey = 0x1a2b3c4d5e6f7788ull;
constexpr std::size_t kDiscreteDomainGuard = 4096;
constexpr std::size_t kGeneratedSpaceSize = 64;

// Nudges the largest entry so the masses sum to 1 within ProbTable tolerance.
std::vector<double> normalized(std::vector<double> mass) {
  double sum = 0.0;
  for (double v : mass) sum += v;
  auto largest = std::max_element(mass.begin(), mass.end());
  *largest += 1.0 - sum;
  return mass;
}

std::size_t balanced_count(std::size_t total, int arity, int label) {
  const std::size_t base = total / static_cast<std::size_t>(arity);
  const std::size_t rem = total % static_cast<std::size_t>(arity);
  return base + (static_cast<std::size_t>(label) < rem ? 1 : 0);
}

}  // namespace

std::vector<double> component_means(std::size_t dims, int arity) {
  const std::size_t a = static_cast<std::size_t>(arity);
  std::vector<double> pts(a * dims, 0.0);
  if (a <= 2 * dims) {
    // +e_0 .. +e_{dims-1}, then -e_0 .. ; nearest pair sits sqrt(2) apart.
    for (std::size_t c = 0; c < a; ++c) {
      pts[c * dims + (c % dims)] = c < dims ? 1.0 : -1.0;
    }
  } else {
    Rng rng(kLayoutKey);
    for (std::size_t c = 0; c < a; ++c) {
      Rng r = rng.split(c);
      double norm2 = 0.0;
      for (std::size_t j = 0; j < dims; ++j) {
        pts[c * dims + j] = r.next_gaussian();
        norm2 += pts[c * dims + j] * pts[c * dims + j];
      }
      const double inv = 1.0 / std::sqrt(norm2);
      for (std::size_t j = 0; j < dims; ++j) pts[c * dims + j] *= inv;
    }
  }
  double min_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = i + 1; j < a; ++j) {
      double d2 = 0.0;
      for (std::size_t k = 0; k < dims; ++k) {
        const double d = pts[i * dims + k] - pts[j * dims + k];
        d2 += d * d;
      }
      min_dist = std::min(min_dist, std::sqrt(d2));
    }
  }
  const double scale = kMeanSeparation / min_dist;
  for (double& v : pts) v *= scale;
  return pts;
}

std::vector<double> component_shift_dirs(std::size_t dims, int arity) {
  const std::size_t a = static_cast<std::size_t>(arity);
  std::vector<double> dirs(a * dims);
  Rng rng(kLayoutKey ^ 0xffull);
  for (std::size_t c = 0; c < a; ++c) {
    Rng r = rng.split(c);
    double norm2 = 0.0;
    for (std::size_t j = 0; j < dims; ++j) {
      dirs[c * dims + j] = r.next_gaussian();
      norm2 += dirs[c * dims + j] * dirs[c * dims + j];
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t j = 0; j < dims; ++j) dirs[c * dims + j] *= inv;
  }
  return dirs;
}

DatasetPair make_gaussian_pair(const ScenarioConfig& cfg) {
  cfg.validate();
  if (cfg.kind != ScenarioKind::gaussian_pair) {
    throw ValidationError("make_gaussian_pair: config kind mismatch");
  }
  const std::size_t dims = cfg.dims;
  const std::vector<double> means = component_means(dims, cfg.arity);
  const std::vector<double> dirs = component_shift_dirs(dims, cfg.arity);
  const double spread = std::sqrt(1.0 + cfg.gamma);

  Rng root(cfg.seed);

  const auto emit_side = [&](std::size_t count, bool synthetic, Rng rng, Rng label_rng,
                             Origin origin, Split split) {
    std::vector<double> data;
    data.reserve(count * dims);
    std::vector<Label> labels;
    labels.reserve(count);
    for (int c = 0; c < cfg.arity; ++c) {
      const std::size_t n_c = balanced_count(count, cfg.arity, c);
      for (std::size_t i = 0; i < n_c; ++i) {
        for (std::size_t j = 0; j < dims; ++j) {
          double x = means[static_cast<std::size_t>(c) * dims + j];
          if (synthetic) {
            x += cfg.gamma * kShiftLength * dirs[static_cast<std::size_t>(c) * dims + j];
            x += spread * rng.next_gaussian();
          } else {
            x += rng.next_gaussian();
          }
          data.push_back(x);
        }
        Label y = c;
        if (synthetic) {
          // Resample to a uniformly chosen other label with probability rho.
          const double u = label_rng.next_unit();
          if (u < cfg.rho) {
            const Label other = static_cast<Label>(label_rng.next_below(
                static_cast<std::uint64_t>(cfg.arity - 1)));
            y = other >= c ? other + 1 : other;
          }
        }
        labels.push_back(y);
      }
    }
    SampleSet out;
    out.features = FeatureBlock::dense(dims, std::move(data));
    out.labels = std::move(labels);
    out.origin = origin;
    out.split = split;
    return out;
  };

  DatasetPair pair;
  pair.n = cfg.n;
  pair.m = cfg.m;
  pair.real_train = emit_side(cfg.n, false, root.split(1), root.split(11), Origin::real, Split::train);
  pair.real_test = emit_side(cfg.m, false, root.split(2), root.split(12), Origin::real, Split::test);
  pair.synth_train =
      emit_side(cfg.n, true, root.split(3), root.split(13), Origin::synthetic, Split::train);
  pair.synth_test =
      emit_side(cfg.m, true, root.split(4), root.split(14), Origin::synthetic, Split::test);
  pair.validate();
  return pair;
}

DiscreteScenario make_discrete_instance(const ScenarioConfig& cfg) {
  cfg.validate();
  if (cfg.kind != ScenarioKind::discrete_instance) {
    throw ValidationError("make_discrete_instance: config kind mismatch");
  }
  const std::size_t k = cfg.dims;
  if (k < 2) throw ValidationError("make_discrete_instance: domain needs at least 2 points");
  if (k > kDiscreteDomainGuard) {
    throw CapacityError("make_discrete_instance: domain size " + std::to_string(k) +
                        " exceeds guard " + std::to_string(kDiscreteDomainGuard));
  }

  Rng root(cfg.seed);

  const auto random_masses = [&](Rng rng) {
    std::vector<double> mass(k);
    double sum = 0.0;
    for (double& v : mass) {
      v = -std::log(1.0 - rng.next_unit());
      sum += v;
    }
    for (double& v : mass) v /= sum;
    return normalized(std::move(mass));
  };

  const std::vector<double> mass_r = random_masses(root.split(1));
  std::vector<double> mass_g;
  if (cfg.gamma == 0.0) {
    mass_g = mass_r;
  } else {
    const std::vector<double> other = random_masses(root.split(2));
    mass_g.resize(k);
    for (std::size_t x = 0; x < k; ++x) {
      mass_g[x] = (1.0 - cfg.gamma) * mass_r[x] + cfg.gamma * other[x];
    }
    mass_g = normalized(std::move(mass_g));
  }

  Rng label_rng = root.split(3);
  std::vector<Label> table_r(k);
  for (Label& y : table_r) {
    y = static_cast<Label>(label_rng.next_below(static_cast<std::uint64_t>(cfg.arity)));
  }
  Rng flip_rng = root.split(4);
  std::vector<Label> table_g = table_r;
  for (Label& y : table_g) {
    const double u = flip_rng.next_unit();
    if (u < cfg.rho) {
      const Label other =
          static_cast<Label>(flip_rng.next_below(static_cast<std::uint64_t>(cfg.arity - 1)));
      y = other >= y ? other + 1 : other;
    }
  }

  Rng space_rng = root.split(5);
  std::vector<Hypothesis> members;
  members.reserve(kGeneratedSpaceSize);
  members.push_back(Hypothesis::lookup(cfg.arity, std::vector<Label>(k, 0)));
  while (members.size() < kGeneratedSpaceSize) {
    std::vector<Label> table(k);
    for (Label& y : table) {
      y = static_cast<Label>(space_rng.next_below(static_cast<std::uint64_t>(cfg.arity)));
    }
    members.push_back(Hypothesis::lookup(cfg.arity, std::move(table)));
  }

  exact::DiscreteInstance inst{ProbTable(mass_r), ProbTable(mass_g),
                               LabelingFunction::table(cfg.arity, table_r),
                               LabelingFunction::table(cfg.arity, table_g),
                               HypothesisSpace::finite(std::move(members))};
  inst.validate();

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

  return DiscreteScenario{std::move(inst), std::move(data)};
}

exact::DiscreteInstance make_overestimation_instance(Seed seed) {
  // Power-of-two domains keep the per-point mass 2/K dyadic, so every exact
  // sum below (including the full half-support mass) is free of rounding.
  const std::size_t k = std::size_t{8} << (seed % 3);  // 8, 16, or 32
  const std::size_t half = k / 2;

  std::vector<double> mass_r(k, 0.0);
  std::vector<double> mass_g(k, 0.0);
  for (std::size_t x = 0; x < half; ++x) {
    mass_r[x] = 1.0 / static_cast<double>(half);
    mass_g[x + half] = 1.0 / static_cast<double>(half);
  }
  mass_r = normalized(std::move(mass_r));
  mass_g = normalized(std::move(mass_g));

  // Identical labeling pattern on both halves: the lower quarter of each half
  // is class 0, the upper quarter class 1.
  std::vector<Label> table(k);
  for (std::size_t x = 0; x < k; ++x) table[x] = (x % half) < half / 2 ? 0 : 1;

  exact::DiscreteInstance inst{ProbTable(std::move(mass_r)), ProbTable(std::move(mass_g)),
                               LabelingFunction::table(2, table), LabelingFunction::table(2, table),
                               HypothesisSpace::thresholds_1d(k)};
  inst.validate();
  return inst;
}

std::vector<ScenarioConfig> sweep(const ScenarioConfig& base, Knob knob,
                                  const std::vector<double>& values,
                                  const std::vector<Seed>& seeds) {
  if (values.empty()) throw ValidationError("sweep: values must be nonempty");
  if (seeds.empty()) throw ValidationError("sweep: seeds must be nonempty");
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ValidationError("sweep: knob value " + std::to_string(v) + " outside [0,1]");
    }
  }
  std::vector<ScenarioConfig> out;
  out.reserve(values.size() * seeds.size());
  for (double v : values) {
    for (Seed s : seeds) {
      ScenarioConfig cfg = base;
      (knob == Knob::gamma ? cfg.gamma : cfg.rho) = v;
      cfg.seed = s;
      cfg.validate();
      out.push_back(cfg);
    }
  }
  return out;
}

}  // namespace g2r::gen
