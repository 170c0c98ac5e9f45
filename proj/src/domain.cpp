#include "g2r/domain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace g2r {

// ---------------------------------------------------------------- ProbTable

ProbTable::ProbTable(std::vector<double> mass) : mass_(std::move(mass)) {
  if (mass_.empty()) throw ValidationError("ProbTable: empty mass vector");
  double sum = 0.0;
  for (std::size_t i = 0; i < mass_.size(); ++i) {
    if (!(mass_[i] >= 0.0)) {
      throw ValidationError("ProbTable: negative or NaN mass at point " + std::to_string(i));
    }
    sum += mass_[i];
  }
  if (std::abs(sum - 1.0) > kNormalizationTolerance) {
    throw ValidationError("ProbTable: masses sum to " + std::to_string(sum) + ", expected 1");
  }
}

// ------------------------------------------------------------- FeatureBlock

FeatureBlock FeatureBlock::discrete(std::vector<PointId> ids) {
  FeatureBlock fb;
  fb.ids_ = std::move(ids);
  return fb;
}

FeatureBlock FeatureBlock::dense(std::size_t dims, std::vector<double> data) {
  if (dims == 0) throw ValidationError("FeatureBlock: dense form needs dims >= 1");
  if (data.size() % dims != 0) {
    throw ValidationError("FeatureBlock: data length not a multiple of dims");
  }
  FeatureBlock fb;
  fb.dims_ = dims;
  fb.data_ = std::move(data);
  return fb;
}

PointId FeatureBlock::id(std::size_t i) const {
  if (!discrete_form()) throw ValidationError("FeatureBlock: id() on dense features");
  return ids_.at(i);
}

std::span<const double> FeatureBlock::row(std::size_t i) const {
  if (discrete_form()) throw ValidationError("FeatureBlock: row() on discrete features");
  return {data_.data() + i * dims_, dims_};
}

const char* to_string(Origin o) { return o == Origin::real ? "real" : "synthetic"; }
const char* to_string(Split s) { return s == Split::train ? "train" : "test"; }

// ---------------------------------------------------------------- SampleSet

void SampleSet::validate() const {
  if (labels && labels->size() != features.size()) {
    throw ValidationError("SampleSet: label count " + std::to_string(labels->size()) +
                          " does not match feature count " + std::to_string(features.size()));
  }
}

const std::vector<Label>& SampleSet::require_labels() const {
  if (!labels) throw ValidationError("SampleSet: labels required but absent");
  validate();
  return *labels;
}

// --------------------------------------------------------- LabelingFunction

LabelingFunction LabelingFunction::table(int arity, std::vector<Label> values) {
  if (arity < 2) throw ValidationError("LabelingFunction: arity must be >= 2");
  for (Label y : values) {
    if (y < 0 || y >= arity) throw ValidationError("LabelingFunction: table label out of range");
  }
  LabelingFunction f;
  f.arity_ = arity;
  f.values_ = std::move(values);
  return f;
}

LabelingFunction LabelingFunction::rule(int arity, Rule fn) {
  if (arity < 2) throw ValidationError("LabelingFunction: arity must be >= 2");
  if (!fn) throw ValidationError("LabelingFunction: null rule");
  LabelingFunction f;
  f.arity_ = arity;
  f.rule_ = std::move(fn);
  return f;
}

const std::vector<Label>& LabelingFunction::values() const {
  if (!values_) throw ValidationError("LabelingFunction: values() on rule form");
  return *values_;
}

Label LabelingFunction::at(PointId id) const {
  if (!table_form()) throw ValidationError("LabelingFunction: discrete point given to rule form");
  if (id >= values_->size()) {
    throw ValidationError("LabelingFunction: point " + std::to_string(id) + " outside domain of size " +
                          std::to_string(values_->size()));
  }
  return (*values_)[id];
}

Label LabelingFunction::at(std::span<const double> x) const {
  if (table_form()) throw ValidationError("LabelingFunction: dense vector given to table form");
  const Label y = rule_(x);
  if (y < 0 || y >= arity_) {
    throw ValidationError("LabelingFunction: rule produced label " + std::to_string(y) +
                          " outside [0," + std::to_string(arity_) + ")");
  }
  return y;
}

// --------------------------------------------------------------- Hypothesis

Hypothesis Hypothesis::lookup(int arity, std::vector<Label> labels) {
  if (arity < 2) throw ValidationError("Hypothesis: arity must be >= 2");
  for (Label y : labels) {
    if (y < 0 || y >= arity) throw ValidationError("Hypothesis: lookup label out of range");
  }
  return Hypothesis(arity, LookupTableH{std::move(labels)});
}

Hypothesis Hypothesis::threshold(std::size_t coord, double cut, Label below, Label above,
                                 int arity) {
  if (arity < 2) throw ValidationError("Hypothesis: arity must be >= 2");
  if (below < 0 || below >= arity || above < 0 || above >= arity) {
    throw ValidationError("Hypothesis: threshold labels out of range");
  }
  return Hypothesis(arity, ThresholdH{coord, cut, below, above});
}

Hypothesis Hypothesis::constant(int arity, Label value) {
  return threshold(0, -std::numeric_limits<double>::infinity(), value, value, arity);
}

Hypothesis Hypothesis::linear_softmax(std::size_t dims, int arity, std::vector<double> weights,
                                      std::vector<double> bias) {
  if (arity < 2) throw ValidationError("Hypothesis: arity must be >= 2");
  if (weights.size() != dims * static_cast<std::size_t>(arity) ||
      bias.size() != static_cast<std::size_t>(arity)) {
    throw ValidationError("Hypothesis: linear-softmax parameter shape mismatch");
  }
  return Hypothesis(arity, LinearSoftmaxH{dims, arity, std::move(weights), std::move(bias)});
}

Hypothesis Hypothesis::one_hidden_net(std::size_t dims, std::size_t hidden, int arity,
                                      std::vector<double> w1, std::vector<double> b1,
                                      std::vector<double> w2, std::vector<double> b2) {
  if (arity < 2) throw ValidationError("Hypothesis: arity must be >= 2");
  if (w1.size() != hidden * dims || b1.size() != hidden ||
      w2.size() != static_cast<std::size_t>(arity) * hidden ||
      b2.size() != static_cast<std::size_t>(arity)) {
    throw ValidationError("Hypothesis: net parameter shape mismatch");
  }
  return Hypothesis(arity,
                    OneHiddenNetH{dims, hidden, arity, std::move(w1), std::move(b1),
                                  std::move(w2), std::move(b2)});
}

Hypothesis Hypothesis::complemented() const {
  if (arity_ != 2) throw ValidationError("Hypothesis: complement defined for binary arity only");
  Hypothesis h = *this;
  h.negate_ = !negate_;
  return h;
}

namespace {

template <typename ScoreFn>
Label argmax_label(int arity, ScoreFn&& score) {
  Label best = 0;
  double best_score = score(0);
  for (Label c = 1; c < arity; ++c) {
    const double s = score(c);
    if (s > best_score) {
      best_score = s;
      best = c;
    }
  }
  return best;
}

}  // namespace

Label Hypothesis::raw_id(PointId id) const {
  if (const auto* t = std::get_if<LookupTableH>(&form_)) {
    if (id >= t->labels.size()) {
      throw ValidationError("Hypothesis: point " + std::to_string(id) +
                            " outside lookup table of size " + std::to_string(t->labels.size()));
    }
    return t->labels[id];
  }
  if (const auto* t = std::get_if<ThresholdH>(&form_)) {
    return static_cast<double>(id) >= t->cut ? t->above : t->below;
  }
  throw ValidationError("Hypothesis: parametric form cannot score discrete point ids");
}

Label Hypothesis::raw_row(std::span<const double> x) const {
  if (const auto* t = std::get_if<ThresholdH>(&form_)) {
    if (t->coord >= x.size()) throw ValidationError("Hypothesis: threshold coordinate out of range");
    return x[t->coord] >= t->cut ? t->above : t->below;
  }
  if (const auto* l = std::get_if<LinearSoftmaxH>(&form_)) {
    if (x.size() != l->dims) {
      throw ValidationError("Hypothesis: feature dimension " + std::to_string(x.size()) +
                            " does not match model dims " + std::to_string(l->dims));
    }
    return argmax_label(l->arity, [&](Label c) {
      const double* w = l->weights.data() + static_cast<std::size_t>(c) * l->dims;
      double z = l->bias[static_cast<std::size_t>(c)];
      for (std::size_t j = 0; j < l->dims; ++j) z += w[j] * x[j];
      return z;
    });
  }
  if (const auto* n = std::get_if<OneHiddenNetH>(&form_)) {
    if (x.size() != n->dims) {
      throw ValidationError("Hypothesis: feature dimension " + std::to_string(x.size()) +
                            " does not match model dims " + std::to_string(n->dims));
    }
    std::vector<double> z(n->hidden);
    for (std::size_t k = 0; k < n->hidden; ++k) {
      const double* w = n->w1.data() + k * n->dims;
      double a = n->b1[k];
      for (std::size_t j = 0; j < n->dims; ++j) a += w[j] * x[j];
      z[k] = std::tanh(a);
    }
    return argmax_label(n->arity, [&](Label c) {
      const double* w = n->w2.data() + static_cast<std::size_t>(c) * n->hidden;
      double s = n->b2[static_cast<std::size_t>(c)];
      for (std::size_t k = 0; k < n->hidden; ++k) s += w[k] * z[k];
      return s;
    });
  }
  throw ValidationError("Hypothesis: lookup-table form cannot score dense vectors");
}

Label Hypothesis::predict_id(PointId id) const { return finish(raw_id(id)); }

Label Hypothesis::predict_row(std::span<const double> x) const { return finish(raw_row(x)); }

Label Hypothesis::predict_at(const FeatureBlock& fb, std::size_t i) const {
  return fb.discrete_form() ? predict_id(fb.id(i)) : predict_row(fb.row(i));
}

std::vector<Label> Hypothesis::predict(const FeatureBlock& fb) const {
  std::vector<Label> out(fb.size());
  for (std::size_t i = 0; i < fb.size(); ++i) out[i] = predict_at(fb, i);
  return out;
}

// --------------------------------------------------------- HypothesisSpace

HypothesisSpace HypothesisSpace::finite(std::vector<Hypothesis> members) {
  if (members.empty()) throw ValidationError("HypothesisSpace: empty finite enumeration");
  const int arity = members.front().arity();
  for (const Hypothesis& h : members) {
    if (h.arity() != arity) throw ValidationError("HypothesisSpace: mixed arities in enumeration");
  }
  HypothesisSpace s;
  s.kind_ = Kind::finite;
  s.arity_ = arity;
  // VC of a finite class is at most log2|H|.
  s.vc_dimension_ = std::max(1, static_cast<int>(std::bit_width(members.size()) - 1));
  s.members_ = std::move(members);
  return s;
}

HypothesisSpace HypothesisSpace::thresholds_1d(std::size_t domain_size) {
  if (domain_size == 0) throw ValidationError("HypothesisSpace: thresholds need domain_size >= 1");
  HypothesisSpace s;
  s.kind_ = Kind::thresholds_1d;
  s.arity_ = 2;
  s.vc_dimension_ = 1;
  s.domain_size_ = domain_size;
  return s;
}

HypothesisSpace HypothesisSpace::stumps_kd(std::size_t dims, std::vector<double> cuts) {
  if (dims == 0 || cuts.empty()) throw ValidationError("HypothesisSpace: stumps need dims and cuts");
  HypothesisSpace s;
  s.kind_ = Kind::stumps_kd;
  s.arity_ = 2;
  s.vc_dimension_ = std::max(2, static_cast<int>(std::bit_width(dims) - 1) + 2);
  s.dims_ = dims;
  s.cuts_ = std::move(cuts);
  return s;
}

HypothesisSpace HypothesisSpace::linear_softmax_family(std::size_t dims, int arity) {
  if (dims == 0 || arity < 2) throw ValidationError("HypothesisSpace: bad linear family shape");
  HypothesisSpace s;
  s.kind_ = Kind::linear_softmax_family;
  s.arity_ = arity;
  s.vc_dimension_ = static_cast<int>(dims) + 1;
  s.dims_ = dims;
  return s;
}

HypothesisSpace HypothesisSpace::small_net_family(std::size_t dims, std::size_t hidden, int arity) {
  if (dims == 0 || hidden == 0 || arity < 2) {
    throw ValidationError("HypothesisSpace: bad net family shape");
  }
  HypothesisSpace s;
  s.kind_ = Kind::small_net_family;
  s.arity_ = arity;
  const std::size_t params = hidden * dims + hidden + static_cast<std::size_t>(arity) * hidden +
                             static_cast<std::size_t>(arity);
  s.vc_dimension_ = static_cast<int>(params);
  s.dims_ = dims;
  s.hidden_ = hidden;
  return s;
}

bool HypothesisSpace::enumerable() const {
  return kind_ == Kind::finite || kind_ == Kind::thresholds_1d || kind_ == Kind::stumps_kd;
}

std::size_t HypothesisSpace::member_count() const {
  switch (kind_) {
    case Kind::finite:
      return members_.size();
    case Kind::thresholds_1d:
      return domain_size_ + 1;  // t = domain_size is the constant-0 hypothesis
    case Kind::stumps_kd:
      return dims_ * cuts_.size() * 2;
    default:
      throw ValidationError("HypothesisSpace: parametric family is not enumerable");
  }
}

Hypothesis HypothesisSpace::member(std::size_t i) const {
  if (i >= member_count()) throw ValidationError("HypothesisSpace: member index out of range");
  switch (kind_) {
    case Kind::finite:
      return members_[i];
    case Kind::thresholds_1d:
      return Hypothesis::threshold(0, static_cast<double>(i), 0, 1);
    case Kind::stumps_kd: {
      const std::size_t per_coord = cuts_.size() * 2;
      const std::size_t coord = i / per_coord;
      const std::size_t rem = i % per_coord;
      const double cut = cuts_[rem / 2];
      const bool flipped = (rem % 2) == 1;
      return flipped ? Hypothesis::threshold(coord, cut, 1, 0)
                     : Hypothesis::threshold(coord, cut, 0, 1);
    }
    default:
      throw ValidationError("HypothesisSpace: parametric family is not enumerable");
  }
}

// -------------------------------------------------------------- DatasetPair

void DatasetPair::validate() const {
  const SampleSet* sets[] = {&real_train, &real_test, &synth_train, &synth_test};
  for (const SampleSet* s : sets) {
    s->validate();
    s->require_labels();
  }
  if (real_train.size() != n || synth_train.size() != n) {
    throw ValidationError("DatasetPair: train sizes do not match n");
  }
  if (real_test.size() != m || synth_test.size() != m) {
    throw ValidationError("DatasetPair: test sizes do not match m");
  }
}

// --------------------------------------------------------------- Operations

SampleSet sample(const ProbTable& dist, std::size_t count, Seed seed, Origin origin, Split split) {
  std::vector<double> cumulative(dist.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    acc += dist.mass(i);
    cumulative[i] = acc;
  }
  const double total = acc;

  std::vector<PointId> ids(count);
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = rng.next_unit() * total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    ids[i] = static_cast<PointId>(std::min<std::size_t>(
        static_cast<std::size_t>(it - cumulative.begin()), dist.size() - 1));
  }
  SampleSet out;
  out.features = FeatureBlock::discrete(std::move(ids));
  out.origin = origin;
  out.split = split;
  return out;
}

SampleSet apply_labeling(const LabelingFunction& f, const SampleSet& features) {
  features.validate();
  std::vector<Label> labels(features.size());
  const FeatureBlock& fb = features.features;
  for (std::size_t i = 0; i < fb.size(); ++i) {
    labels[i] = fb.discrete_form() ? f.at(fb.id(i)) : f.at(fb.row(i));
  }
  SampleSet out = features;
  out.labels = std::move(labels);
  return out;
}

std::vector<Label> evaluate(const Hypothesis& h, const SampleSet& features) {
  return h.predict(features.features);
}

}  // namespace g2r
