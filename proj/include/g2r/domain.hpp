#pragma once

// Shared vocabulary for the bound toolkit: distributions over finite point
// sets, labeling functions, hypotheses, hypothesis spaces, and sampled
// datasets. All values are immutable after construction and cheap to copy;
// every stochastic operation takes an explicit seed.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "g2r/error.hpp"
#include "g2r/rng.hpp"

namespace g2r {

using Label = int;
using PointId = std::uint32_t;

// Probability table over K discrete points. Masses must be non-negative and
// sum to 1 within 1e-12.
class ProbTable {
 public:
  static constexpr double kNormalizationTolerance = 1e-12;

  explicit ProbTable(std::vector<double> mass);

  std::size_t size() const { return mass_.size(); }
  double mass(std::size_t i) const { return mass_.at(i); }
  const std::vector<double>& masses() const { return mass_; }

  bool operator==(const ProbTable&) const = default;

 private:
  std::vector<double> mass_;
};

// Feature storage: either discrete point ids or dense row-major vectors.
class FeatureBlock {
 public:
  FeatureBlock() = default;

  static FeatureBlock discrete(std::vector<PointId> ids);
  static FeatureBlock dense(std::size_t dims, std::vector<double> data);

  bool discrete_form() const { return dims_ == 0; }
  std::size_t size() const { return discrete_form() ? ids_.size() : data_.size() / dims_; }
  std::size_t dims() const { return dims_; }

  PointId id(std::size_t i) const;
  std::span<const double> row(std::size_t i) const;

  const std::vector<PointId>& ids() const { return ids_; }
  const std::vector<double>& dense_data() const { return data_; }

  bool operator==(const FeatureBlock&) const = default;

 private:
  std::vector<PointId> ids_;
  std::vector<double> data_;
  std::size_t dims_ = 0;
};

enum class Origin { real, synthetic };
enum class Split { train, test };

const char* to_string(Origin o);
const char* to_string(Split s);

// A sampled feature set, optionally labeled.
struct SampleSet {
  FeatureBlock features;
  std::optional<std::vector<Label>> labels;
  Origin origin = Origin::real;
  Split split = Split::train;

  std::size_t size() const { return features.size(); }
  void validate() const;
  const std::vector<Label>& require_labels() const;
};

// Deterministic map from features to labels; table form over discrete points
// or a rule over dense vectors.
class LabelingFunction {
 public:
  using Rule = std::function<Label(std::span<const double>)>;

  static LabelingFunction table(int arity, std::vector<Label> values);
  static LabelingFunction rule(int arity, Rule fn);

  int arity() const { return arity_; }
  bool table_form() const { return values_.has_value(); }
  const std::vector<Label>& values() const;

  Label at(PointId id) const;
  Label at(std::span<const double> x) const;

 private:
  LabelingFunction() = default;
  int arity_ = 2;
  std::optional<std::vector<Label>> values_;
  Rule rule_;
};

// ---------------------------------------------------------------------------
// Hypotheses

struct LookupTableH {
  std::vector<Label> labels;
  bool operator==(const LookupTableH&) const = default;
};

// Dense input: fires on x[coord] >= cut. Discrete input: fires on id >= cut
// (the point id is the scalar; coord is ignored).
struct ThresholdH {
  std::size_t coord = 0;
  double cut = 0.0;
  Label below = 0;
  Label above = 1;
  bool operator==(const ThresholdH&) const = default;
};

// argmax_c (weights[c] . x + bias[c]); ties break to the lowest label.
struct LinearSoftmaxH {
  std::size_t dims = 0;
  int arity = 2;
  std::vector<double> weights;  // arity x dims, row-major
  std::vector<double> bias;     // arity
  bool operator==(const LinearSoftmaxH&) const = default;
};

// One tanh hidden layer, then argmax over linear readout.
struct OneHiddenNetH {
  std::size_t dims = 0;
  std::size_t hidden = 0;
  int arity = 2;
  std::vector<double> w1;  // hidden x dims
  std::vector<double> b1;  // hidden
  std::vector<double> w2;  // arity x hidden
  std::vector<double> b2;  // arity
  bool operator==(const OneHiddenNetH&) const = default;
};

class Hypothesis {
 public:
  using Form = std::variant<LookupTableH, ThresholdH, LinearSoftmaxH, OneHiddenNetH>;

  // Inert placeholder (empty lookup table); predicting with it throws.
  Hypothesis() = default;

  static Hypothesis lookup(int arity, std::vector<Label> labels);
  static Hypothesis threshold(std::size_t coord, double cut, Label below, Label above,
                              int arity = 2);
  static Hypothesis constant(int arity, Label value);
  static Hypothesis linear_softmax(std::size_t dims, int arity, std::vector<double> weights,
                                   std::vector<double> bias);
  static Hypothesis one_hidden_net(std::size_t dims, std::size_t hidden, int arity,
                                   std::vector<double> w1, std::vector<double> b1,
                                   std::vector<double> w2, std::vector<double> b2);

  int arity() const { return arity_; }
  bool negated() const { return negate_; }
  const Form& form() const { return form_; }

  // Output complement; binary hypotheses only.
  Hypothesis complemented() const;

  Label predict_id(PointId id) const;
  Label predict_row(std::span<const double> x) const;
  Label predict_at(const FeatureBlock& fb, std::size_t i) const;
  std::vector<Label> predict(const FeatureBlock& fb) const;

  bool operator==(const Hypothesis&) const = default;

 private:
  Hypothesis(int arity, Form form) : arity_(arity), form_(std::move(form)) {}
  Label raw_id(PointId id) const;
  Label raw_row(std::span<const double> x) const;
  Label finish(Label raw) const { return negate_ ? 1 - raw : raw; }

  int arity_ = 2;
  bool negate_ = false;
  Form form_;
};

// ---------------------------------------------------------------------------
// Hypothesis spaces

class HypothesisSpace {
 public:
  enum class Kind { finite, thresholds_1d, stumps_kd, linear_softmax_family, small_net_family };

  static HypothesisSpace finite(std::vector<Hypothesis> members);
  static HypothesisSpace thresholds_1d(std::size_t domain_size);
  static HypothesisSpace stumps_kd(std::size_t dims, std::vector<double> cuts);
  static HypothesisSpace linear_softmax_family(std::size_t dims, int arity);
  static HypothesisSpace small_net_family(std::size_t dims, std::size_t hidden, int arity);

  Kind kind() const { return kind_; }
  int arity() const { return arity_; }
  int vc_dimension() const { return vc_dimension_; }

  bool enumerable() const;
  std::size_t member_count() const;
  Hypothesis member(std::size_t i) const;

  std::size_t dims() const { return dims_; }
  std::size_t hidden() const { return hidden_; }
  std::size_t domain_size() const { return domain_size_; }
  const std::vector<double>& cuts() const { return cuts_; }
  const std::vector<Hypothesis>& members() const { return members_; }

 private:
  HypothesisSpace() = default;

  Kind kind_ = Kind::finite;
  int arity_ = 2;
  int vc_dimension_ = 1;
  std::size_t dims_ = 0;
  std::size_t hidden_ = 0;
  std::size_t domain_size_ = 0;
  std::vector<double> cuts_;
  std::vector<Hypothesis> members_;
};

// Sampled train/test splits for the real and synthetic sides.
struct DatasetPair {
  SampleSet real_train;
  SampleSet real_test;
  SampleSet synth_train;
  SampleSet synth_test;
  std::size_t n = 0;
  std::size_t m = 0;

  void validate() const;
};

// ---------------------------------------------------------------------------
// Operations

// count i.i.d. draws from dist; bit-identical for identical (dist, count, seed).
SampleSet sample(const ProbTable& dist, std::size_t count, Seed seed,
                 Origin origin = Origin::real, Split split = Split::train);

// Attach labels y_i = f(x_i) to a feature set.
SampleSet apply_labeling(const LabelingFunction& f, const SampleSet& features);

// Deterministic predictions, one per feature point.
std::vector<Label> evaluate(const Hypothesis& h, const SampleSet& features);

}  // namespace g2r
