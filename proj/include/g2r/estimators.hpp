#pragma once

// Finite-sample estimators for every quantity in the bound reports: testing
// errors, lambda-bar, the two distance estimators, the assembled bound
// values, and the Hoeffding / VC confidence terms.

#include <cstddef>
#include <optional>
#include <string>

#include "g2r/domain.hpp"

namespace g2r::est {

struct ConfidenceConfig {
  double delta = 0.05;
  void validate() const;
};

// Fraction of points where h's prediction disagrees with the attached label.
double empirical_risk(const Hypothesis& h, const SampleSet& labeled);

// Fraction of points where the two hypotheses disagree; labels are ignored.
double disagreement_rate(const Hypothesis& h1, const Hypothesis& h2, const SampleSet& features);

// Sum of the two testing errors of the joint-trained hypothesis; in [0, 2].
double lambda_hat(const Hypothesis& h_star_hat, const SampleSet& real_test,
                  const SampleSet& synth_test);

// |disagreement on the synthetic test side - disagreement on the real test side|.
double d_g2r_hat(const Hypothesis& h, const Hypothesis& h_star_hat,
                 const SampleSet& synth_test_features, const SampleSet& real_test_features);

// Balanced domain-classification error:
// (P_synth[h' = 0] + P_real[h' = 1]) / 2. On train features this is psi-hat,
// on test features psi-tilde.
double psi(const Hypothesis& h_prime, const SampleSet& synth_features,
           const SampleSet& real_features);

// |1 - 2 psi(h_da)| on test features.
double d_da_hat(const Hypothesis& h_da, const SampleSet& synth_test_features,
                const SampleSet& real_test_features);

// sqrt(ln(2/delta) / (2m)).
double hoeffding_margin(std::size_t m, const ConfidenceConfig& conf = {});

// emp_risk + sqrt((8/n) ln(4 (2n)^d / delta)); may exceed 1 (reported as-is).
double vc_bound(double emp_risk, std::size_t n, int vc_dim, const ConfidenceConfig& conf = {});

// Everything a single scenario run estimates, plus run metadata. The bound
// fields satisfy b = eps_test_g_h + lambda_hat + d exactly (plain sums, no
// re-rounding). Scenario knobs are absent when the report comes from an
// external prediction file.
struct BoundReport {
  double eps_test_g_h = 0.0;
  double eps_test_r_h = 0.0;
  double lambda_hat = 0.0;
  double d_g2r_hat = 0.0;
  std::optional<double> d_da_hat;
  double b_g2r_hat = 0.0;
  std::optional<double> b_da_hat;
  double hoeffding_margin = 0.0;

  std::size_t n = 0;
  std::size_t m = 0;
  double delta = 0.05;
  Seed seed = 0;
  std::optional<double> gamma;
  std::optional<double> rho;

  static std::string csv_header();
  std::string csv_row() const;
};

// Assembles a full report from the three hypotheses and one dataset pair.
// h_da may be absent; the DA-side fields are then left empty.
BoundReport make_bound_report(const Hypothesis& h, const Hypothesis& h_star_hat,
                              const std::optional<Hypothesis>& h_da, const DatasetPair& data,
                              const ConfidenceConfig& conf = {}, Seed seed = 0,
                              std::optional<double> gamma = std::nullopt,
                              std::optional<double> rho = std::nullopt);

}  // namespace g2r::est
