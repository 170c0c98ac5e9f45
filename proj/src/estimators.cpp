#include "g2r/estimators.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace g2r::est {

void ConfidenceConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ValidationError("ConfidenceConfig: delta must lie in (0,1), got " +
                          std::to_string(delta));
  }
}

namespace {

void require_nonempty(const SampleSet& s, const char* what) {
  if (s.size() == 0) throw ValidationError(std::string(what) + ": empty sample set");
}

}  // namespace

double empirical_risk(const Hypothesis& h, const SampleSet& labeled) {
  require_nonempty(labeled, "empirical_risk");
  const std::vector<Label>& ys = labeled.require_labels();
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    if (h.predict_at(labeled.features, i) != ys[i]) ++mismatches;
  }
  return static_cast<double>(mismatches) / static_cast<double>(labeled.size());
}

double disagreement_rate(const Hypothesis& h1, const Hypothesis& h2, const SampleSet& features) {
  require_nonempty(features, "disagreement_rate");
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (h1.predict_at(features.features, i) != h2.predict_at(features.features, i)) ++mismatches;
  }
  return static_cast<double>(mismatches) / static_cast<double>(features.size());
}

double lambda_hat(const Hypothesis& h_star_hat, const SampleSet& real_test,
                  const SampleSet& synth_test) {
  return empirical_risk(h_star_hat, real_test) + empirical_risk(h_star_hat, synth_test);
}

double d_g2r_hat(const Hypothesis& h, const Hypothesis& h_star_hat,
                 const SampleSet& synth_test_features, const SampleSet& real_test_features) {
  return std::abs(disagreement_rate(h, h_star_hat, synth_test_features) -
                  disagreement_rate(h, h_star_hat, real_test_features));
}

double psi(const Hypothesis& h_prime, const SampleSet& synth_features,
           const SampleSet& real_features) {
  if (h_prime.arity() != 2) {
    throw ValidationError("psi: domain classifier must be binary, got arity " +
                          std::to_string(h_prime.arity()));
  }
  require_nonempty(synth_features, "psi");
  require_nonempty(real_features, "psi");
  std::size_t synth_zero = 0;
  for (std::size_t i = 0; i < synth_features.size(); ++i) {
    if (h_prime.predict_at(synth_features.features, i) == 0) ++synth_zero;
  }
  std::size_t real_one = 0;
  for (std::size_t i = 0; i < real_features.size(); ++i) {
    if (h_prime.predict_at(real_features.features, i) == 1) ++real_one;
  }
  const double a = static_cast<double>(synth_zero) / static_cast<double>(synth_features.size());
  const double b = static_cast<double>(real_one) / static_cast<double>(real_features.size());
  return 0.5 * (a + b);
}

double d_da_hat(const Hypothesis& h_da, const SampleSet& synth_test_features,
                const SampleSet& real_test_features) {
  return std::abs(1.0 - 2.0 * psi(h_da, synth_test_features, real_test_features));
}

double hoeffding_margin(std::size_t m, const ConfidenceConfig& conf) {
  conf.validate();
  if (m == 0) throw ValidationError("hoeffding_margin: m must be >= 1");
  return std::sqrt(std::log(2.0 / conf.delta) / (2.0 * static_cast<double>(m)));
}

double vc_bound(double emp_risk, std::size_t n, int vc_dim, const ConfidenceConfig& conf) {
  conf.validate();
  if (n == 0) throw ValidationError("vc_bound: n must be >= 1");
  if (vc_dim < 1) throw ValidationError("vc_bound: VC dimension must be >= 1");
  // log(4 (2n)^d / delta) expanded in log space so large d cannot overflow.
  const double log_term = std::log(4.0) + static_cast<double>(vc_dim) * std::log(2.0 * static_cast<double>(n)) -
                          std::log(conf.delta);
  return emp_risk + std::sqrt(8.0 / static_cast<double>(n) * log_term);
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

}  // namespace

std::string BoundReport::csv_header() {
  return "n,m,delta,seed,gamma,rho,eps_test_g_h,eps_test_r_h,lambda_hat,d_g2r_hat,d_da_hat,"
         "b_g2r_hat,b_da_hat,hoeffding_margin";
}

std::string BoundReport::csv_row() const {
  std::ostringstream os;
  os << n << ',' << m << ',' << fmt(delta) << ',' << seed << ',' << fmt(gamma) << ',' << fmt(rho)
     << ',' << fmt(eps_test_g_h) << ',' << fmt(eps_test_r_h) << ',' << fmt(lambda_hat) << ','
     << fmt(d_g2r_hat) << ',' << fmt(d_da_hat) << ',' << fmt(b_g2r_hat) << ',' << fmt(b_da_hat)
     << ',' << fmt(hoeffding_margin);
  return os.str();
}

BoundReport make_bound_report(const Hypothesis& h, const Hypothesis& h_star_hat,
                              const std::optional<Hypothesis>& h_da, const DatasetPair& data,
                              const ConfidenceConfig& conf, Seed seed, std::optional<double> gamma,
                              std::optional<double> rho) {
  conf.validate();
  data.validate();
  if (data.real_test.size() != data.synth_test.size()) {
    throw ValidationError("make_bound_report: test sets disagree on m");
  }

  BoundReport r;
  r.eps_test_g_h = empirical_risk(h, data.synth_test);
  r.eps_test_r_h = empirical_risk(h, data.real_test);
  r.lambda_hat = est::lambda_hat(h_star_hat, data.real_test, data.synth_test);
  r.d_g2r_hat = est::d_g2r_hat(h, h_star_hat, data.synth_test, data.real_test);
  r.b_g2r_hat = r.eps_test_g_h + r.lambda_hat + r.d_g2r_hat;
  if (h_da) {
    r.d_da_hat = est::d_da_hat(*h_da, data.synth_test, data.real_test);
    r.b_da_hat = r.eps_test_g_h + r.lambda_hat + *r.d_da_hat;
    if (*r.d_da_hat >= r.d_g2r_hat && *r.b_da_hat < r.b_g2r_hat) {
      throw std::logic_error("make_bound_report: bound ordering violated");
    }
  }
  r.hoeffding_margin = est::hoeffding_margin(data.m, conf);
  r.n = data.n;
  r.m = data.m;
  r.delta = conf.delta;
  r.seed = seed;
  r.gamma = gamma;
  r.rho = rho;
  return r;
}

}  // namespace g2r::est
