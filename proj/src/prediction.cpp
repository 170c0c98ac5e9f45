#include "g2r/prediction.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

namespace g2r::cli {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

int parse_int(const std::string& v, std::size_t line_no, const char* what) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ParseError(std::string("bad ") + what + " '" + v + "'", line_no);
  }
  return out;
}

}  // namespace

std::vector<PredictionRecord> parse_prediction_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw ParseError("empty prediction file", 1);
  ++line_no;
  const std::vector<std::string> header = split_csv_line(line);
  const std::vector<std::string> with_hda = {"split",  "origin", "sample_id", "true_label",
                                             "pred_h", "pred_hstar", "pred_hda"};
  const std::vector<std::string> without_hda = {"split",  "origin",     "sample_id",
                                                "true_label", "pred_h", "pred_hstar"};
  bool has_hda_column;
  if (header == with_hda) {
    has_hda_column = true;
  } else if (header == without_hda) {
    has_hda_column = false;
  } else {
    throw ParseError("unexpected prediction CSV header", 1);
  }

  std::vector<PredictionRecord> records;
  std::set<std::tuple<Split, Origin, std::string>> seen;
  std::size_t hda_present_rows = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split_csv_line(line);
    const std::size_t expected = has_hda_column ? 7 : 6;
    if (cells.size() != expected) {
      throw ParseError("expected " + std::to_string(expected) + " columns, got " +
                           std::to_string(cells.size()),
                       line_no);
    }
    PredictionRecord rec;
    if (cells[0] == "train") {
      rec.split = Split::train;
    } else if (cells[0] == "test") {
      rec.split = Split::test;
    } else {
      throw ParseError("bad split '" + cells[0] + "'", line_no);
    }
    if (cells[1] == "real") {
      rec.origin = Origin::real;
    } else if (cells[1] == "synthetic") {
      rec.origin = Origin::synthetic;
    } else {
      throw ParseError("bad origin '" + cells[1] + "'", line_no);
    }
    rec.sample_id = cells[2];
    rec.true_label = parse_int(cells[3], line_no, "true_label");
    rec.pred_h = parse_int(cells[4], line_no, "pred_h");
    rec.pred_hstar = parse_int(cells[5], line_no, "pred_hstar");
    if (rec.true_label < 0 || rec.pred_h < 0 || rec.pred_hstar < 0) {
      throw ParseError("negative label", line_no);
    }
    if (has_hda_column && !cells[6].empty()) {
      const int v = parse_int(cells[6], line_no, "pred_hda");
      if (v != 0 && v != 1) throw ParseError("pred_hda must be 0 or 1", line_no);
      rec.pred_hda = v;
      ++hda_present_rows;
    }
    if (!seen.insert({rec.split, rec.origin, rec.sample_id}).second) {
      throw ValidationError("duplicate prediction key (" + std::string(to_string(rec.split)) +
                            ", " + to_string(rec.origin) + ", " + rec.sample_id + ")");
    }
    records.push_back(std::move(rec));
  }

  if (hda_present_rows != 0 && hda_present_rows != records.size()) {
    throw ValidationError("pred_hda present on some rows but not all");
  }
  return records;
}

std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open prediction file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_prediction_csv(buf.str());
}

std::string predictions_to_csv(const std::vector<PredictionRecord>& records) {
  std::ostringstream os;
  os << "split,origin,sample_id,true_label,pred_h,pred_hstar,pred_hda\n";
  for (const PredictionRecord& r : records) {
    os << to_string(r.split) << ',' << to_string(r.origin) << ',' << r.sample_id << ','
       << r.true_label << ',' << r.pred_h << ',' << r.pred_hstar << ',';
    if (r.pred_hda) os << *r.pred_hda;
    os << '\n';
  }
  return os.str();
}

EstimateResult estimate_from_predictions(const std::vector<PredictionRecord>& records,
                                         const est::ConfidenceConfig& conf) {
  conf.validate();

  std::size_t m_real = 0;
  std::size_t m_synth = 0;
  std::size_t n_real = 0;
  std::size_t n_synth = 0;
  std::size_t mism_h_g = 0;      // pred_h vs true_label, synthetic test
  std::size_t mism_h_r = 0;      // pred_h vs true_label, real test
  std::size_t mism_star_r = 0;   // pred_hstar vs true_label, real test
  std::size_t mism_star_g = 0;   // pred_hstar vs true_label, synthetic test
  std::size_t disagree_g = 0;    // pred_h vs pred_hstar, synthetic test
  std::size_t disagree_r = 0;    // pred_h vs pred_hstar, real test
  std::size_t hda_zero_g = 0;    // pred_hda == 0, synthetic test
  std::size_t hda_one_r = 0;     // pred_hda == 1, real test
  bool any_hda = false;

  for (const PredictionRecord& r : records) {
    if (r.pred_hda) any_hda = true;
    if (r.split == Split::train) {
      (r.origin == Origin::real ? n_real : n_synth) += 1;
      continue;
    }
    if (r.origin == Origin::synthetic) {
      ++m_synth;
      if (r.pred_h != r.true_label) ++mism_h_g;
      if (r.pred_hstar != r.true_label) ++mism_star_g;
      if (r.pred_h != r.pred_hstar) ++disagree_g;
      if (r.pred_hda && *r.pred_hda == 0) ++hda_zero_g;
    } else {
      ++m_real;
      if (r.pred_h != r.true_label) ++mism_h_r;
      if (r.pred_hstar != r.true_label) ++mism_star_r;
      if (r.pred_h != r.pred_hstar) ++disagree_r;
      if (r.pred_hda && *r.pred_hda == 1) ++hda_one_r;
    }
  }

  if (m_real == 0 || m_synth == 0) {
    throw ValidationError("estimate_from_predictions: test split empty for one origin");
  }
  if (m_real != m_synth) {
    throw ValidationError("estimate_from_predictions: test sizes disagree (" +
                          std::to_string(m_real) + " real vs " + std::to_string(m_synth) +
                          " synthetic)");
  }
  if (n_real != n_synth) {
    throw ValidationError("estimate_from_predictions: train sizes disagree");
  }

  // Rates are the same integer divisions the in-memory pipeline performs, so
  // a dumped run re-estimates bit-identically.
  const double md = static_cast<double>(m_synth);
  EstimateResult out;
  est::BoundReport& rep = out.report;
  rep.eps_test_g_h = static_cast<double>(mism_h_g) / md;
  rep.eps_test_r_h = static_cast<double>(mism_h_r) / md;
  rep.lambda_hat = static_cast<double>(mism_star_r) / md + static_cast<double>(mism_star_g) / md;
  rep.d_g2r_hat =
      std::abs(static_cast<double>(disagree_g) / md - static_cast<double>(disagree_r) / md);
  rep.b_g2r_hat = rep.eps_test_g_h + rep.lambda_hat + rep.d_g2r_hat;
  if (any_hda) {
    const double a = static_cast<double>(hda_zero_g) / md;
    const double b = static_cast<double>(hda_one_r) / md;
    const double psi_tilde = 0.5 * (a + b);
    rep.d_da_hat = std::abs(1.0 - 2.0 * psi_tilde);
    rep.b_da_hat = rep.eps_test_g_h + rep.lambda_hat + *rep.d_da_hat;
    out.hda_present = true;
  }
  rep.hoeffding_margin = est::hoeffding_margin(m_synth, conf);
  rep.n = n_real;
  rep.m = m_synth;
  rep.delta = conf.delta;
  return out;
}

}  // namespace g2r::cli
