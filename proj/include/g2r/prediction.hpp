#pragma once

// Prediction-record files: the audit surface that lets an external training
// pipeline have its bound estimated here without re-training. CSV with
// header; columns follow the record fields; pred_hda may be absent (for all
// rows or none).

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "g2r/domain.hpp"
#include "g2r/estimators.hpp"

namespace g2r::cli {

struct PredictionRecord {
  Split split = Split::test;
  Origin origin = Origin::real;
  std::string sample_id;
  Label true_label = 0;
  Label pred_h = 0;
  Label pred_hstar = 0;
  std::optional<int> pred_hda;
};

std::vector<PredictionRecord> parse_prediction_csv(const std::string& text);
std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path);
std::string predictions_to_csv(const std::vector<PredictionRecord>& records);

struct EstimateResult {
  est::BoundReport report;
  bool hda_present = false;  // false: the DA-side fields were skipped
};

// Applies the full estimator set to externally supplied predictions. All
// rates come from the test splits; n is inferred from the train rows (0 when
// none are present).
EstimateResult estimate_from_predictions(const std::vector<PredictionRecord>& records,
                                         const est::ConfidenceConfig& conf = {});

}  // namespace g2r::cli
