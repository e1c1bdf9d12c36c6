#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gmoe/data.hpp"
#include "gmoe/model.hpp"

namespace liftrisk {

struct ConfusionMatrix {
  // count[truth][predicted]
  std::array<std::array<std::int64_t, kActionCount>, kActionCount> count{};

  void add(ActionLabel truth, ActionLabel predicted) {
    ++count[static_cast<int>(truth)][static_cast<int>(predicted)];
  }
  std::int64_t total() const {
    std::int64_t n = 0;
    for (const auto& row : count) {
      for (const std::int64_t c : row) n += c;
    }
    return n;
  }
};

// Zero-denominator scores are reported as 0 with the matching flag
// cleared, so callers can tell "bad" apart from "undefined".
struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool precision_defined = false;
  bool recall_defined = false;
  bool f1_defined = false;
};

struct ClassificationReport {
  ConfusionMatrix confusion;
  double accuracy = 0.0;
  std::array<ClassScores, kActionCount> per_class;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
};

ClassificationReport classification_report(const ConfusionMatrix& confusion);

// Step-0 action predictions against ground-truth labels, over every
// stride-th anchor that has the full prediction horizon ahead of it.
ConfusionMatrix classify_dataset(const GmoeModel& model,
                                 const std::vector<SeqData>& data, int stride);

// Prediction error at selected horizon steps. Probe joints are reported
// in radians; the overall figure is an RMSE over all motion features in
// normalized units.
struct MotionErrorReport {
  std::vector<int> steps;
  std::vector<double> left_knee_rmse_rad;
  std::vector<double> right_elbow_rmse_rad;
  std::vector<double> overall_rmse_norm;
  std::int64_t windows = 0;
};

MotionErrorReport motion_error(const GmoeModel& model,
                               const std::vector<SeqData>& data,
                               const std::vector<int>& steps, int stride);

inline std::vector<int> default_error_steps() { return {0, 19, 49}; }

}  // namespace liftrisk
