#include "metrics/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "kinematics/skeleton.hpp"

namespace liftrisk {

ClassificationReport classification_report(const ConfusionMatrix& confusion) {
  ClassificationReport report;
  report.confusion = confusion;

  const std::int64_t total = confusion.total();
  std::int64_t diagonal = 0;
  for (int c = 0; c < kActionCount; ++c) diagonal += confusion.count[c][c];
  report.accuracy = total > 0 ? static_cast<double>(diagonal) / total : 0.0;

  for (int c = 0; c < kActionCount; ++c) {
    std::int64_t tp = confusion.count[c][c];
    std::int64_t fp = 0, fn = 0;
    for (int o = 0; o < kActionCount; ++o) {
      if (o == c) continue;
      fp += confusion.count[o][c];
      fn += confusion.count[c][o];
    }
    ClassScores& s = report.per_class[c];
    if (tp + fp > 0) {
      s.precision = static_cast<double>(tp) / (tp + fp);
      s.precision_defined = true;
    }
    if (tp + fn > 0) {
      s.recall = static_cast<double>(tp) / (tp + fn);
      s.recall_defined = true;
    }
    if (2 * tp + fp + fn > 0) {
      s.f1 = 2.0 * tp / static_cast<double>(2 * tp + fp + fn);
      s.f1_defined = true;
    }
    report.macro_precision += s.precision;
    report.macro_recall += s.recall;
    report.macro_f1 += s.f1;
  }
  report.macro_precision /= kActionCount;
  report.macro_recall /= kActionCount;
  report.macro_f1 /= kActionCount;
  return report;
}

ConfusionMatrix classify_dataset(const GmoeModel& model,
                                 const std::vector<SeqData>& data,
                                 int stride) {
  const std::vector<TrainingAnchor> anchors =
      training_anchors(data, model.dims, stride, /*skip_short=*/true);
  ConfusionMatrix confusion;
  const int span = (model.dims.window - 1) * kFrameSpacing;
  Eigen::MatrixXd window(model.dims.window, model.dims.input);
  for (const TrainingAnchor& a : anchors) {
    const SeqData& seq = data[a.seq];
    for (int t = 0; t < model.dims.window; ++t) {
      window.row(t) = seq.feat.row(a.frame - span + t * kFrameSpacing);
    }
    const MotionPrediction pred = predict(model, window);
    const ActionLabel truth =
        static_cast<ActionLabel>(seq.label[a.frame + kFrameSpacing]);
    confusion.add(truth, classify(pred, 0));
  }
  return confusion;
}

MotionErrorReport motion_error(const GmoeModel& model,
                               const std::vector<SeqData>& data,
                               const std::vector<int>& steps, int stride) {
  for (const int s : steps) {
    if (s < 0 || s >= model.dims.horizon) {
      throw std::invalid_argument("horizon step out of range");
    }
  }

  MotionErrorReport report;
  report.steps = steps;
  report.left_knee_rmse_rad.assign(steps.size(), 0.0);
  report.right_elbow_rmse_rad.assign(steps.size(), 0.0);
  report.overall_rmse_norm.assign(steps.size(), 0.0);

  const std::vector<TrainingAnchor> anchors =
      training_anchors(data, model.dims, stride, /*skip_short=*/true);
  if (anchors.empty()) return report;

  const int span = (model.dims.window - 1) * kFrameSpacing;
  Eigen::MatrixXd window(model.dims.window, model.dims.input);
  std::vector<double> knee_sq(steps.size(), 0.0);
  std::vector<double> elbow_sq(steps.size(), 0.0);
  std::vector<double> all_sq(steps.size(), 0.0);

  for (const TrainingAnchor& a : anchors) {
    const SeqData& seq = data[a.seq];
    for (int t = 0; t < model.dims.window; ++t) {
      window.row(t) = seq.feat.row(a.frame - span + t * kFrameSpacing);
    }
    const MotionPrediction pred = predict(model, window);
    for (std::size_t k = 0; k < steps.size(); ++k) {
      const int target = a.frame + kFrameSpacing * (steps[k] + 1);
      double knee_err = 0.0, elbow_err = 0.0;
      for (int j = 0; j < model.dims.motion; ++j) {
        const int f = model.motion_map[j];
        const double err = pred.motion(steps[k], j) - seq.feat(target, f);
        const double norm_err = err / model.feat_scale[f];
        all_sq[k] += norm_err * norm_err;
        if (f == kLeftKneePitch) knee_err = err;
        if (f == kRightElbowPitch) elbow_err = err;
      }
      knee_sq[k] += knee_err * knee_err;
      elbow_sq[k] += elbow_err * elbow_err;
    }
  }

  const double n = static_cast<double>(anchors.size());
  for (std::size_t k = 0; k < steps.size(); ++k) {
    report.left_knee_rmse_rad[k] = std::sqrt(knee_sq[k] / n);
    report.right_elbow_rmse_rad[k] = std::sqrt(elbow_sq[k] / n);
    report.overall_rmse_norm[k] =
        std::sqrt(all_sq[k] / (n * model.dims.motion));
  }
  report.windows = static_cast<std::int64_t>(anchors.size());
  return report;
}

}  // namespace liftrisk
