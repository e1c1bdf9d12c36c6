#include "gmoe/data.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace liftrisk {

SeqData make_seq_data(const LabeledSequence& lift) {
  SeqData data;
  const int n = static_cast<int>(lift.frames.size());
  data.feat.resize(n, kFeatureDim);
  data.label.resize(n);
  for (int i = 0; i < n; ++i) {
    const StateFrame& frame = lift.frames[i];
    const auto feat = frame_features(frame);
    for (int f = 0; f < kFeatureDim; ++f) data.feat(i, f) = feat[f];
    data.label[i] =
        static_cast<int>(frame.label.value_or(ActionLabel::Standing));
  }
  return data;
}

std::vector<SeqData> make_seq_data(const std::vector<LabeledSequence>& lifts) {
  std::vector<SeqData> out;
  out.reserve(lifts.size());
  for (const LabeledSequence& lift : lifts) out.push_back(make_seq_data(lift));
  return out;
}

std::vector<TrainingAnchor> training_anchors(const std::vector<SeqData>& data,
                                             const GmoeDims& dims, int stride,
                                             bool skip_short) {
  if (stride < 1) throw std::invalid_argument("anchor stride must be >= 1");
  const int span = (dims.window - 1) * kFrameSpacing;
  const int lookahead = dims.horizon * kFrameSpacing;
  const int min_frames = span + 1 + lookahead;

  std::vector<TrainingAnchor> anchors;
  for (int s = 0; s < static_cast<int>(data.size()); ++s) {
    const int n = static_cast<int>(data[s].feat.rows());
    if (n < min_frames) {
      if (skip_short) continue;
      throw std::invalid_argument("sequence " + std::to_string(s) +
                                  " shorter than " + std::to_string(span + 1) +
                                  " + " + std::to_string(lookahead) +
                                  " raw frames");
    }
    for (int a = span; a + lookahead <= n - 1; a += stride) {
      anchors.push_back({s, a});
    }
  }
  return anchors;
}

TrainingSample materialize_sample(const SeqData& data, int anchor,
                                  const GmoeDims& dims,
                                  const std::vector<int>& motion_map) {
  TrainingSample sample;
  sample.window.resize(dims.window, dims.input);
  const int span = (dims.window - 1) * kFrameSpacing;
  for (int t = 0; t < dims.window; ++t) {
    sample.window.row(t) = data.feat.row(anchor - span + t * kFrameSpacing);
  }
  sample.onehot = Eigen::MatrixXd::Zero(dims.horizon, dims.actions);
  sample.motion.resize(dims.horizon, dims.motion);
  for (int i = 0; i < dims.horizon; ++i) {
    const int target = anchor + kFrameSpacing * (i + 1);
    sample.onehot(i, data.label[target]) = 1.0;
    for (int j = 0; j < dims.motion; ++j) {
      sample.motion(i, j) = data.feat(target, motion_map[j]);
    }
  }
  return sample;
}

void compute_feature_stats(const std::vector<SeqData>& data,
                           Eigen::VectorXd& mean, Eigen::VectorXd& scale) {
  if (data.empty()) throw std::invalid_argument("no sequences for stats");
  const int dim = static_cast<int>(data[0].feat.cols());
  mean = Eigen::VectorXd::Zero(dim);
  scale = Eigen::VectorXd::Zero(dim);
  std::int64_t count = 0;
  for (const SeqData& seq : data) {
    mean += seq.feat.colwise().sum().transpose();
    count += seq.feat.rows();
  }
  if (count == 0) throw std::invalid_argument("no frames for stats");
  mean /= static_cast<double>(count);
  for (const SeqData& seq : data) {
    scale += (seq.feat.rowwise() - mean.transpose())
                 .array()
                 .square()
                 .colwise()
                 .sum()
                 .matrix()
                 .transpose();
  }
  scale = (scale / static_cast<double>(count)).cwiseSqrt();
  for (int f = 0; f < dim; ++f) {
    if (scale[f] < 1e-8) scale[f] = 1.0;
  }
}

}  // namespace liftrisk
