#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gmoe/model.hpp"
#include "synth/generate.hpp"

namespace liftrisk {

// One recorded sequence flattened for training: a row per raw frame plus
// the action label of each frame.
struct SeqData {
  Eigen::MatrixXd feat;  // frames x input_dim, raw units
  std::vector<int> label;
};

SeqData make_seq_data(const LabeledSequence& lift);
std::vector<SeqData> make_seq_data(const std::vector<LabeledSequence>& lifts);

struct TrainingAnchor {
  int seq = 0;
  int frame = 0;  // anchor (newest) raw index of the window
};

// Anchors that leave room for both the window history (27 frames back)
// and the full prediction horizon (spacing * horizon frames ahead).
// A sequence shorter than that minimum throws unless skip_short is set,
// in which case it contributes nothing.
std::vector<TrainingAnchor> training_anchors(const std::vector<SeqData>& data,
                                             const GmoeDims& dims, int stride,
                                             bool skip_short = false);

// The supervised sample at one anchor, in raw units: the input window and,
// for every horizon step i, the motion features and one-hot action of the
// frame spacing*(i+1) raw steps after the anchor.
struct TrainingSample {
  Eigen::MatrixXd window;  // window x input
  Eigen::MatrixXd onehot;  // horizon x actions
  Eigen::MatrixXd motion;  // horizon x motion
};

TrainingSample materialize_sample(const SeqData& data, int anchor,
                                  const GmoeDims& dims,
                                  const std::vector<int>& motion_map);

// Per-feature mean and standard deviation over every frame of every
// sequence. Near-constant features get scale 1 so that normalization
// stays well defined.
void compute_feature_stats(const std::vector<SeqData>& data,
                           Eigen::VectorXd& mean, Eigen::VectorXd& scale);

}  // namespace liftrisk
