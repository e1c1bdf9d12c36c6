#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "core/frame.hpp"
#include "core/window.hpp"

namespace liftrisk {

// One single-layer LSTM with a linear readout of the final hidden state.
// The stacked gate order in wx, wh, and b is (input, forget, cell, output).
struct LstmParams {
  Eigen::MatrixXd wx;    // 4h x input
  Eigen::MatrixXd wh;    // 4h x h
  Eigen::VectorXd b;     // 4h
  Eigen::MatrixXd wout;  // readout x h
  Eigen::VectorXd bout;  // readout
};

struct GmoeDims {
  int input = kFeatureDim;
  int hidden = 64;
  int window = kWindowLen;
  int horizon = kHorizonSteps;
  int actions = kActionCount;
  int motion = kMotionDim;
};

// Gated mixture of experts: a gate LSTM scores the three actions for every
// future step, one expert LSTM per action proposes the motion, and the
// final trajectory is the per-step probability-weighted blend.
struct GmoeModel {
  GmoeDims dims;
  LstmParams gate;                  // readout: horizon * actions
  std::vector<LstmParams> experts;  // one per action, readout: horizon * motion
  Eigen::VectorXd feat_mean;        // input feature normalization
  Eigen::VectorXd feat_scale;
  std::vector<int> motion_map;      // input feature index per motion output
};

// Weights drawn uniformly from +/- 1/sqrt(fan_in), forget-gate bias 1,
// identity normalization.
GmoeModel init_gmoe(const GmoeDims& dims, std::uint64_t seed);

// Throws std::invalid_argument when any parameter shape disagrees with
// dims; the message names the offending tensor.
void validate_model(const GmoeModel& model);

// One recurrent update; h and c must have size params.wh.cols().
void lstm_step(const LstmParams& params, const Eigen::VectorXd& x,
               Eigen::VectorXd& h, Eigen::VectorXd& c);

struct MotionPrediction {
  Eigen::MatrixXd probs;     // horizon x actions, rows sum to 1
  Eigen::MatrixXd motion;    // horizon x motion, physical units
  Eigen::MatrixXd blended_norm;               // horizon x motion, normalized
  std::vector<Eigen::MatrixXd> expert_motion; // per expert, normalized
  double anchor_time = 0.0;
};

// raw_window holds one frame per row (oldest first) in raw feature units.
MotionPrediction predict(const GmoeModel& model,
                         const Eigen::MatrixXd& raw_window);
MotionPrediction predict(const GmoeModel& model, const InputWindow& window);

// Arg-max action at one horizon step; ties resolve to the lowest label
// index.
ActionLabel classify(const MotionPrediction& prediction, int step);

}  // namespace liftrisk
