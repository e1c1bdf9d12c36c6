#include "gmoe/model.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace liftrisk {

namespace {

Eigen::MatrixXd uniform_matrix(int rows, int cols, double bound,
                               std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  Eigen::MatrixXd m(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) m(r, c) = dist(rng);
  }
  return m;
}

LstmParams init_net(int input, int hidden, int readout, std::mt19937_64& rng) {
  LstmParams p;
  p.wx = uniform_matrix(4 * hidden, input, 1.0 / std::sqrt(input), rng);
  p.wh = uniform_matrix(4 * hidden, hidden, 1.0 / std::sqrt(hidden), rng);
  p.b = Eigen::VectorXd::Zero(4 * hidden);
  p.b.segment(hidden, hidden).setOnes();  // forget gate starts open
  p.wout = uniform_matrix(readout, hidden, 1.0 / std::sqrt(hidden), rng);
  p.bout = Eigen::VectorXd::Zero(readout);
  return p;
}

void check_net(const LstmParams& p, int input, int hidden, int readout,
               const std::string& name) {
  const auto fail = [&](const char* tensor) {
    throw std::invalid_argument("model shape mismatch: " + name + "." +
                                tensor);
  };
  if (p.wx.rows() != 4 * hidden || p.wx.cols() != input) fail("wx");
  if (p.wh.rows() != 4 * hidden || p.wh.cols() != hidden) fail("wh");
  if (p.b.size() != 4 * hidden) fail("b");
  if (p.wout.rows() != readout || p.wout.cols() != hidden) fail("wout");
  if (p.bout.size() != readout) fail("bout");
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

GmoeModel init_gmoe(const GmoeDims& dims, std::uint64_t seed) {
  if (dims.input <= 0 || dims.hidden <= 0 || dims.window <= 0 ||
      dims.horizon <= 0 || dims.actions <= 0 || dims.motion <= 0) {
    throw std::invalid_argument("non-positive model dimension");
  }
  std::mt19937_64 rng(seed);
  GmoeModel model;
  model.dims = dims;
  model.gate = init_net(dims.input, dims.hidden, dims.horizon * dims.actions,
                        rng);
  model.experts.reserve(dims.actions);
  for (int i = 0; i < dims.actions; ++i) {
    model.experts.push_back(
        init_net(dims.input, dims.hidden, dims.horizon * dims.motion, rng));
  }
  model.feat_mean = Eigen::VectorXd::Zero(dims.input);
  model.feat_scale = Eigen::VectorXd::Ones(dims.input);
  model.motion_map.resize(dims.motion);
  if (dims.motion == kMotionDim && dims.input == kFeatureDim) {
    const auto& idx = motion_feature_indices();
    model.motion_map.assign(idx.begin(), idx.end());
  } else {
    for (int j = 0; j < dims.motion; ++j) model.motion_map[j] = j % dims.input;
  }
  return model;
}

void validate_model(const GmoeModel& model) {
  const GmoeDims& d = model.dims;
  check_net(model.gate, d.input, d.hidden, d.horizon * d.actions, "gate");
  if (static_cast<int>(model.experts.size()) != d.actions) {
    throw std::invalid_argument("model shape mismatch: expert count");
  }
  for (int i = 0; i < d.actions; ++i) {
    check_net(model.experts[i], d.input, d.hidden, d.horizon * d.motion,
              "experts[" + std::to_string(i) + "]");
  }
  if (model.feat_mean.size() != d.input || model.feat_scale.size() != d.input) {
    throw std::invalid_argument("model shape mismatch: feature stats");
  }
  if (static_cast<int>(model.motion_map.size()) != d.motion) {
    throw std::invalid_argument("model shape mismatch: motion_map");
  }
  for (const int f : model.motion_map) {
    if (f < 0 || f >= d.input) {
      throw std::invalid_argument("model shape mismatch: motion_map index");
    }
  }
}

void lstm_step(const LstmParams& params, const Eigen::VectorXd& x,
               Eigen::VectorXd& h, Eigen::VectorXd& c) {
  const int hidden = static_cast<int>(params.wh.cols());
  const Eigen::VectorXd z = params.wx * x + params.wh * h + params.b;
  for (int k = 0; k < hidden; ++k) {
    const double i = sigmoid(z[k]);
    const double f = sigmoid(z[hidden + k]);
    const double g = std::tanh(z[2 * hidden + k]);
    const double o = sigmoid(z[3 * hidden + k]);
    c[k] = f * c[k] + i * g;
    h[k] = o * std::tanh(c[k]);
  }
}

namespace {

// Runs the window through one net and returns the readout vector.
Eigen::VectorXd run_net(const LstmParams& params,
                        const Eigen::MatrixXd& inputs) {
  const int hidden = static_cast<int>(params.wh.cols());
  Eigen::VectorXd h = Eigen::VectorXd::Zero(hidden);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(hidden);
  for (Eigen::Index t = 0; t < inputs.rows(); ++t) {
    lstm_step(params, inputs.row(t).transpose(), h, c);
  }
  return params.wout * h + params.bout;
}

}  // namespace

MotionPrediction predict(const GmoeModel& model,
                         const Eigen::MatrixXd& raw_window) {
  const GmoeDims& d = model.dims;
  if (raw_window.rows() != d.window || raw_window.cols() != d.input) {
    throw std::invalid_argument("window shape mismatch");
  }

  Eigen::MatrixXd norm(d.window, d.input);
  for (Eigen::Index t = 0; t < norm.rows(); ++t) {
    norm.row(t) = (raw_window.row(t).transpose() - model.feat_mean)
                      .cwiseQuotient(model.feat_scale)
                      .transpose();
  }

  MotionPrediction out;
  out.probs.resize(d.horizon, d.actions);
  const Eigen::VectorXd gate_read = run_net(model.gate, norm);
  for (int t = 0; t < d.horizon; ++t) {
    const auto logits = gate_read.segment(t * d.actions, d.actions);
    const double peak = logits.maxCoeff();
    Eigen::VectorXd e = (logits.array() - peak).exp();
    out.probs.row(t) = (e / e.sum()).transpose();
  }

  out.expert_motion.reserve(d.actions);
  for (int i = 0; i < d.actions; ++i) {
    const Eigen::VectorXd read = run_net(model.experts[i], norm);
    Eigen::MatrixXd y(d.horizon, d.motion);
    for (int t = 0; t < d.horizon; ++t) {
      y.row(t) = read.segment(t * d.motion, d.motion).transpose();
    }
    out.expert_motion.push_back(std::move(y));
  }

  out.blended_norm = Eigen::MatrixXd::Zero(d.horizon, d.motion);
  for (int i = 0; i < d.actions; ++i) {
    out.blended_norm.noalias() +=
        out.probs.col(i).asDiagonal() * out.expert_motion[i];
  }

  out.motion.resize(d.horizon, d.motion);
  for (int j = 0; j < d.motion; ++j) {
    const int f = model.motion_map[j];
    out.motion.col(j) =
        out.blended_norm.col(j) * model.feat_scale[f] +
        Eigen::VectorXd::Constant(d.horizon, model.feat_mean[f]);
  }
  return out;
}

MotionPrediction predict(const GmoeModel& model, const InputWindow& window) {
  Eigen::MatrixXd raw(kWindowLen, kFeatureDim);
  for (int t = 0; t < kWindowLen; ++t) {
    const auto feat = frame_features(window.frames[t]);
    for (int f = 0; f < kFeatureDim; ++f) raw(t, f) = feat[f];
  }
  MotionPrediction out = predict(model, raw);
  out.anchor_time = window.anchor_time;
  return out;
}

ActionLabel classify(const MotionPrediction& prediction, int step) {
  if (step < 0 || step >= prediction.probs.rows()) {
    throw std::invalid_argument("horizon step out of range");
  }
  int best = 0;
  for (int j = 1; j < prediction.probs.cols(); ++j) {
    if (prediction.probs(step, j) > prediction.probs(step, best)) best = j;
  }
  return static_cast<ActionLabel>(best);
}

}  // namespace liftrisk
