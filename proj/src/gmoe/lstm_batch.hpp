#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gmoe/model.hpp"

namespace liftrisk {

// Batched LSTM rollout with everything backpropagation needs. Matrices
// are batch-major: one row per window.
struct LstmCache {
  std::vector<Eigen::MatrixXd> x;       // T of B x in
  std::vector<Eigen::MatrixXd> h;       // T+1 of B x hidden, h[0] = 0
  std::vector<Eigen::MatrixXd> c;       // T+1 of B x hidden
  std::vector<Eigen::MatrixXd> gi, gf, gg, go;  // gate activations
  std::vector<Eigen::MatrixXd> tanh_c;  // tanh of the new cell state
};

// Runs the whole window; returns the final hidden state (B x hidden) and
// fills the cache when one is supplied.
Eigen::MatrixXd lstm_forward_batched(const LstmParams& params,
                                     const std::vector<Eigen::MatrixXd>& xs,
                                     LstmCache* cache);

struct NetGrads {
  Eigen::MatrixXd wx, wh, wout;
  Eigen::VectorXd b, bout;
};

NetGrads zero_grads(const LstmParams& params);

// Backpropagates d(loss)/d(final hidden) through the rollout, adding the
// recurrent parameter gradients into grads (readout gradients are the
// caller's business).
void lstm_backward_batched(const LstmParams& params, const LstmCache& cache,
                           const Eigen::MatrixXd& dh_final, NetGrads& grads);

}  // namespace liftrisk
