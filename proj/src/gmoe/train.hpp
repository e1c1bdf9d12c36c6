#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "gmoe/data.hpp"
#include "gmoe/model.hpp"

namespace liftrisk {

struct TrainConfig {
  double b1 = 1.0;  // classification term weight
  double b2 = 0.5;  // regression term weight
  bool squared_error = true;  // false: penalize unsquared residual norms

  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-6;
  double grad_clip_norm = 5.0;  // 0 disables clipping

  int batch_size = 32;
  int max_epochs = 40;
  int anchor_stride = 3;

  double lr_decay_factor = 0.5;
  int lr_patience = 3;          // epochs without improvement before decay
  int early_stop_patience = 8;  // epochs without improvement before stopping
  double min_improvement = 1e-5;

  std::uint64_t seed = 1234;
};

struct LossBreakdown {
  double total = 0.0;
  double classification = 0.0;  // weighted by b1
  double regression = 0.0;      // weighted by b2
};

// Reference implementation of the training objective over M windows:
//   b1 * [-1/(2M) sum_w sum_t sum_j a log p]
// + b2 * [ 1/(2M) sum_w sum_t |sum_i p_i y_i - y|^2 ]   (squared mode)
// with the unsquared norm replacing the square in the other mode, and
// log arguments clamped at 1e-12. experts is indexed [expert][window].
LossBreakdown gmoe_loss(const std::vector<Eigen::MatrixXd>& probs,
                        const std::vector<std::vector<Eigen::MatrixXd>>& experts,
                        const std::vector<Eigen::MatrixXd>& target_onehot,
                        const std::vector<Eigen::MatrixXd>& target_motion,
                        const TrainConfig& config);

struct EpochStats {
  int epoch = 0;
  LossBreakdown train;
  LossBreakdown val;
  double learning_rate = 0.0;
  double seconds = 0.0;
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  int best_epoch = -1;
  double best_val_loss = 0.0;
  bool stopped_early = false;
  double val_accuracy = 0.0;       // step-0 action accuracy on validation
  std::array<double, 3> val_f1{};  // per-class step-0 F1 on validation
  double total_seconds = 0.0;
};

// Normalizes features from the training split, then runs minibatch Adam
// over the window/target pairs. The model keeps the weights of the epoch
// with the lowest validation loss. max_epochs of 0 leaves the weights
// untouched.
TrainReport train(GmoeModel& model, const std::vector<SeqData>& train_data,
                  const std::vector<SeqData>& val_data,
                  const TrainConfig& config,
                  const std::function<void(const EpochStats&)>& on_epoch = {});

// Gradients of the objective for one batch of anchors, packed in the same
// order as pack_params. Exposed for finite-difference verification.
Eigen::VectorXd loss_gradients(const GmoeModel& model,
                               const std::vector<SeqData>& data,
                               const std::vector<TrainingAnchor>& anchors,
                               const TrainConfig& config,
                               LossBreakdown* loss = nullptr);

// Flat views of every trainable tensor (gate first, then each expert;
// wx, wh, b, wout, bout within a net).
std::size_t param_count(const GmoeModel& model);
Eigen::VectorXd pack_params(const GmoeModel& model);
void unpack_params(GmoeModel& model, const Eigen::VectorXd& packed);

}  // namespace liftrisk
