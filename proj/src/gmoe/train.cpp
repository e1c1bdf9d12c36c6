#include "gmoe/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "gmoe/lstm_batch.hpp"

namespace liftrisk {

namespace {

constexpr double kLogFloor = 1e-12;

struct Batch {
  std::vector<Eigen::MatrixXd> x;  // window steps of B x input, normalized
  Eigen::MatrixXd onehot;          // B x (horizon * actions)
  Eigen::MatrixXd motion;          // B x (horizon * motion), normalized
};

Batch assemble_batch(const GmoeModel& model, const std::vector<SeqData>& data,
                     const std::vector<TrainingAnchor>& anchors,
                     std::size_t begin, std::size_t end) {
  const GmoeDims& d = model.dims;
  const int batch = static_cast<int>(end - begin);
  const int span = (d.window - 1) * kFrameSpacing;

  Batch out;
  out.x.assign(d.window, Eigen::MatrixXd(batch, d.input));
  out.onehot = Eigen::MatrixXd::Zero(batch, d.horizon * d.actions);
  out.motion.resize(batch, d.horizon * d.motion);

  for (int b = 0; b < batch; ++b) {
    const TrainingAnchor& a = anchors[begin + b];
    const SeqData& seq = data[a.seq];
    for (int t = 0; t < d.window; ++t) {
      out.x[t].row(b) =
          (seq.feat.row(a.frame - span + t * kFrameSpacing) -
           model.feat_mean.transpose())
              .cwiseQuotient(model.feat_scale.transpose());
    }
    for (int i = 0; i < d.horizon; ++i) {
      const int target = a.frame + kFrameSpacing * (i + 1);
      out.onehot(b, i * d.actions + seq.label[target]) = 1.0;
      for (int j = 0; j < d.motion; ++j) {
        const int f = model.motion_map[j];
        out.motion(b, i * d.motion + j) =
            (seq.feat(target, f) - model.feat_mean[f]) / model.feat_scale[f];
      }
    }
  }
  return out;
}

struct GmoeGrads {
  NetGrads gate;
  std::vector<NetGrads> experts;
};

GmoeGrads zero_grads(const GmoeModel& model) {
  GmoeGrads g;
  g.gate = zero_grads(model.gate);
  g.experts.reserve(model.experts.size());
  for (const LstmParams& e : model.experts) g.experts.push_back(zero_grads(e));
  return g;
}

struct RawSums {
  double s1 = 0.0;  // -sum a log p
  double s2 = 0.0;  // sum of squared (or plain) residual norms
};

// Forward pass over one batch; when grads is non-null also backpropagates,
// normalizing gradients by norm_m windows.
RawSums fused_pass(const GmoeModel& model, const Batch& batch,
                   const TrainConfig& cfg, double norm_m, GmoeGrads* grads) {
  const GmoeDims& d = model.dims;
  const int batch_n = static_cast<int>(batch.onehot.rows());
  const int experts_n = d.actions;

  LstmCache gate_cache;
  std::vector<LstmCache> expert_cache(grads ? experts_n : 0);

  const Eigen::MatrixXd gate_h =
      lstm_forward_batched(model.gate, batch.x, grads ? &gate_cache : nullptr);
  Eigen::MatrixXd probs = gate_h * model.gate.wout.transpose();
  probs.rowwise() += model.gate.bout.transpose();
  for (int b = 0; b < batch_n; ++b) {
    for (int t = 0; t < d.horizon; ++t) {
      auto seg = probs.row(b).segment(t * d.actions, d.actions);
      const double peak = seg.maxCoeff();
      seg = (seg.array() - peak).exp();
      seg /= seg.sum();
    }
  }

  std::vector<Eigen::MatrixXd> expert_h(experts_n);
  std::vector<Eigen::MatrixXd> expert_y(experts_n);
  for (int i = 0; i < experts_n; ++i) {
    expert_h[i] = lstm_forward_batched(model.experts[i], batch.x,
                                       grads ? &expert_cache[i] : nullptr);
    expert_y[i] = expert_h[i] * model.experts[i].wout.transpose();
    expert_y[i].rowwise() += model.experts[i].bout.transpose();
  }

  Eigen::MatrixXd residual = -batch.motion;
  for (int i = 0; i < experts_n; ++i) {
    for (int t = 0; t < d.horizon; ++t) {
      residual.middleCols(t * d.motion, d.motion).noalias() +=
          probs.col(t * d.actions + i).asDiagonal() *
          expert_y[i].middleCols(t * d.motion, d.motion);
    }
  }

  RawSums sums;
  sums.s1 = -(batch.onehot.array() *
              probs.array().max(kLogFloor).log())
                 .sum();
  if (cfg.squared_error) {
    sums.s2 = residual.squaredNorm();
  } else {
    for (int b = 0; b < batch_n; ++b) {
      for (int t = 0; t < d.horizon; ++t) {
        sums.s2 += residual.row(b).segment(t * d.motion, d.motion).norm();
      }
    }
  }
  if (!grads) return sums;

  // d(loss)/d(residual), already carrying the b2 weight and 1/(2M).
  Eigen::MatrixXd dres;
  if (cfg.squared_error) {
    dres = (cfg.b2 / norm_m) * residual;
  } else {
    dres = residual;
    const double coef = cfg.b2 / (2.0 * norm_m);
    for (int b = 0; b < batch_n; ++b) {
      for (int t = 0; t < d.horizon; ++t) {
        auto seg = dres.row(b).segment(t * d.motion, d.motion);
        const double norm = seg.norm();
        seg *= norm > kLogFloor ? coef / norm : 0.0;
      }
    }
  }

  // Classification pushes (p - a)/(2M) straight into the logits; the
  // regression term needs the explicit softmax Jacobian.
  Eigen::MatrixXd dlogits = (cfg.b1 / (2.0 * norm_m)) * (probs - batch.onehot);
  Eigen::MatrixXd dprobs = Eigen::MatrixXd::Zero(batch_n,
                                                 d.horizon * d.actions);
  for (int i = 0; i < experts_n; ++i) {
    Eigen::MatrixXd dy(batch_n, d.horizon * d.motion);
    for (int t = 0; t < d.horizon; ++t) {
      const auto dres_t = dres.middleCols(t * d.motion, d.motion);
      const auto y_t = expert_y[i].middleCols(t * d.motion, d.motion);
      dy.middleCols(t * d.motion, d.motion) =
          probs.col(t * d.actions + i).asDiagonal() * dres_t;
      dprobs.col(t * d.actions + i) =
          dres_t.cwiseProduct(y_t).rowwise().sum();
    }
    GmoeGrads& g = *grads;
    g.experts[i].wout.noalias() += dy.transpose() * expert_h[i];
    g.experts[i].bout += dy.colwise().sum().transpose();
    const Eigen::MatrixXd dh = dy * model.experts[i].wout;
    lstm_backward_batched(model.experts[i], expert_cache[i], dh,
                          g.experts[i]);
  }

  for (int b = 0; b < batch_n; ++b) {
    for (int t = 0; t < d.horizon; ++t) {
      const auto p = probs.row(b).segment(t * d.actions, d.actions);
      const auto dp = dprobs.row(b).segment(t * d.actions, d.actions);
      const double inner = p.dot(dp);
      dlogits.row(b).segment(t * d.actions, d.actions) +=
          p.cwiseProduct(dp - Eigen::RowVectorXd::Constant(d.actions, inner));
    }
  }

  grads->gate.wout.noalias() += dlogits.transpose() * gate_h;
  grads->gate.bout += dlogits.colwise().sum().transpose();
  const Eigen::MatrixXd dh_gate = dlogits * model.gate.wout;
  lstm_backward_batched(model.gate, gate_cache, dh_gate, grads->gate);
  return sums;
}

LossBreakdown to_breakdown(const RawSums& sums, double m,
                           const TrainConfig& cfg) {
  LossBreakdown loss;
  loss.classification = cfg.b1 * sums.s1 / (2.0 * m);
  loss.regression = cfg.b2 * sums.s2 / (2.0 * m);
  loss.total = loss.classification + loss.regression;
  return loss;
}

template <typename Model, typename Fn>
void for_each_tensor(Model& model, Fn&& fn) {
  const auto visit_net = [&](auto& net) {
    fn(net.wx);
    fn(net.wh);
    fn(net.b);
    fn(net.wout);
    fn(net.bout);
  };
  visit_net(model.gate);
  for (auto& expert : model.experts) visit_net(expert);
}

Eigen::VectorXd pack_grads(const GmoeGrads& grads) {
  std::size_t total = 0;
  for_each_tensor(grads, [&](const auto& t) { total += t.size(); });
  Eigen::VectorXd packed(total);
  std::size_t offset = 0;
  for_each_tensor(grads, [&](const auto& t) {
    packed.segment(offset, t.size()) =
        Eigen::Map<const Eigen::VectorXd>(t.data(), t.size());
    offset += t.size();
  });
  return packed;
}

void check_config(const TrainConfig& cfg) {
  if (cfg.b1 < 0.0 || cfg.b2 < 0.0 || !std::isfinite(cfg.b1 + cfg.b2)) {
    throw std::invalid_argument("loss weights must be finite and >= 0");
  }
  if (cfg.learning_rate <= 0.0) {
    throw std::invalid_argument("learning rate must be positive");
  }
  if (cfg.adam_beta1 < 0.0 || cfg.adam_beta1 >= 1.0 || cfg.adam_beta2 < 0.0 ||
      cfg.adam_beta2 >= 1.0) {
    throw std::invalid_argument("adam betas must lie in [0, 1)");
  }
  if (cfg.adam_epsilon <= 0.0) {
    throw std::invalid_argument("adam epsilon must be positive");
  }
  if (cfg.batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  if (cfg.max_epochs < 0) throw std::invalid_argument("negative epoch count");
  if (cfg.anchor_stride < 1) {
    throw std::invalid_argument("anchor stride must be >= 1");
  }
  if (cfg.lr_patience < 1 || cfg.early_stop_patience < 1) {
    throw std::invalid_argument("patience must be >= 1");
  }
  if (cfg.lr_decay_factor <= 0.0 || cfg.lr_decay_factor > 1.0) {
    throw std::invalid_argument("lr decay factor must lie in (0, 1]");
  }
}

}  // namespace

LossBreakdown gmoe_loss(const std::vector<Eigen::MatrixXd>& probs,
                        const std::vector<std::vector<Eigen::MatrixXd>>& experts,
                        const std::vector<Eigen::MatrixXd>& target_onehot,
                        const std::vector<Eigen::MatrixXd>& target_motion,
                        const TrainConfig& config) {
  const std::size_t m = probs.size();
  if (m == 0) throw std::invalid_argument("empty batch");
  if (target_onehot.size() != m || target_motion.size() != m) {
    throw std::invalid_argument("batch size mismatch");
  }
  for (const auto& expert : experts) {
    if (expert.size() != m) throw std::invalid_argument("batch size mismatch");
  }

  double s1 = 0.0, s2 = 0.0;
  for (std::size_t w = 0; w < m; ++w) {
    const Eigen::MatrixXd& p = probs[w];
    for (Eigen::Index t = 0; t < p.rows(); ++t) {
      for (Eigen::Index j = 0; j < p.cols(); ++j) {
        s1 -= target_onehot[w](t, j) * std::log(std::max(p(t, j), kLogFloor));
      }
      Eigen::VectorXd blended =
          Eigen::VectorXd::Zero(target_motion[w].cols());
      for (std::size_t i = 0; i < experts.size(); ++i) {
        blended += p(t, i) * experts[i][w].row(t).transpose();
      }
      const double norm2 =
          (blended - target_motion[w].row(t).transpose()).squaredNorm();
      s2 += config.squared_error ? norm2 : std::sqrt(norm2);
    }
  }
  return to_breakdown({s1, s2}, static_cast<double>(m), config);
}

std::size_t param_count(const GmoeModel& model) {
  std::size_t total = 0;
  for_each_tensor(model, [&](const auto& t) { total += t.size(); });
  return total;
}

Eigen::VectorXd pack_params(const GmoeModel& model) {
  Eigen::VectorXd packed(param_count(model));
  std::size_t offset = 0;
  for_each_tensor(model, [&](const auto& t) {
    packed.segment(offset, t.size()) =
        Eigen::Map<const Eigen::VectorXd>(t.data(), t.size());
    offset += t.size();
  });
  return packed;
}

void unpack_params(GmoeModel& model, const Eigen::VectorXd& packed) {
  if (packed.size() != static_cast<Eigen::Index>(param_count(model))) {
    throw std::invalid_argument("packed parameter size mismatch");
  }
  std::size_t offset = 0;
  for_each_tensor(model, [&](auto& t) {
    Eigen::Map<Eigen::VectorXd>(t.data(), t.size()) =
        packed.segment(offset, t.size());
    offset += t.size();
  });
}

Eigen::VectorXd loss_gradients(const GmoeModel& model,
                               const std::vector<SeqData>& data,
                               const std::vector<TrainingAnchor>& anchors,
                               const TrainConfig& config,
                               LossBreakdown* loss) {
  if (anchors.empty()) throw std::invalid_argument("empty batch");
  const Batch batch =
      assemble_batch(model, data, anchors, 0, anchors.size());
  GmoeGrads grads = zero_grads(model);
  const RawSums sums = fused_pass(model, batch, config,
                                  static_cast<double>(anchors.size()), &grads);
  if (loss) {
    *loss = to_breakdown(sums, static_cast<double>(anchors.size()), config);
  }
  return pack_grads(grads);
}

TrainReport train(GmoeModel& model, const std::vector<SeqData>& train_data,
                  const std::vector<SeqData>& val_data,
                  const TrainConfig& config,
                  const std::function<void(const EpochStats&)>& on_epoch) {
  check_config(config);
  validate_model(model);
  const auto start = std::chrono::steady_clock::now();

  compute_feature_stats(train_data, model.feat_mean, model.feat_scale);

  std::vector<TrainingAnchor> train_anchors =
      training_anchors(train_data, model.dims, config.anchor_stride);
  const std::vector<TrainingAnchor> val_anchors =
      training_anchors(val_data, model.dims, config.anchor_stride);
  if (train_anchors.empty() || val_anchors.empty()) {
    throw std::invalid_argument("no training or validation windows");
  }

  const auto eval_loss = [&](const std::vector<TrainingAnchor>& anchors) {
    RawSums sums;
    for (std::size_t i = 0; i < anchors.size();
         i += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end =
          std::min(anchors.size(), i + config.batch_size);
      const Batch batch = assemble_batch(model, val_data, anchors, i, end);
      const RawSums part = fused_pass(model, batch, config, 1.0, nullptr);
      sums.s1 += part.s1;
      sums.s2 += part.s2;
    }
    return to_breakdown(sums, static_cast<double>(anchors.size()), config);
  };

  TrainReport report;
  Eigen::VectorXd params = pack_params(model);
  Eigen::VectorXd best_params = params;
  Eigen::VectorXd adam_m = Eigen::VectorXd::Zero(params.size());
  Eigen::VectorXd adam_v = Eigen::VectorXd::Zero(params.size());
  double best_val = std::numeric_limits<double>::infinity();
  double lr = config.learning_rate;
  int adam_step = 0;
  int plateau = 0;
  int stall = 0;

  std::mt19937_64 rng(config.seed);

  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    const auto epoch_start = std::chrono::steady_clock::now();
    std::shuffle(train_anchors.begin(), train_anchors.end(), rng);

    RawSums train_sums;
    for (std::size_t i = 0; i < train_anchors.size();
         i += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end =
          std::min(train_anchors.size(), i + config.batch_size);
      const Batch batch =
          assemble_batch(model, train_data, train_anchors, i, end);
      GmoeGrads grads = zero_grads(model);
      const RawSums sums = fused_pass(model, batch, config,
                                      static_cast<double>(end - i), &grads);
      train_sums.s1 += sums.s1;
      train_sums.s2 += sums.s2;

      Eigen::VectorXd g = pack_grads(grads);
      if (config.grad_clip_norm > 0.0) {
        const double norm = g.norm();
        if (norm > config.grad_clip_norm) g *= config.grad_clip_norm / norm;
      }
      ++adam_step;
      adam_m = config.adam_beta1 * adam_m + (1.0 - config.adam_beta1) * g;
      adam_v = config.adam_beta2 * adam_v +
               (1.0 - config.adam_beta2) * g.cwiseProduct(g);
      const double mc = 1.0 - std::pow(config.adam_beta1, adam_step);
      const double vc = 1.0 - std::pow(config.adam_beta2, adam_step);
      params -= (lr / mc) *
                (adam_m.array() /
                 ((adam_v / vc).array().sqrt() + config.adam_epsilon))
                    .matrix();
      unpack_params(model, params);
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train = to_breakdown(
        train_sums, static_cast<double>(train_anchors.size()), config);
    stats.val = eval_loss(val_anchors);
    stats.learning_rate = lr;
    stats.seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - epoch_start)
                        .count();
    report.epochs.push_back(stats);
    if (on_epoch) on_epoch(stats);

    const double val = stats.val.total;
    const bool improved = val < best_val - config.min_improvement;
    if (val < best_val) {
      best_val = val;
      best_params = params;
      report.best_epoch = epoch;
    }
    if (improved) {
      plateau = 0;
      stall = 0;
    } else {
      ++plateau;
      ++stall;
    }
    if (plateau >= config.lr_patience) {
      lr *= config.lr_decay_factor;
      plateau = 0;
    }
    if (stall >= config.early_stop_patience) {
      report.stopped_early = true;
      break;
    }
  }

  if (report.best_epoch >= 0) {
    params = best_params;
    unpack_params(model, params);
    report.best_val_loss = best_val;
  }

  // Step-0 classification quality on the validation split.
  std::array<std::array<std::int64_t, 3>, 3> confusion{};
  for (std::size_t i = 0; i < val_anchors.size();
       i += static_cast<std::size_t>(config.batch_size)) {
    const std::size_t end = std::min(val_anchors.size(),
                                     i + config.batch_size);
    const Batch batch = assemble_batch(model, val_data, val_anchors, i, end);
    const Eigen::MatrixXd gate_h =
        lstm_forward_batched(model.gate, batch.x, nullptr);
    Eigen::MatrixXd logits = gate_h * model.gate.wout.transpose();
    logits.rowwise() += model.gate.bout.transpose();
    for (std::size_t b = 0; b < end - i; ++b) {
      const TrainingAnchor& a = val_anchors[i + b];
      const int truth =
          val_data[a.seq].label[a.frame + kFrameSpacing];
      int pred = 0;
      for (int j = 1; j < model.dims.actions; ++j) {
        if (logits(b, j) > logits(b, pred)) pred = j;
      }
      ++confusion[truth][pred];
    }
  }
  std::int64_t correct = 0, total = 0;
  for (int t = 0; t < 3; ++t) {
    for (int p = 0; p < 3; ++p) {
      total += confusion[t][p];
      if (t == p) correct += confusion[t][p];
    }
  }
  report.val_accuracy = total > 0 ? static_cast<double>(correct) / total : 0.0;
  for (int c = 0; c < 3; ++c) {
    std::int64_t tp = confusion[c][c], fp = 0, fn = 0;
    for (int o = 0; o < 3; ++o) {
      if (o == c) continue;
      fp += confusion[o][c];
      fn += confusion[c][o];
    }
    const double denom = static_cast<double>(2 * tp + fp + fn);
    report.val_f1[c] = denom > 0.0 ? 2.0 * tp / denom : 0.0;
  }

  report.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

}  // namespace liftrisk
