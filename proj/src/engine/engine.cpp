#include "engine/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace liftrisk {

const char* to_string(HapticLevel level) {
  switch (level) {
    case HapticLevel::Off:
      return "off";
    case HapticLevel::Slight:
      return "slight";
    case HapticLevel::Medium:
      return "medium";
    case HapticLevel::Strong:
      return "strong";
  }
  return "off";
}

HapticCommand haptic_command(double li, const HapticBands& bands) {
  HapticCommand cmd;
  if (li >= bands.strong) {
    cmd.level = HapticLevel::Strong;
  } else if (li >= bands.medium) {
    cmd.level = HapticLevel::Medium;
  } else if (li >= bands.slight) {
    cmd.level = HapticLevel::Slight;
  }
  cmd.intensity = std::clamp(li / 2.0, 0.0, 1.0);
  return cmd;
}

RiskHorizon risk_horizon(const MotionPrediction& prediction,
                         const std::array<double, kJointDof>& origin_q,
                         const Skeleton& skeleton, const NioshInput& context,
                         int horizon_steps, RoundingMode rounding,
                         CouplingMode coupling_mode) {
  if (horizon_steps < 1 ||
      horizon_steps > static_cast<int>(prediction.probs.rows())) {
    throw std::invalid_argument("risk horizon outside predicted range");
  }
  if (prediction.motion.cols() != kMotionDim) {
    throw std::invalid_argument("prediction lacks full joint output");
  }

  RiskHorizon horizon;
  horizon.steps.resize(horizon_steps);
  for (int i = 0; i < horizon_steps; ++i) {
    RiskStep& step = horizon.steps[i];
    step.action = classify(prediction, i);
    for (int j = 0; j < kJointDof; ++j) step.q[j] = prediction.motion(i, j);
    if (step.action != ActionLabel::Rising) continue;

    step.geometry = niosh_geometry(skeleton, origin_q, step.q);
    NioshInput input = context;
    input.h_cm = step.geometry.h_cm;
    input.v_cm = step.geometry.v_cm;
    input.d_cm = step.geometry.d_cm;
    step.rnle = assess_lift(input, rounding, coupling_mode);
    step.li = step.rnle.li;
    if (step.li > horizon.max_li) {
      horizon.max_li = step.li;
      horizon.max_step = i;
    }
  }
  return horizon;
}

RiskEngine::RiskEngine(GmoeModel model, const EngineSettings& settings)
    : model_(std::move(model)),
      settings_(settings),
      tracker_(settings.drop_threshold, settings.rise_threshold,
               settings.history_cycles) {
  validate_model(model_);
  if (settings_.horizon_steps < 1 ||
      settings_.horizon_steps > model_.dims.horizon) {
    throw std::invalid_argument("risk horizon outside model range");
  }
  if (settings_.rnle_context.payload_kg < 0.0) {
    throw std::invalid_argument("negative payload");
  }
}

void RiskEngine::reset() {
  assembler_.reset();
  tracker_.reset();
  origin_set_ = false;
  have_prediction_ = false;
  frames_in_ = 0;
  records_out_ = 0;
}

const MotionPrediction& RiskEngine::last_prediction() const {
  if (!have_prediction_) {
    throw std::logic_error("no prediction yet");
  }
  return last_prediction_;
}

std::optional<EngineRecord> RiskEngine::push(const StateFrame& frame) {
  std::optional<InputWindow> window = assembler_.push(frame);
  ++frames_in_;
  if (!origin_set_) {
    origin_q_ = frame.q;
    origin_set_ = true;
  }
  if (!window) return std::nullopt;

  last_prediction_ = predict(model_, *window);
  have_prediction_ = true;

  EngineRecord record;
  record.t = frame.t;
  for (int j = 0; j < kActionCount; ++j) {
    record.probs[j] = last_prediction_.probs(0, j);
  }
  record.transition = tracker_.update(record.probs, frame.t);
  record.action = tracker_.current();

  if (record.transition) {
    // The travel origin resets at every action change; the default takes
    // the posture the model expects next, which tolerates sensor dropouts
    // around the transition itself.
    if (settings_.origin_from_measured) {
      origin_q_ = frame.q;
    } else {
      for (int j = 0; j < kJointDof; ++j) {
        origin_q_[j] = last_prediction_.motion(0, j);
      }
    }
  }
  record.origin_q = origin_q_;

  record.risk = risk_horizon(last_prediction_, origin_q_, settings_.skeleton,
                             settings_.rnle_context, settings_.horizon_steps,
                             settings_.rounding, settings_.coupling_mode);
  record.haptic = haptic_command(record.risk.max_li, settings_.bands);
  ++records_out_;
  return record;
}

std::vector<EngineRecord> run_engine(GmoeModel model,
                                     const EngineSettings& settings,
                                     const std::vector<StateFrame>& frames) {
  RiskEngine engine(std::move(model), settings);
  std::vector<EngineRecord> records;
  for (const StateFrame& frame : frames) {
    if (auto record = engine.push(frame)) {
      records.push_back(std::move(*record));
    }
  }
  return records;
}

}  // namespace liftrisk
