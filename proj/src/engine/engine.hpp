#pragma once

#include <optional>
#include <vector>

#include "core/window.hpp"
#include "engine/tracker.hpp"
#include "gmoe/model.hpp"
#include "kinematics/skeleton.hpp"
#include "rnle/rnle.hpp"

namespace liftrisk {

enum class HapticLevel : int { Off = 0, Slight = 1, Medium = 2, Strong = 3 };

const char* to_string(HapticLevel level);

// Lifting-index bands for the alert ladder; each value is the lower
// inclusive bound of its level.
struct HapticBands {
  double slight = 0.5;
  double medium = 0.85;
  double strong = 1.2;
};

struct HapticCommand {
  HapticLevel level = HapticLevel::Off;
  double intensity = 0.0;  // min(LI / 2, 1)
};

HapticCommand haptic_command(double li, const HapticBands& bands);

// Per-step risk over the predicted horizon. Steps whose predicted action
// is not Rising carry zero risk.
struct RiskStep {
  ActionLabel action = ActionLabel::Standing;
  double li = 0.0;
  NioshGeometry geometry;
  NioshResult rnle;
  std::array<double, kJointDof> q{};  // predicted joint angles
};

struct RiskHorizon {
  std::vector<RiskStep> steps;
  double max_li = 0.0;
  int max_step = -1;  // -1 when no step carries risk
};

RiskHorizon risk_horizon(const MotionPrediction& prediction,
                         const std::array<double, kJointDof>& origin_q,
                         const Skeleton& skeleton, const NioshInput& context,
                         int horizon_steps, RoundingMode rounding,
                         CouplingMode coupling_mode);

struct EngineSettings {
  Skeleton skeleton;
  NioshInput rnle_context;  // payload, frequency, duration, coupling, angle
  RoundingMode rounding = RoundingMode::Exact;
  CouplingMode coupling_mode = CouplingMode::PaperFlat;
  HapticBands bands;
  int horizon_steps = 30;
  double drop_threshold = 0.2;
  double rise_threshold = 0.2;
  int history_cycles = 10;
  // Reset the travel origin from the measured frame instead of the first
  // predicted frame when the action changes.
  bool origin_from_measured = false;
};

struct EngineRecord {
  double t = 0.0;
  ActionLabel action = ActionLabel::Standing;
  std::array<double, kActionCount> probs{};  // step-0 gate output
  RiskHorizon risk;
  HapticCommand haptic;
  std::optional<TransitionEvent> transition;
  std::array<double, kJointDof> origin_q{};  // travel origin in use
};

// Streaming pipeline: window assembly, motion prediction, action
// debouncing, horizon risk scoring, and alert grading. One record per
// push once 28 valid frames have arrived.
class RiskEngine {
 public:
  RiskEngine(GmoeModel model, const EngineSettings& settings);

  // Throws std::invalid_argument for invalid frames (the caller decides
  // whether to skip or abort); otherwise returns a record once warmed up.
  std::optional<EngineRecord> push(const StateFrame& frame);

  const MotionPrediction& last_prediction() const;
  std::size_t frames_in() const { return frames_in_; }
  std::size_t records_out() const { return records_out_; }
  void reset();

 private:
  GmoeModel model_;
  EngineSettings settings_;
  WindowAssembler assembler_;
  TransitionTracker tracker_;
  std::array<double, kJointDof> origin_q_{};
  bool origin_set_ = false;
  bool have_prediction_ = false;
  MotionPrediction last_prediction_;
  std::size_t frames_in_ = 0;
  std::size_t records_out_ = 0;
};

// Batch convenience: pushes every frame, collecting records. Invalid
// frames propagate as exceptions.
std::vector<EngineRecord> run_engine(GmoeModel model,
                                     const EngineSettings& settings,
                                     const std::vector<StateFrame>& frames);

}  // namespace liftrisk
