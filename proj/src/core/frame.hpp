#pragma once

#include <array>
#include <optional>
#include <string>

namespace liftrisk {

// Stream geometry shared by every stage of the pipeline.
inline constexpr int kJointDof = 31;      // joint angles per frame
inline constexpr int kWrenchDim = 12;     // two feet x (force xyz, torque xyz)
inline constexpr int kFeatureDim = 74;    // q + dq + w
inline constexpr int kWindowLen = 10;     // frames per input window
inline constexpr int kFrameSpacing = 3;   // raw steps between window frames
inline constexpr int kHorizonSteps = 50;  // predicted future frames
inline constexpr int kMotionDim = 43;     // q + w (velocities excluded)
inline constexpr int kActionCount = 3;
inline constexpr double kSampleHz = 100.0;
// Oldest raw index a window reaches back to, relative to its anchor.
inline constexpr int kWindowSpan = (kWindowLen - 1) * kFrameSpacing;

enum class ActionLabel : int {
  Standing = 0,
  Squatting = 1,
  Rising = 2,
};

const char* to_string(ActionLabel label);
std::optional<ActionLabel> action_from_string(const std::string& name);

// One measured sample: timestamp, joint angles [rad], joint velocities
// [rad/s], and the two ground-reaction wrenches [N, N*m], left foot first.
struct StateFrame {
  double t = 0.0;
  std::array<double, kJointDof> q{};
  std::array<double, kJointDof> dq{};
  std::array<double, kWrenchDim> w{};
  std::optional<ActionLabel> label;
};

struct FrameValidity {
  bool ok = true;
  std::string reason;
};

// Checks every numeric field is finite. Field counts are fixed by the type;
// count errors can only occur at parse time and are reported there.
FrameValidity validate_frame(const StateFrame& frame);

// Count + finiteness check for freshly parsed, still-untyped field vectors.
FrameValidity validate_frame_fields(const double* q, std::size_t nq,
                                    const double* dq, std::size_t ndq,
                                    const double* w, std::size_t nw);

// Flat feature layout: q[0..30], dq[31..61], w[62..73].
std::array<double, kFeatureDim> frame_features(const StateFrame& frame);
StateFrame frame_from_features(double t,
                               const std::array<double, kFeatureDim>& feat);

// Indices of the motion-output features (q and w) within the 74-vector.
const std::array<int, kMotionDim>& motion_feature_indices();

}  // namespace liftrisk
