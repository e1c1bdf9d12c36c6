#include "core/frame.hpp"

#include <cmath>

namespace liftrisk {

const char* to_string(ActionLabel label) {
  switch (label) {
    case ActionLabel::Standing:
      return "standing";
    case ActionLabel::Squatting:
      return "squatting";
    case ActionLabel::Rising:
      return "rising";
  }
  return "standing";
}

std::optional<ActionLabel> action_from_string(const std::string& name) {
  if (name == "standing") return ActionLabel::Standing;
  if (name == "squatting") return ActionLabel::Squatting;
  if (name == "rising") return ActionLabel::Rising;
  return std::nullopt;
}

namespace {

bool all_finite(const double* v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(v[i])) return false;
  }
  return true;
}

}  // namespace

FrameValidity validate_frame(const StateFrame& frame) {
  if (!std::isfinite(frame.t)) return {false, "non-finite timestamp"};
  if (!all_finite(frame.q.data(), frame.q.size()) ||
      !all_finite(frame.dq.data(), frame.dq.size()) ||
      !all_finite(frame.w.data(), frame.w.size())) {
    return {false, "non-finite value"};
  }
  return {};
}

FrameValidity validate_frame_fields(const double* q, std::size_t nq,
                                    const double* dq, std::size_t ndq,
                                    const double* w, std::size_t nw) {
  if (nq != kJointDof || ndq != kJointDof || nw != kWrenchDim) {
    return {false, "feature count"};
  }
  if (!all_finite(q, nq) || !all_finite(dq, ndq) || !all_finite(w, nw)) {
    return {false, "non-finite value"};
  }
  return {};
}

std::array<double, kFeatureDim> frame_features(const StateFrame& frame) {
  std::array<double, kFeatureDim> feat{};
  for (int i = 0; i < kJointDof; ++i) feat[i] = frame.q[i];
  for (int i = 0; i < kJointDof; ++i) feat[kJointDof + i] = frame.dq[i];
  for (int i = 0; i < kWrenchDim; ++i) feat[2 * kJointDof + i] = frame.w[i];
  return feat;
}

StateFrame frame_from_features(double t,
                               const std::array<double, kFeatureDim>& feat) {
  StateFrame frame;
  frame.t = t;
  for (int i = 0; i < kJointDof; ++i) frame.q[i] = feat[i];
  for (int i = 0; i < kJointDof; ++i) frame.dq[i] = feat[kJointDof + i];
  for (int i = 0; i < kWrenchDim; ++i) frame.w[i] = feat[2 * kJointDof + i];
  return frame;
}

const std::array<int, kMotionDim>& motion_feature_indices() {
  static const std::array<int, kMotionDim> idx = [] {
    std::array<int, kMotionDim> a{};
    int k = 0;
    for (int i = 0; i < kJointDof; ++i) a[k++] = i;
    for (int i = 0; i < kWrenchDim; ++i) a[k++] = 2 * kJointDof + i;
    return a;
  }();
  return idx;
}

}  // namespace liftrisk
