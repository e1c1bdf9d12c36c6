#pragma once

#include <vector>

#include "core/frame.hpp"
#include "kinematics/skeleton.hpp"
#include "synth/script.hpp"

namespace liftrisk {

// One generated lift: labeled frames at 100 Hz, the matching ground-truth
// hand geometry per frame, and the phase boundaries in seconds.
struct LabeledSequence {
  std::vector<StateFrame> frames;
  std::vector<GeometrySnapshot> geometry;
  double squat_start_s = 0.0;
  double rise_start_s = 0.0;
  double rise_end_s = 0.0;
  LiftScript script;
};

// Synthesizes one lift by minimum-jerk interpolation between solved
// keyframe postures. Deterministic for a given script (the seed drives all
// jitter). Throws std::invalid_argument for degenerate scripts and
// std::domain_error when a hand target is outside the arm's reach.
LabeledSequence generate_lift(const LiftScript& script,
                              const Skeleton& skeleton);

// Joint angles for a whole-body posture with both hands on a sagittal
// target. Exposed for tests and keyframe construction.
struct PostureSpec {
  double knee = 0.1;          // knee pitch
  double pelvis_x = -0.02;    // world x of the pelvis origin
  double pelvis_pitch = 0.0;  // world pitch of the pelvis frame
  double trunk_pitch = 0.1;   // world pitch at the shoulders
  double hand_x = 0.1;        // hand target, world x [m]
  double hand_z = 0.8;        // hand target, world z [m]
};

std::array<double, kJointDof> solve_posture(const Skeleton& skeleton,
                                            const PostureSpec& spec);

}  // namespace liftrisk
