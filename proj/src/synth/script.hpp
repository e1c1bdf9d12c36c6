#pragma once

#include <cstdint>

namespace liftrisk {

// Parameters of one synthetic lift: stand, squat down to the payload,
// rise while carrying it to the placement height, stand again.
struct LiftScript {
  double lead_in_s = 1.5;   // standing before the squat starts
  double squat_s = 2.5;
  double rise_s = 2.5;
  double stand_s = 2.0;     // settle back to rest after placement

  double squat_depth_rad = 2.1;         // knee flexion at the bottom
  double lift_height_cm = 80.0;         // hand height at placement
  double hand_forward_origin_cm = 47.0; // H at the pickup
  double hand_height_origin_cm = 8.0;   // V at the pickup
  double hand_forward_end_cm = 63.0;    // H at placement

  double payload_kg = 3.0;
  double body_mass_kg = 70.0;

  double angle_jitter_rad = 0.01;   // keyframe posture noise (1 sigma)
  double timing_jitter_frac = 0.10; // phase duration noise (uniform +/-)
  double target_jitter_cm = 1.0;    // hand target forward noise (1 sigma)
  double arm_sway_rad = 0.05;       // corrective arm adjustment amplitude

  bool allow_height_outside_range = false; // lift heights beyond [68, 92]
  std::uint64_t seed = 1;
};

// Per-lift sampling ranges used when generating a whole dataset.
struct ScriptRanges {
  double lift_height_min_cm = 68.0;
  double lift_height_max_cm = 92.0;
  double squat_depth_min_rad = 2.0;
  double squat_depth_max_rad = 2.2;
  double payload_min_kg = 2.0;
  double payload_max_kg = 10.0;
};

}  // namespace liftrisk
