#include "synth/generate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace liftrisk {

namespace {

constexpr double kGravity = 9.80665;
constexpr double kPi = 3.14159265358979323846;

double wrap_angle(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a < -kPi) a += 2.0 * kPi;
  return a;
}

// Quintic minimum-jerk blend and its derivative on s in [0, 1].
double min_jerk(double s) { return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }
double min_jerk_rate(double s) {
  return 30.0 * s * s * (1.0 + s * (-2.0 + s));
}

// Pelvis x as a function of ankle pitch, with the hip angle slaved to the
// requested pelvis pitch. Solved by bracketing + bisection on the actual
// forward kinematics.
double solve_ankle_pitch(const Skeleton& skeleton, double knee,
                         double pelvis_pitch, double pelvis_x) {
  const auto pelvis_x_at = [&](double ankle) {
    std::array<double, kJointDof> q{};
    const double hip = -(pelvis_pitch + knee + ankle);
    q[kLeftHipPitch] = q[kRightHipPitch] = hip;
    q[kLeftKneePitch] = q[kRightKneePitch] = knee;
    q[kLeftAnklePitch] = q[kRightAnklePitch] = ankle;
    return forward_kinematics(skeleton, q).pelvis.x();
  };

  double lo = -1.2, hi = 1.2;
  double flo = pelvis_x_at(lo) - pelvis_x;
  bool bracketed = false;
  const int kScan = 96;
  for (int i = 1; i <= kScan; ++i) {
    const double a = -1.2 + 2.4 * i / kScan;
    const double fa = pelvis_x_at(a) - pelvis_x;
    if (flo == 0.0 || flo * fa <= 0.0) {
      hi = a;
      bracketed = true;
      break;
    }
    lo = a;
    flo = fa;
  }
  if (!bracketed) {
    throw std::domain_error("posture unreachable: pelvis offset " +
                            std::to_string(pelvis_x));
  }
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = pelvis_x_at(mid) - pelvis_x;
    if (flo * fm <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

struct ArmSolution {
  double shoulder_pitch;
  double elbow_pitch;
};

// Planar two-link reach in the sagittal plane. Angles are measured from
// the +z axis toward +x; the elbow-back configuration is returned.
ArmSolution solve_arm(const Eigen::Vector3d& shoulder, double hand_x,
                      double hand_z, double upper, double forearm,
                      double trunk_pitch) {
  const double dx = hand_x - shoulder.x();
  const double dz = hand_z - shoulder.z();
  const double r = std::hypot(dx, dz);
  if (r > upper + forearm - 1e-6 || r < std::abs(upper - forearm) + 1e-6) {
    throw std::domain_error("hand target unreachable: reach " +
                            std::to_string(r) + " m");
  }
  const double theta_d = std::atan2(dx, dz);
  const double cos_alpha =
      (upper * upper + r * r - forearm * forearm) / (2.0 * upper * r);
  const double alpha = std::acos(std::clamp(cos_alpha, -1.0, 1.0));
  const double theta_u = theta_d + alpha;
  const double ex = dx - upper * std::sin(theta_u);
  const double ez = dz - upper * std::cos(theta_u);
  const double theta_f = std::atan2(ex, ez);
  return {wrap_angle(theta_u - trunk_pitch), wrap_angle(theta_f - theta_u)};
}

}  // namespace

std::array<double, kJointDof> solve_posture(const Skeleton& skeleton,
                                            const PostureSpec& spec) {
  const SkeletonLengths& len = skeleton.lengths;

  std::array<double, kJointDof> q{};
  const double ankle =
      solve_ankle_pitch(skeleton, spec.knee, spec.pelvis_pitch, spec.pelvis_x);
  const double hip = -(spec.pelvis_pitch + spec.knee + ankle);
  q[kLeftHipPitch] = q[kRightHipPitch] = hip;
  q[kLeftKneePitch] = q[kRightKneePitch] = spec.knee;
  q[kLeftAnklePitch] = q[kRightAnklePitch] = ankle;

  const double lean = spec.trunk_pitch - spec.pelvis_pitch;
  q[kL5S1Pitch] = 0.55 * lean;
  q[kT9T8Pitch] = 0.45 * lean;
  q[kNeckPitch] = std::clamp(-0.3 * lean, -0.7, 0.2);

  const BodyPose trunk_pose = forward_kinematics(skeleton, q);
  const ArmSolution left =
      solve_arm(trunk_pose.left_shoulder, spec.hand_x, spec.hand_z,
                len.upper_arm, len.forearm_hand, spec.trunk_pitch);
  const ArmSolution right =
      solve_arm(trunk_pose.right_shoulder, spec.hand_x, spec.hand_z,
                len.upper_arm, len.forearm_hand, spec.trunk_pitch);
  q[kLeftShoulderPitch] = left.shoulder_pitch;
  q[kLeftElbowPitch] = left.elbow_pitch;
  q[kRightShoulderPitch] = right.shoulder_pitch;
  q[kRightElbowPitch] = right.elbow_pitch;

  const BodyPose check = forward_kinematics(skeleton, q);
  if (std::abs(check.left_hand.x() - spec.hand_x) > 1e-7 ||
      std::abs(check.left_hand.z() - spec.hand_z) > 1e-7) {
    throw std::logic_error("posture solver failed to place the hands");
  }
  return q;
}

namespace {

void check_script(const LiftScript& script) {
  const auto bad = [](double d) { return !(d > 0.0) || !std::isfinite(d); };
  if (bad(script.lead_in_s)) throw std::invalid_argument("degenerate phase: lead_in");
  if (bad(script.squat_s)) throw std::invalid_argument("degenerate phase: squat");
  if (bad(script.rise_s)) throw std::invalid_argument("degenerate phase: rise");
  if (bad(script.stand_s)) throw std::invalid_argument("degenerate phase: stand");
  if (!script.allow_height_outside_range &&
      (script.lift_height_cm < 68.0 || script.lift_height_cm > 92.0)) {
    throw std::invalid_argument("lift height outside [68, 92] cm");
  }
  if (script.payload_kg < 0.0) throw std::invalid_argument("negative payload");
  if (script.body_mass_kg <= 0.0) throw std::invalid_argument("non-positive body mass");
  if (script.timing_jitter_frac < 0.0 || script.timing_jitter_frac >= 0.5) {
    throw std::invalid_argument("timing jitter fraction outside [0, 0.5)");
  }
  if (script.arm_sway_rad < 0.0) {
    throw std::invalid_argument("negative arm sway");
  }
}

}  // namespace

LabeledSequence generate_lift(const LiftScript& script,
                              const Skeleton& skeleton) {
  check_script(script);

  std::mt19937_64 rng(script.seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * kPi);

  const auto jittered_frames = [&](double seconds) {
    const double f = 1.0 + script.timing_jitter_frac * uniform(rng);
    return std::max(1, static_cast<int>(std::lround(seconds * f * kSampleHz)));
  };
  const int n_lead = jittered_frames(script.lead_in_s);
  const int n_squat = jittered_frames(script.squat_s);
  const int n_rise = jittered_frames(script.rise_s);
  const int n_stand = jittered_frames(script.stand_s);

  const double sa = script.angle_jitter_rad;
  const double st = script.target_jitter_cm / 100.0;
  const auto jitter_spec = [&](PostureSpec spec) {
    spec.knee += sa * gauss(rng);
    spec.pelvis_pitch += sa * gauss(rng);
    spec.trunk_pitch += sa * gauss(rng);
    spec.pelvis_x += 0.01 * gauss(rng);
    spec.hand_x += std::clamp(st * gauss(rng), -2.5 * st, 2.5 * st);
    // Keep pickup and placement heights within a fraction of a centimeter.
    spec.hand_z += std::clamp(0.001 * gauss(rng), -0.0025, 0.0025);
    return spec;
  };

  const double v_end = script.lift_height_cm / 100.0;
  PostureSpec stand_spec{0.06, -0.01, -0.02, 0.06, 0.09, 0.85};
  PostureSpec squat_spec{script.squat_depth_rad, -0.18, 0.90, 1.50,
                         script.hand_forward_origin_cm / 100.0,
                         script.hand_height_origin_cm / 100.0};
  PostureSpec place_spec{
      0.35, -0.06, 0.12,
      std::clamp(1.30 - 0.01875 * (script.lift_height_cm - 68.0), 0.60, 1.45),
      script.hand_forward_end_cm / 100.0, v_end};

  const auto solved = [&](const PostureSpec& spec, const char* name) {
    try {
      return solve_posture(skeleton, jitter_spec(spec));
    } catch (const std::domain_error& e) {
      throw std::domain_error(std::string(name) + " keyframe: " + e.what());
    }
  };
  const auto q_stand = solved(stand_spec, "stand");
  const auto q_squat = solved(squat_spec, "squat");
  const auto q_place = solved(place_spec, "place");
  const auto q_rest = solved(stand_spec, "rest");

  struct Phase {
    const std::array<double, kJointDof>*from, *to;
    int frames;
    ActionLabel label;
  };
  const Phase phases[4] = {
      {&q_stand, &q_stand, n_lead, ActionLabel::Standing},
      {&q_stand, &q_squat, n_squat, ActionLabel::Squatting},
      {&q_squat, &q_place, n_rise, ActionLabel::Rising},
      {&q_place, &q_rest, n_stand, ActionLabel::Standing},
  };

  const int rise_begin = n_lead + n_squat;
  const int rise_end = rise_begin + n_rise;
  const int total = rise_end + n_stand;

  const double phi_share = phase_dist(rng);
  const double phi_fx = phase_dist(rng);
  const double phi_fy = phase_dist(rng);
  const double phi_tx = phase_dist(rng);
  const double phi_ty = phase_dist(rng);
  const double phi_tz = phase_dist(rng);

  // While the body moves, the arms make small corrective adjustments on
  // top of the keyframe track: two per-lift random oscillators, faded in
  // and out per phase so every keyframe posture stays exact. The shoulder
  // counters the elbow, which keeps the hands close to the nominal path.
  std::mt19937_64 sway_rng(script.seed ^ 0x9e3779b97f4a7c15ull);
  const double sway_w1 =
      2.0 * kPi * std::uniform_real_distribution<double>(0.7, 1.3)(sway_rng);
  const double sway_w2 =
      2.0 * kPi * std::uniform_real_distribution<double>(1.5, 2.4)(sway_rng);
  const double sway_p1 = phase_dist(sway_rng);
  const double sway_p2 = phase_dist(sway_rng);
  const double sway_amp = script.arm_sway_rad;

  LabeledSequence seq;
  seq.script = script;
  seq.frames.reserve(total);
  seq.geometry.reserve(total);

  int index = 0;
  for (const Phase& phase : phases) {
    for (int j = 0; j < phase.frames; ++j, ++index) {
      const double s = static_cast<double>(j) / phase.frames;
      const double m = min_jerk(s);
      const double mdot = min_jerk_rate(s) * kSampleHz / phase.frames;

      StateFrame frame;
      frame.t = index / kSampleHz;
      frame.label = phase.label;
      for (int k = 0; k < kJointDof; ++k) {
        const double delta = (*phase.to)[k] - (*phase.from)[k];
        frame.q[k] = (*phase.from)[k] + delta * m;
        frame.dq[k] = delta * mdot;
      }

      if (phase.from != phase.to && sway_amp > 0.0) {
        const double env = std::sin(kPi * s);
        const double env2 = env * env;
        const double denv2 =
            kPi * std::sin(2.0 * kPi * s) * kSampleHz / phase.frames;
        const double a1 = sway_w1 * frame.t + sway_p1;
        const double a2 = sway_w2 * frame.t + sway_p2;
        const double osc = std::sin(a1) + 0.6 * std::sin(a2);
        const double dosc =
            sway_w1 * std::cos(a1) + 0.6 * sway_w2 * std::cos(a2);
        const double sway = sway_amp * env2 * osc;
        const double dsway = sway_amp * (denv2 * osc + env2 * dosc);
        frame.q[kLeftElbowPitch] += sway;
        frame.q[kRightElbowPitch] += sway;
        frame.dq[kLeftElbowPitch] += dsway;
        frame.dq[kRightElbowPitch] += dsway;
        frame.q[kLeftShoulderPitch] -= 0.4 * sway;
        frame.q[kRightShoulderPitch] -= 0.4 * sway;
        frame.dq[kLeftShoulderPitch] -= 0.4 * dsway;
        frame.dq[kRightShoulderPitch] -= 0.4 * dsway;
      }

      const bool holding = index >= rise_begin && index < rise_end;
      const double load =
          (script.body_mass_kg + (holding ? script.payload_kg : 0.0)) *
          kGravity;
      const double t = frame.t;
      const double share =
          0.5 + 0.04 * std::sin(2.0 * kPi * 0.40 * t + phi_share);
      const double fx = 0.03 * load * std::sin(2.0 * kPi * 0.23 * t + phi_fx);
      const double fy = 0.02 * load * std::sin(2.0 * kPi * 0.31 * t + phi_fy);
      frame.w[0] = fx;
      frame.w[1] = fy;
      frame.w[2] = share * load;
      frame.w[3] = 0.8 * std::sin(2.0 * kPi * 0.27 * t + phi_tx);
      frame.w[4] = 1.2 * std::sin(2.0 * kPi * 0.19 * t + phi_ty);
      frame.w[5] = 0.4 * std::sin(2.0 * kPi * 0.37 * t + phi_tz);
      frame.w[6] = -fx;
      frame.w[7] = -fy;
      frame.w[8] = (1.0 - share) * load;
      frame.w[9] = -frame.w[3];
      frame.w[10] = frame.w[4];
      frame.w[11] = -frame.w[5];

      seq.geometry.push_back(hand_geometry(skeleton, frame.q));
      seq.frames.push_back(std::move(frame));
    }
  }

  seq.squat_start_s = n_lead / kSampleHz;
  seq.rise_start_s = rise_begin / kSampleHz;
  seq.rise_end_s = rise_end / kSampleHz;
  return seq;
}

}  // namespace liftrisk
