#include "kinematics/skeleton.hpp"

#include <cmath>

namespace liftrisk {

namespace {

using Transform = Eigen::Isometry3d;

Transform rot_pry(double pitch, double roll, double yaw) {
  Transform t = Transform::Identity();
  t.linear() = (Eigen::AngleAxisd(pitch, Eigen::Vector3d::UnitY()) *
                Eigen::AngleAxisd(roll, Eigen::Vector3d::UnitX()) *
                Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()))
                   .toRotationMatrix();
  return t;
}

Transform trans(double x, double y, double z) {
  Transform t = Transform::Identity();
  t.translation() = Eigen::Vector3d(x, y, z);
  return t;
}

struct LegChain {
  Transform hip, knee, ankle, sole;  // local joint transforms
};

LegChain leg_chain(const SkeletonLengths& len, double side,
                   const std::array<double, kJointDof>& q, int base) {
  // base indexes the hip pitch; the leg block is
  // (hip p/r/y, knee p, ankle p/r).
  LegChain c;
  c.hip = trans(0, side * len.stance_half_width, 0) *
          rot_pry(q[base], q[base + 1], q[base + 2]);
  c.knee = trans(0, 0, -len.thigh) * rot_pry(q[base + 3], 0, 0);
  c.ankle = trans(0, 0, -len.shank) * rot_pry(q[base + 4], q[base + 5], 0);
  c.sole = trans(0, 0, -len.ankle_height);
  return c;
}

}  // namespace

const char* joint_angle_name(int index) {
  static const char* const kNames[kJointDof] = {
      "l5s1_pitch",           "l5s1_roll",
      "l5s1_yaw",             "t9t8_pitch",
      "t9t8_roll",            "t9t8_yaw",
      "neck_pitch",           "neck_roll",
      "neck_yaw",             "left_shoulder_pitch",
      "left_shoulder_roll",   "left_shoulder_yaw",
      "left_elbow_pitch",     "left_elbow_pronation",
      "right_shoulder_pitch", "right_shoulder_roll",
      "right_shoulder_yaw",   "right_elbow_pitch",
      "right_elbow_pronation", "left_hip_pitch",
      "left_hip_roll",        "left_hip_yaw",
      "left_knee_pitch",      "left_ankle_pitch",
      "left_ankle_roll",      "right_hip_pitch",
      "right_hip_roll",       "right_hip_yaw",
      "right_knee_pitch",     "right_ankle_pitch",
      "right_ankle_roll",
  };
  if (index < 0 || index >= kJointDof) return "unknown";
  return kNames[index];
}

BodyPose forward_kinematics(const Skeleton& skeleton,
                            const std::array<double, kJointDof>& q) {
  const SkeletonLengths& len = skeleton.lengths;

  const LegChain left = leg_chain(len, +1.0, q, kLeftHipPitch);
  const LegChain right = leg_chain(len, -1.0, q, kRightHipPitch);

  // Ground the pose: the left sole is planted flat at its stance spot,
  // which fixes the pelvis transform.
  const Transform left_to_sole = left.hip * left.knee * left.ankle * left.sole;
  const Transform pelvis =
      trans(0, len.stance_half_width, 0) * left_to_sole.inverse();

  BodyPose pose;
  pose.pelvis = pelvis.translation();

  {
    Transform t = pelvis * left.hip;
    pose.left_hip = t.translation();
    t = t * left.knee;
    pose.left_knee = t.translation();
    t = t * left.ankle;
    pose.left_ankle = t.translation();
    t = t * left.sole;
    pose.left_sole = t.translation();
  }
  {
    Transform t = pelvis * right.hip;
    pose.right_hip = t.translation();
    t = t * right.knee;
    pose.right_knee = t.translation();
    t = t * right.ankle;
    pose.right_ankle = t.translation();
    t = t * right.sole;
    pose.right_sole = t.translation();
  }

  const Transform l5s1 = pelvis * trans(0, 0, len.pelvis_to_l5s1) *
                         rot_pry(q[kL5S1Pitch], q[kL5S1Roll], q[kL5S1Yaw]);
  pose.l5s1 = l5s1.translation();
  const Transform t9t8 = l5s1 * trans(0, 0, len.l5s1_to_t9t8) *
                         rot_pry(q[kT9T8Pitch], q[kT9T8Roll], q[kT9T8Yaw]);
  pose.t9t8 = t9t8.translation();
  const Transform neck = t9t8 * trans(0, 0, len.t9t8_to_shoulder) *
                         rot_pry(q[kNeckPitch], q[kNeckRoll], q[kNeckYaw]);
  pose.neck = neck.translation();
  pose.head = (neck * trans(0, 0, len.neck_to_head)).translation();

  const auto arm = [&](double side, int base, Eigen::Vector3d& shoulder,
                       Eigen::Vector3d& elbow, Eigen::Vector3d& hand) {
    // base indexes the shoulder pitch; block is
    // (shoulder p/r/y, elbow pitch, elbow pronation).
    Transform t = t9t8 *
                  trans(0, side * len.shoulder_lateral, len.t9t8_to_shoulder) *
                  rot_pry(q[base], q[base + 1], q[base + 2]);
    shoulder = t.translation();
    t = t * trans(0, 0, len.upper_arm) *
        (rot_pry(q[base + 3], 0, 0) *
         rot_pry(0, 0, q[base + 4]));
    elbow = t.translation();
    hand = (t * trans(0, 0, len.forearm_hand)).translation();
  };
  arm(+1.0, kLeftShoulderPitch, pose.left_shoulder, pose.left_elbow,
      pose.left_hand);
  arm(-1.0, kRightShoulderPitch, pose.right_shoulder, pose.right_elbow,
      pose.right_hand);

  return pose;
}

GeometrySnapshot hand_geometry(const Skeleton& skeleton,
                               const std::array<double, kJointDof>& q) {
  const BodyPose pose = forward_kinematics(skeleton, q);
  GeometrySnapshot g;
  g.h_left_cm = std::abs(pose.left_hand.x() - pose.left_sole.x()) * 100.0;
  g.h_right_cm = std::abs(pose.right_hand.x() - pose.right_sole.x()) * 100.0;
  g.v_left_cm = pose.left_hand.z() * 100.0;
  g.v_right_cm = pose.right_hand.z() * 100.0;
  g.h_cm = 0.5 * (g.h_left_cm + g.h_right_cm);
  g.v_cm = 0.5 * (g.v_left_cm + g.v_right_cm);
  return g;
}

GeometrySnapshot hand_geometry(const Skeleton& skeleton,
                               const StateFrame& frame) {
  return hand_geometry(skeleton, frame.q);
}

NioshGeometry niosh_geometry(const Skeleton& skeleton,
                             const std::array<double, kJointDof>& q_origin,
                             const std::array<double, kJointDof>& q_current) {
  const GeometrySnapshot origin = hand_geometry(skeleton, q_origin);
  const GeometrySnapshot current = hand_geometry(skeleton, q_current);
  NioshGeometry g;
  g.h_cm = current.h_cm;
  g.v_cm = current.v_cm;
  g.d_cm = std::abs(current.v_cm - origin.v_cm);
  return g;
}

NioshGeometry niosh_geometry(const Skeleton& skeleton, const StateFrame& origin,
                             const StateFrame& current) {
  return niosh_geometry(skeleton, origin.q, current.q);
}

}  // namespace liftrisk
