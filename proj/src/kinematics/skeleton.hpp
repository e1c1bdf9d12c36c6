#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <array>
#include <string>

#include "core/frame.hpp"

namespace liftrisk {

// Canonical order of the 31 joint angles. Three-axis joints store
// (pitch, roll, yaw) about the local (y, x, z) axes; pitch is rotation in
// the sagittal plane, positive tipping forward for the trunk.
enum JointAngle : int {
  kL5S1Pitch = 0,
  kL5S1Roll = 1,
  kL5S1Yaw = 2,
  kT9T8Pitch = 3,
  kT9T8Roll = 4,
  kT9T8Yaw = 5,
  kNeckPitch = 6,
  kNeckRoll = 7,
  kNeckYaw = 8,
  kLeftShoulderPitch = 9,
  kLeftShoulderRoll = 10,
  kLeftShoulderYaw = 11,
  kLeftElbowPitch = 12,
  kLeftElbowPronation = 13,
  kRightShoulderPitch = 14,
  kRightShoulderRoll = 15,
  kRightShoulderYaw = 16,
  kRightElbowPitch = 17,
  kRightElbowPronation = 18,
  kLeftHipPitch = 19,
  kLeftHipRoll = 20,
  kLeftHipYaw = 21,
  kLeftKneePitch = 22,
  kLeftAnklePitch = 23,
  kLeftAnkleRoll = 24,
  kRightHipPitch = 25,
  kRightHipRoll = 26,
  kRightHipYaw = 27,
  kRightKneePitch = 28,
  kRightAnklePitch = 29,
  kRightAnkleRoll = 30,
};

const char* joint_angle_name(int index);

// Link lengths in meters. The zero pose stacks every link along +z, so a
// fully zeroed skeleton stands with arms pointing straight up and both
// hands at the summed chain length above the floor. Hips sit directly
// above the feet, so stance_half_width doubles as the hip lateral offset.
struct SkeletonLengths {
  double ankle_height = 0.09;
  double shank = 0.40;
  double thigh = 0.41;
  double pelvis_to_l5s1 = 0.10;
  double l5s1_to_t9t8 = 0.22;
  double t9t8_to_shoulder = 0.20;
  double neck_to_head = 0.22;
  double upper_arm = 0.30;
  double forearm_hand = 0.36;
  double shoulder_lateral = 0.19;
  double stance_half_width = 0.12;
};

struct Skeleton {
  SkeletonLengths lengths;
};

// World positions of the named body points. World frame: x forward,
// y left, z up, origin midway between the feet on the floor. The pose is
// grounded by planting the left sole flat at (0, +stance_half_width, 0).
struct BodyPose {
  Eigen::Vector3d pelvis;
  Eigen::Vector3d l5s1;
  Eigen::Vector3d t9t8;
  Eigen::Vector3d neck;
  Eigen::Vector3d head;
  Eigen::Vector3d left_shoulder, right_shoulder;
  Eigen::Vector3d left_elbow, right_elbow;
  Eigen::Vector3d left_hand, right_hand;
  Eigen::Vector3d left_hip, right_hip;
  Eigen::Vector3d left_knee, right_knee;
  Eigen::Vector3d left_ankle, right_ankle;
  Eigen::Vector3d left_sole, right_sole;
};

BodyPose forward_kinematics(const Skeleton& skeleton,
                            const std::array<double, kJointDof>& q);

// Hand-to-foot measures used by the lifting equation, in centimeters.
// H is the sagittal (x) distance between hand and same-side sole, V the
// hand height; both are averaged over the two sides.
struct GeometrySnapshot {
  double h_cm = 0.0;
  double v_cm = 0.0;
  double h_left_cm = 0.0, h_right_cm = 0.0;
  double v_left_cm = 0.0, v_right_cm = 0.0;
};

GeometrySnapshot hand_geometry(const Skeleton& skeleton,
                               const std::array<double, kJointDof>& q);
GeometrySnapshot hand_geometry(const Skeleton& skeleton,
                               const StateFrame& frame);

struct NioshGeometry {
  double h_cm = 0.0;
  double v_cm = 0.0;
  double d_cm = 0.0;
};

// H and V of the current pose, D as the vertical hand travel from the
// origin pose.
NioshGeometry niosh_geometry(const Skeleton& skeleton,
                             const std::array<double, kJointDof>& q_origin,
                             const std::array<double, kJointDof>& q_current);
NioshGeometry niosh_geometry(const Skeleton& skeleton,
                             const StateFrame& origin,
                             const StateFrame& current);

}  // namespace liftrisk
