#pragma once

#include <Eigen/Core>

#include "wristservo/geometry.hpp"

namespace wristservo {

struct JointLimits {
  double min = -kPi;
  double max = kPi;

  bool contains(double q) const { return q >= min - 1e-12 && q <= max + 1e-12; }
  double clamp(double q) const { return q < min ? min : (q > max ? max : q); }
  /// A range spanning a whole turn describes a continuous joint.
  bool full_revolution() const { return max - min >= 2.0 * kPi - 1e-9; }
  /// Maps q into [min, min + 2 pi).
  double wrap(double q) const;
};

/// Wrist configuration. Positive WFE is flexion (palm-ward), negative is extension.
struct JointState {
  double wfe = 0.0;
  double wps = 0.0;

  bool operator==(const JointState&) const = default;
};

struct JointVelocity {
  double wfe = 0.0;
  double wps = 0.0;

  bool operator==(const JointVelocity&) const = default;
};

/// Two orthogonal revolute joints intersecting at the wrist point, with a camera
/// embedded in the palm.
///
/// Frames: the forearm base B has z along the forearm (distal) and y toward the
/// palm at zero pronation. The chain is B -> WPS (about z) -> WFE (about -x, so
/// flexion tilts z toward +y) -> end-effector E at the wrist point -> camera C.
/// The camera optical axis is E's z axis tilted by `camera_tilt` toward +y.
struct WristParams {
  double camera_tilt = deg2rad(16.0);
  Vec3 camera_offset{0.0, 0.02, 0.06};
  JointLimits wfe_limits{deg2rad(-45.0), deg2rad(75.0)};
  JointLimits wps_limits{deg2rad(-180.0), deg2rad(180.0)};
  Vec3 palm_normal_local{0.0, 0.0, 1.0};
  bool enforce_limits = true;

  /// Hannes-like defaults; the palm normal is the optical axis rotated back by the tilt.
  static WristParams hannes();

  void validate() const;
};

enum class JointSelector { Both, WfeOnly, WpsOnly };

/// 6 x n, rows ordered (linear, angular); columns (WFE, WPS) for the selected joints.
using JointJacobian = Eigen::Matrix<double, 6, Eigen::Dynamic>;

/// E relative to B.
Pose end_effector_pose(const WristParams& params, const JointState& q);

/// Fixed mount T_{E,C}.
Pose camera_mount(const WristParams& params);

/// Camera frame relative to the forearm base, T_{B,C}(q).
Pose forward_kinematics(const WristParams& params, const JointState& q);

/// Columns are the end-effector twists (in E) per unit joint velocity.
JointJacobian joint_jacobian(const WristParams& params, const JointState& q,
                             JointSelector joints = JointSelector::Both);

/// Palm normal expressed in the forearm base frame.
Vec3 palm_normal_world(const WristParams& params, const JointState& q);

/// Throws JointLimitViolation when limits are enforced and q is outside them.
void check_limits(const WristParams& params, const JointState& q);

JointState clamp_to_limits(const WristParams& params, const JointState& q);

struct IntegrationResult {
  JointState q;
  /// Some joint was stopped at a limit.
  bool saturated = false;
};

/// Explicit Euler step. Full-revolution joints wrap around; the others are
/// clamped at their limits.
IntegrationResult integrate_joints(const WristParams& params, const JointState& q,
                                   const JointVelocity& qdot, double dt);

}  // namespace wristservo
