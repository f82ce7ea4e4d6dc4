#include "wristservo/wrist_model.hpp"

#include <cmath>
#include <string>

#include "wristservo/errors.hpp"

namespace wristservo {

namespace {

const Vec3 kWpsAxis = Vec3::UnitZ();
const Vec3 kWfeAxis = -Vec3::UnitX();
const Vec3 kWristPoint = Vec3::Zero();

}  // namespace

double JointLimits::wrap(double q) const {
  const double turn = 2.0 * kPi;
  double r = std::fmod(q - min, turn);
  if (r < 0.0) r += turn;
  return min + r;
}

WristParams WristParams::hannes() {
  WristParams p;
  const Vec3 optical_axis = rot_x(-p.camera_tilt) * Vec3::UnitZ();
  p.palm_normal_local = axis_angle(kWfeAxis, -p.camera_tilt) * optical_axis;
  return p;
}

void WristParams::validate() const {
  if (!(camera_tilt > 0.0 && camera_tilt < kPi / 2)) {
    throw InvalidArgument("camera_tilt must lie in (0, pi/2)");
  }
  if (!(wfe_limits.min < wfe_limits.max) || !(wps_limits.min < wps_limits.max)) {
    throw InvalidArgument("joint limits must satisfy min < max");
  }
  if (!camera_offset.allFinite()) throw InvalidArgument("camera_offset must be finite");
  if (std::abs(palm_normal_local.norm() - 1.0) > 1e-9) {
    throw InvalidArgument("palm_normal_local must be a unit vector");
  }
}

void check_limits(const WristParams& params, const JointState& q) {
  if (!std::isfinite(q.wfe) || !std::isfinite(q.wps)) {
    throw JointLimitViolation("joint state is not finite");
  }
  if (!params.enforce_limits) return;
  if (!params.wfe_limits.contains(q.wfe)) {
    throw JointLimitViolation("WFE " + std::to_string(rad2deg(q.wfe)) + " deg outside limits");
  }
  if (!params.wps_limits.contains(q.wps)) {
    throw JointLimitViolation("WPS " + std::to_string(rad2deg(q.wps)) + " deg outside limits");
  }
}

JointState clamp_to_limits(const WristParams& params, const JointState& q) {
  return {params.wfe_limits.clamp(q.wfe), params.wps_limits.clamp(q.wps)};
}

IntegrationResult integrate_joints(const WristParams& params, const JointState& q,
                                   const JointVelocity& qdot, double dt) {
  const JointState next{q.wfe + qdot.wfe * dt, q.wps + qdot.wps * dt};
  if (!params.enforce_limits) return {next, false};
  IntegrationResult out;
  auto settle = [&](const JointLimits& limits, double value) {
    if (limits.full_revolution()) return limits.wrap(value);
    const double c = limits.clamp(value);
    if (c != value) out.saturated = true;
    return c;
  };
  out.q = {settle(params.wfe_limits, next.wfe), settle(params.wps_limits, next.wps)};
  return out;
}

Pose end_effector_pose(const WristParams& params, const JointState& q) {
  check_limits(params, q);
  const Mat3 r = axis_angle(kWpsAxis, q.wps) * axis_angle(kWfeAxis, q.wfe);
  return Pose::unchecked(r, kWristPoint);
}

Pose camera_mount(const WristParams& params) {
  return Pose(rot_x(-params.camera_tilt), params.camera_offset);
}

Pose forward_kinematics(const WristParams& params, const JointState& q) {
  return compose(end_effector_pose(params, q), camera_mount(params));
}

JointJacobian joint_jacobian(const WristParams& params, const JointState& q,
                             JointSelector joints) {
  const Pose ee = end_effector_pose(params, q);
  const Mat3 rt = ee.rotation().transpose();

  // Joint axes in B. WPS is fixed; WFE is carried by the WPS rotation.
  const Vec3 wps_axis = kWpsAxis;
  const Vec3 wfe_axis = axis_angle(kWpsAxis, q.wps) * kWfeAxis;

  auto column = [&](const Vec3& axis, const Vec3& point) {
    Vec6 c;
    c << rt * axis.cross(ee.translation() - point), rt * axis;
    return c;
  };

  JointJacobian j;
  switch (joints) {
    case JointSelector::Both:
      j.resize(6, 2);
      j.col(0) = column(wfe_axis, kWristPoint);
      j.col(1) = column(wps_axis, kWristPoint);
      break;
    case JointSelector::WfeOnly:
      j.resize(6, 1);
      j.col(0) = column(wfe_axis, kWristPoint);
      break;
    case JointSelector::WpsOnly:
      j.resize(6, 1);
      j.col(0) = column(wps_axis, kWristPoint);
      break;
  }
  return j;
}

Vec3 palm_normal_world(const WristParams& params, const JointState& q) {
  return end_effector_pose(params, q).rotation() * params.palm_normal_local;
}

}  // namespace wristservo
