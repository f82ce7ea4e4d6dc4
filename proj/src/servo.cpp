#include "wristservo/servo.hpp"

#include <cmath>
#include <string>

#include "wristservo/errors.hpp"

namespace wristservo {

std::string_view to_string(ControllerKind kind) {
  return kind == ControllerKind::StandardIbvs ? "s-IBVS" : "pp-IBVS";
}

ControllerKind parse_controller(std::string_view text) {
  if (text == "s-IBVS" || text == "sibvs" || text == "s-ibvs" || text == "s") return ControllerKind::StandardIbvs;
  if (text == "pp-IBVS" || text == "ppibvs" || text == "pp-ibvs" || text == "pp") {
    return ControllerKind::PartitionedIbvs;
  }
  throw InvalidArgument("unknown controller '" + std::string(text) + "'");
}

void ControllerConfig::validate() const {
  if (!(lambda > 0.0 && lambda_wps > 0.0)) throw InvalidArgument("gains must be positive");
  if (!(convergence_eps > 0.0)) throw InvalidArgument("convergence_eps must be positive");
  if (convergence_hold < 1) throw InvalidArgument("convergence_hold must be >= 1");
  if (max_iterations < 1) throw InvalidArgument("max_iterations must be >= 1");
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (damping < 0.0) throw InvalidArgument("damping must be non-negative");
  if (!(pinv_tolerance > 0.0)) throw InvalidArgument("pinv_tolerance must be positive");
}

InteractionMatrix interaction_matrix_point(const FeaturePoint& f) {
  if (!(f.depth > 0.0)) throw NonPositiveDepth("feature depth must be positive");
  const double x = f.x;
  const double y = f.y;
  const double iz = 1.0 / f.depth;
  InteractionMatrix l;
  l << -iz, 0.0, x * iz, x * y, -(1.0 + x * x), y,
       0.0, -iz, y * iz, 1.0 + y * y, -x * y, -x;
  return l;
}

VelocityTransform camera_from_effector_transform(const WristParams& params) {
  return velocity_transform(inverse(camera_mount(params)));
}

Eigen::MatrixXd task_jacobian(const FeaturePoint& f, const JointState& q, const WristParams& params,
                              JointSelector joints) {
  const InteractionMatrix l = interaction_matrix_point(f);
  return l * camera_from_effector_transform(params).matrix * joint_jacobian(params, q, joints);
}

JointVelocity sibvs_step(const FeaturePoint& f, const FeaturePoint& target, const JointState& q,
                         const WristParams& params, const ControllerConfig& cfg) {
  const Eigen::MatrixXd a = task_jacobian(f, q, params, JointSelector::Both);
  const Eigen::Vector2d qdot =
      -cfg.lambda * pseudo_inverse(a, cfg.pinv_tolerance, cfg.damping) * feature_error(f, target);
  return {qdot(0), qdot(1)};
}

int wps_rotation_sign(double centroid_u, const CameraIntrinsics& intrinsics,
                      Handedness handedness) {
  // With the palm camera tilted toward the palm, positive WPS moves the image
  // center to the right; a right arm therefore rotates positively for objects
  // left of the centerline.
  int side = 0;
  if (centroid_u < intrinsics.cx) side = 1;
  if (centroid_u > intrinsics.cx) side = -1;
  return handedness == Handedness::RightArm ? side : -side;
}

JointVelocity ppibvs_step(const FeaturePoint& f, const FeaturePoint& target, const JointState& q,
                          const WristParams& params, const ControllerConfig& cfg,
                          const Vec2& centroid_px, const CameraIntrinsics& intrinsics) {
  const Eigen::MatrixXd a = task_jacobian(f, q, params, JointSelector::WfeOnly);
  const Eigen::VectorXd wfe =
      -cfg.lambda * pseudo_inverse(a, cfg.pinv_tolerance, cfg.damping) * feature_error(f, target);

  const double e_wps = (intrinsics.cx - centroid_px.x()) / intrinsics.fx;
  const int sign = wps_rotation_sign(centroid_px.x(), intrinsics, cfg.handedness);
  return {wfe(0), sign * cfg.lambda_wps * std::abs(e_wps)};
}

Vec3 palm_origin_world(const WristParams& params, const JointState& q, const Pose& hand_pose) {
  return hand_pose.transform_point(forward_kinematics(params, q).translation());
}

bool naturalness(const WristParams& params, const JointState& q_final, const Pose& hand_pose,
                 const Vec3& object_centroid_world, double threshold) {
  const Vec3 normal = hand_pose.transform_vector(palm_normal_world(params, q_final));
  const Vec3 to_object = object_centroid_world - palm_origin_world(params, q_final, hand_pose);
  if (to_object.norm() == 0.0) return false;
  return normal.normalized().dot(to_object.normalized()) > std::cos(threshold);
}

}  // namespace wristservo
