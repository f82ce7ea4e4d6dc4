#pragma once

#include <Eigen/Core>
#include <string_view>

#include "wristservo/camera.hpp"
#include "wristservo/geometry.hpp"
#include "wristservo/wrist_model.hpp"

namespace wristservo {

/// Point-feature interaction matrix (k = 2) acting on camera twists (v, w).
using InteractionMatrix = Eigen::Matrix<double, 2, 6>;

enum class ControllerKind { StandardIbvs, PartitionedIbvs };

std::string_view to_string(ControllerKind kind);
ControllerKind parse_controller(std::string_view text);

/// Which WPS direction counts as the inward rotation.
enum class Handedness { RightArm, LeftArm };

struct ControllerConfig {
  double lambda = 0.8;
  double lambda_wps = 0.4;
  double convergence_eps = 0.01;
  int convergence_hold = 5;
  int max_iterations = 1500;
  double dt = 1.0 / 15.0;
  double damping = 0.0;
  double pinv_tolerance = 1e-10;
  Handedness handedness = Handedness::RightArm;
  double naturalness_threshold = deg2rad(90.0);

  void validate() const;
};

/// e = s - s*.
inline Vec2 feature_error(const FeaturePoint& s, const FeaturePoint& target) {
  return s.xy() - target.xy();
}

InteractionMatrix interaction_matrix_point(const FeaturePoint& f);

/// ᶜV_e for the palm camera.
VelocityTransform camera_from_effector_transform(const WristParams& params);

/// L_s ᶜV_e ᵉJ_e(q) for the selected joints.
Eigen::MatrixXd task_jacobian(const FeaturePoint& f, const JointState& q, const WristParams& params,
                              JointSelector joints);

/// Standard IBVS over WFE and WPS: qdot = -lambda (L V J)^+ (s - s*).
JointVelocity sibvs_step(const FeaturePoint& f, const FeaturePoint& target, const JointState& q,
                         const WristParams& params, const ControllerConfig& cfg);

/// +1 / -1 / 0 applied to |e_wps|, decided only by the side of the vertical
/// centerline the centroid sits on.
int wps_rotation_sign(double centroid_u, const CameraIntrinsics& intrinsics, Handedness handedness);

/// Partitioned IBVS: WFE from the one-column IBVS law, WPS from
/// sign * lambda_wps * |e_wps| with e_wps the horizontal centroid offset in
/// normalized units.
JointVelocity ppibvs_step(const FeaturePoint& f, const FeaturePoint& target, const JointState& q,
                          const WristParams& params, const ControllerConfig& cfg,
                          const Vec2& centroid_px, const CameraIntrinsics& intrinsics);

/// Palm origin (the palm camera position) in the world.
Vec3 palm_origin_world(const WristParams& params, const JointState& q, const Pose& hand_pose);

/// True when the palm normal makes an angle below `threshold` with the palm-to-object direction.
bool naturalness(const WristParams& params, const JointState& q_final, const Pose& hand_pose,
                 const Vec3& object_centroid_world, double threshold = deg2rad(90.0));

}  // namespace wristservo
