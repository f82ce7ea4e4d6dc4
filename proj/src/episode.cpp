#include "wristservo/episode.hpp"

#include "wristservo/errors.hpp"
#include "wristservo/render.hpp"

namespace wristservo {

FeaturePoint region_feature(const CameraIntrinsics& intrinsics, const MergedRegion& region,
                            const EpisodeOptions& options) {
  const double depth = options.use_mask_depth ? region.mean_depth : options.constant_depth;
  return to_feature(intrinsics, region.centroid, depth);
}

ObjectObservation observe_object(const CameraIntrinsics& intrinsics, const Pose& camera_pose,
                                 const SceneObject& scene, const EpisodeOptions& options) {
  const std::vector<PartMask> masks = render_part_masks(intrinsics, camera_pose, scene);
  const std::vector<MergedRegion> regions = merge_object_mask(masks, options.adjacency_px);
  const MergedRegion& region =
      select_nearest_to_center(std::span<const MergedRegion>(regions), intrinsics);
  return {region_feature(intrinsics, region, options), region.centroid, region.pixels.size()};
}

EpisodeResult simulate_episode(ControllerKind controller, const SceneObject& scene,
                               const Pose& hand_pose, const JointState& q0,
                               const WristParams& params, const CameraIntrinsics& intrinsics,
                               const ControllerConfig& cfg, const EpisodeOptions& options) {
  cfg.validate();
  check_limits(params, q0);
  const FeaturePoint target = center_feature();

  auto observe = [&](const JointState& q) {
    return observe_object(intrinsics, compose(hand_pose, forward_kinematics(params, q)), scene,
                          options);
  };

  EpisodeResult result;
  result.controller = controller;
  JointState q = q0;
  ObjectObservation obs = observe(q);  // NothingVisible here rejects the episode
  double err = feature_error(obs.feature, target).norm();
  result.trajectory.push_back({q, obs.feature, err});

  int held = 0;
  for (int it = 0;; ++it) {
    held = err < cfg.convergence_eps ? held + 1 : 0;
    if (held >= cfg.convergence_hold) {
      result.converged = true;
      break;
    }
    if (it >= cfg.max_iterations) break;

    const JointVelocity qdot =
        controller == ControllerKind::StandardIbvs
            ? sibvs_step(obs.feature, target, q, params, cfg)
            : ppibvs_step(obs.feature, target, q, params, cfg, obs.centroid_px, intrinsics);
    if (it == 0) result.first_command = qdot;

    const IntegrationResult step = integrate_joints(params, q, qdot, cfg.dt);
    result.saturated = result.saturated || step.saturated;
    q = step.q;
    ++result.iterations;

    try {
      obs = observe(q);
    } catch (const NothingVisible&) {
      // Keep one trajectory row per step; the feature is the last one seen.
      result.lost_view = true;
      result.trajectory.push_back({q, obs.feature, err});
      break;
    }
    err = feature_error(obs.feature, target).norm();
    result.trajectory.push_back({q, obs.feature, err});
  }

  result.final_error_norm = err;
  result.natural = naturalness(params, q, hand_pose, scene.centroid_world(),
                               cfg.naturalness_threshold);
  return result;
}

}  // namespace wristservo
