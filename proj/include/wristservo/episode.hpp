#pragma once

#include <vector>

#include "wristservo/camera.hpp"
#include "wristservo/masks.hpp"
#include "wristservo/scene.hpp"
#include "wristservo/servo.hpp"
#include "wristservo/wrist_model.hpp"

namespace wristservo {

struct EpisodeOptions {
  double adjacency_px = 3.0;
  bool use_mask_depth = true;
  /// Used for Z when `use_mask_depth` is false.
  double constant_depth = 0.3;
};

/// Whole-object feature extracted from one rendered frame.
struct ObjectObservation {
  FeaturePoint feature;
  Vec2 centroid_px = Vec2::Zero();
  std::size_t pixel_count = 0;
};

/// Renders the object, merges neighbouring part masks and picks the region
/// nearest to the image center. Throws NothingVisible.
ObjectObservation observe_object(const CameraIntrinsics& intrinsics, const Pose& camera_pose,
                                 const SceneObject& scene, const EpisodeOptions& options = {});

/// Feature from an already selected region.
FeaturePoint region_feature(const CameraIntrinsics& intrinsics, const MergedRegion& region,
                            const EpisodeOptions& options = {});

struct TrajectoryStep {
  JointState q;
  FeaturePoint feature;
  double error_norm = 0.0;
};

struct EpisodeResult {
  ControllerKind controller = ControllerKind::StandardIbvs;
  bool converged = false;
  int iterations = 0;
  double final_error_norm = 0.0;
  bool natural = false;
  /// A joint hit its limit at least once.
  bool saturated = false;
  /// The object left the field of view mid-episode.
  bool lost_view = false;
  JointVelocity first_command;
  /// Initial state followed by one entry per control step.
  std::vector<TrajectoryStep> trajectory;
};

/// Runs one closed-loop episode with the forearm held at `hand_pose` (T_{w,B}).
/// Throws NothingVisible when the object is not visible at q0.
EpisodeResult simulate_episode(ControllerKind controller, const SceneObject& scene,
                               const Pose& hand_pose, const JointState& q0,
                               const WristParams& params, const CameraIntrinsics& intrinsics,
                               const ControllerConfig& cfg, const EpisodeOptions& options = {});

}  // namespace wristservo
