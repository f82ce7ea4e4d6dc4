#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wristservo/camera.hpp"
#include "wristservo/geometry.hpp"
#include "wristservo/random.hpp"
#include "wristservo/scene.hpp"
#include "wristservo/wrist_model.hpp"

namespace wristservo {

/// Viewpoints on the upper hemisphere around an object, area-uniform in direction
/// and stratified in radius.
struct HemisphereSampler {
  Vec3 center = Vec3::Zero();
  double radius_min = 0.2;
  double radius_max = 1.0;
  int radius_bins = 6;
  int points_per_bin = 400;
  /// Roll about the optical axis is drawn from [0, roll_max].
  double roll_max = deg2rad(90.0);
  /// The look-at point is jittered uniformly inside a cube of this half size.
  double look_jitter = 0.02;
  /// Rejection budget for the in-view wrist configuration of one point.
  int max_attempts = 1000;
  std::uint64_t seed = 0;

  void validate() const;
};

struct HemispherePoint {
  Vec3 direction = Vec3::UnitZ();
  double radius = 0.0;
  int bin = 0;
  Vec3 look_target = Vec3::Zero();
  double roll = 0.0;
};

struct Viewpoint {
  int index = 0;
  HemispherePoint point;
  /// Camera pose at q = (0, 0), T_{w,c}.
  Pose camera_pose;
  /// Forearm base pose T_{w,B}; the hand is held here during an episode.
  Pose hand_pose;
  JointState q0;
  int attempts = 0;
};

/// Camera at `eye` looking at `target` with image y pointing away from world +z,
/// then rolled about the optical axis.
Pose look_at_camera(const Vec3& eye, const Vec3& target, double roll = 0.0);

/// Object fully inside the image (no mask pixel within `margin_px` of the border).
bool object_in_view(const CameraIntrinsics& intrinsics, const Pose& camera_pose,
                    const SceneObject& scene, int margin_px = 2);

/// Draws points bin by bin, points_per_bin each; no rendering involved.
std::vector<HemispherePoint> sample_hemisphere_points(const HemisphereSampler& sampler);

/// Sequential source of viewpoints; one RNG stream makes the sequence a pure
/// function of the seed.
class ViewpointGenerator {
 public:
  ViewpointGenerator(HemisphereSampler sampler, const SceneObject& scene, WristParams params,
                     CameraIntrinsics intrinsics);

  /// Next viewpoint in radius bin `bin`; nullopt when no in-view wrist
  /// configuration was found within the attempt budget.
  std::optional<Viewpoint> next(int bin);

 private:
  HemispherePoint draw_point(int bin);

  HemisphereSampler sampler_;
  const SceneObject& scene_;
  WristParams params_;
  CameraIntrinsics intrinsics_;
  PortableRng rng_;
  int count_ = 0;
};

/// Full stratified set of viewpoints with random in-view wrist configurations.
/// Throws SamplingExhausted when a point cannot be given an in-view configuration.
std::vector<Viewpoint> sample_hemisphere(const HemisphereSampler& sampler, const SceneObject& scene,
                                         const WristParams& params,
                                         const CameraIntrinsics& intrinsics);

}  // namespace wristservo
