#include "wristservo/sampling.hpp"

#include <cmath>
#include <string>

#include "wristservo/errors.hpp"
#include "wristservo/render.hpp"

namespace wristservo {

void HemisphereSampler::validate() const {
  if (!(radius_min > 0.0 && radius_min < radius_max)) {
    throw InvalidArgument("radius range must satisfy 0 < min < max");
  }
  if (radius_bins < 1 || points_per_bin < 1) {
    throw InvalidArgument("radius_bins and points_per_bin must be >= 1");
  }
  if (roll_max < 0.0 || look_jitter < 0.0) {
    throw InvalidArgument("roll_max and look_jitter must be non-negative");
  }
  if (max_attempts < 1) throw InvalidArgument("max_attempts must be >= 1");
}

Pose look_at_camera(const Vec3& eye, const Vec3& target, double roll) {
  const Vec3 z = (target - eye).normalized();
  Vec3 up = Vec3::UnitZ();
  if (z.cross(up).norm() < 1e-6) up = Vec3::UnitY();
  const Vec3 x = z.cross(up).normalized();
  const Vec3 y = z.cross(x);
  Mat3 r;
  r.col(0) = x;
  r.col(1) = y;
  r.col(2) = z;
  return Pose(orthonormalize(r * rot_z(roll)), eye);
}

bool object_in_view(const CameraIntrinsics& intrinsics, const Pose& camera_pose,
                    const SceneObject& scene, int margin_px) {
  std::vector<PartMask> masks;
  try {
    masks = render_part_masks(intrinsics, camera_pose, scene);
  } catch (const NothingVisible&) {
    return false;
  }
  for (const PartMask& m : masks) {
    for (const Pixel& p : m.pixels) {
      if (p.u < margin_px || p.v < margin_px || p.u >= intrinsics.width - margin_px ||
          p.v >= intrinsics.height - margin_px) {
        return false;
      }
    }
  }
  return true;
}

namespace {

HemispherePoint draw(const HemisphereSampler& s, PortableRng& rng, int bin) {
  HemispherePoint p;
  p.bin = bin;
  // Archimedes: z uniform on [0, 1] with uniform azimuth is area-uniform on the hemisphere.
  const double z = rng.uniform();
  const double phi = rng.uniform(0.0, 2.0 * kPi);
  const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
  p.direction = Vec3(rho * std::cos(phi), rho * std::sin(phi), z);
  const double width = (s.radius_max - s.radius_min) / s.radius_bins;
  p.radius = s.radius_min + (bin + rng.uniform()) * width;
  p.look_target = s.center + Vec3(rng.uniform(-s.look_jitter, s.look_jitter),
                                  rng.uniform(-s.look_jitter, s.look_jitter),
                                  rng.uniform(-s.look_jitter, s.look_jitter));
  p.roll = rng.uniform(0.0, s.roll_max);
  return p;
}

}  // namespace

std::vector<HemispherePoint> sample_hemisphere_points(const HemisphereSampler& sampler) {
  sampler.validate();
  PortableRng rng(sampler.seed);
  std::vector<HemispherePoint> out;
  out.reserve(static_cast<std::size_t>(sampler.radius_bins) * sampler.points_per_bin);
  for (int bin = 0; bin < sampler.radius_bins; ++bin) {
    for (int i = 0; i < sampler.points_per_bin; ++i) out.push_back(draw(sampler, rng, bin));
  }
  return out;
}

ViewpointGenerator::ViewpointGenerator(HemisphereSampler sampler, const SceneObject& scene,
                                       WristParams params, CameraIntrinsics intrinsics)
    : sampler_(std::move(sampler)),
      scene_(scene),
      params_(std::move(params)),
      intrinsics_(intrinsics),
      rng_(sampler_.seed) {
  sampler_.validate();
}

HemispherePoint ViewpointGenerator::draw_point(int bin) { return draw(sampler_, rng_, bin); }

std::optional<Viewpoint> ViewpointGenerator::next(int bin) {
  Viewpoint vp;
  vp.index = count_++;
  vp.point = draw_point(bin);
  const Vec3 eye = sampler_.center + vp.point.radius * vp.point.direction;
  vp.camera_pose = look_at_camera(eye, vp.point.look_target, vp.point.roll);
  // Hand placed so that the zero-configuration camera sits at the sampled point.
  vp.hand_pose = compose(vp.camera_pose, inverse(forward_kinematics(params_, JointState{})));

  for (int attempt = 1; attempt <= sampler_.max_attempts; ++attempt) {
    const JointState q{rng_.uniform(params_.wfe_limits.min, params_.wfe_limits.max),
                       rng_.uniform(params_.wps_limits.min, params_.wps_limits.max)};
    const Pose camera = compose(vp.hand_pose, forward_kinematics(params_, q));
    if (object_in_view(intrinsics_, camera, scene_)) {
      vp.q0 = q;
      vp.attempts = attempt;
      return vp;
    }
  }
  return std::nullopt;
}

std::vector<Viewpoint> sample_hemisphere(const HemisphereSampler& sampler, const SceneObject& scene,
                                         const WristParams& params,
                                         const CameraIntrinsics& intrinsics) {
  ViewpointGenerator gen(sampler, scene, params, intrinsics);
  std::vector<Viewpoint> out;
  for (int bin = 0; bin < sampler.radius_bins; ++bin) {
    for (int i = 0; i < sampler.points_per_bin; ++i) {
      auto vp = gen.next(bin);
      if (!vp) {
        throw SamplingExhausted("no in-view wrist configuration after " +
                                std::to_string(sampler.max_attempts) + " attempts");
      }
      out.push_back(*vp);
    }
  }
  return out;
}

}  // namespace wristservo
