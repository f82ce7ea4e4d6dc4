#include "wristservo/camera.hpp"

#include "wristservo/errors.hpp"

namespace wristservo {

void CameraIntrinsics::validate() const {
  if (!(fx > 0.0 && fy > 0.0)) throw InvalidArgument("focal lengths must be positive");
  if (width <= 0 || height <= 0) throw InvalidArgument("image size must be positive");
  if (!(cx > 0.0 && cx < width && cy > 0.0 && cy < height)) {
    throw InvalidArgument("principal point must lie inside the image");
  }
}

CameraIntrinsics CameraIntrinsics::scaled_to(int new_width, int new_height) const {
  const double sx = static_cast<double>(new_width) / width;
  const double sy = static_cast<double>(new_height) / height;
  CameraIntrinsics out{fx * sx, fy * sy, cx * sx, cy * sy, new_width, new_height};
  out.validate();
  return out;
}

Vec2 project_point(const CameraIntrinsics& intrinsics, const Vec3& p_camera) {
  if (!(p_camera.z() > 0.0)) throw BehindCamera("point is not in front of the camera");
  return {intrinsics.fx * p_camera.x() / p_camera.z() + intrinsics.cx,
          intrinsics.fy * p_camera.y() / p_camera.z() + intrinsics.cy};
}

FeaturePoint to_feature(const CameraIntrinsics& intrinsics, const Vec2& centroid_px,
                        double depth) {
  if (!(depth > 0.0)) throw NonPositiveDepth("feature depth must be positive");
  return {(centroid_px.x() - intrinsics.cx) / intrinsics.fx,
          (centroid_px.y() - intrinsics.cy) / intrinsics.fy, depth};
}

}  // namespace wristservo
