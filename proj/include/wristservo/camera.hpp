#pragma once

#include "wristservo/geometry.hpp"

namespace wristservo {

/// Pinhole intrinsics. Pixel (u, v) samples the image plane at integer coordinates.
struct CameraIntrinsics {
  double fx = 460.0;
  double fy = 460.0;
  double cx = 320.0;
  double cy = 240.0;
  int width = 640;
  int height = 480;

  void validate() const;

  /// Same field of view at another resolution.
  CameraIntrinsics scaled_to(int new_width, int new_height) const;
};

/// Normalized image-plane point with its depth.
struct FeaturePoint {
  double x = 0.0;
  double y = 0.0;
  double depth = 1.0;

  Vec2 xy() const { return {x, y}; }
};

Vec2 project_point(const CameraIntrinsics& intrinsics, const Vec3& p_camera);

FeaturePoint to_feature(const CameraIntrinsics& intrinsics, const Vec2& centroid_px, double depth);

/// Image-center target feature.
inline FeaturePoint center_feature(double depth = 1.0) { return {0.0, 0.0, depth}; }

}  // namespace wristservo
