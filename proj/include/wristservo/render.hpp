#pragma once

#include <vector>

#include "wristservo/camera.hpp"
#include "wristservo/masks.hpp"
#include "wristservo/scene.hpp"

namespace wristservo {

/// Z-buffer of one render: per pixel the nearest depth (meters, +inf when empty)
/// and the index of the part that owns it (-1 when empty).
struct DepthImage {
  int width = 0;
  int height = 0;
  std::vector<double> depth;
  std::vector<int> part;
  /// Bounding box of covered pixels; empty when u_min > u_max.
  int u_min = 0, v_min = 0, u_max = -1, v_max = -1;

  /// Resizes and clears; only the previously covered box is wiped when the size is unchanged.
  void reset(int new_width, int new_height);

  int part_at(int u, int v) const { return part[static_cast<std::size_t>(v) * width + u]; }
  double depth_at(int u, int v) const { return depth[static_cast<std::size_t>(v) * width + u]; }
};

/// Rasterizes every part with `camera_from_object` (T_{c,o}); the object's own
/// world pose is ignored. Triangles are clipped at the near plane.
DepthImage rasterize(const CameraIntrinsics& intrinsics, const Pose& camera_from_object,
                     const SceneObject& object, double near_plane = 1e-3);

/// Same as `rasterize`, reusing the buffers of `img`.
void rasterize_into(DepthImage& img, const CameraIntrinsics& intrinsics,
                    const Pose& camera_from_object, const SceneObject& object,
                    double near_plane = 1e-3);

/// Masks of the visible parts as seen from the camera at T_{c,o}. Throws
/// NothingVisible when no pixel is covered.
std::vector<PartMask> render_part_masks_from(const CameraIntrinsics& intrinsics,
                                             const Pose& camera_from_object,
                                             const SceneObject& object);

/// Same, with the camera placed in the world (T_{w,c}) and the object at `object.pose`.
std::vector<PartMask> render_part_masks(const CameraIntrinsics& intrinsics,
                                        const Pose& camera_pose, const SceneObject& object);

}  // namespace wristservo
