#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wristservo/geometry.hpp"

namespace wristservo {

/// Wrist configuration class attached to an object part.
enum class PartLabel { TopGrasp = 0, SideGrasp = 1, NoGrasp = 2 };

std::string_view to_string(PartLabel label);
std::optional<PartLabel> parse_part_label(std::string_view text);

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;

  double area() const;
  /// Area-weighted mean of triangle centroids.
  Vec3 surface_centroid() const;
};

struct ObjectPart {
  PartLabel label = PartLabel::NoGrasp;
  TriangleMesh mesh;
};

/// Object made of labeled parts; `pose` places the object frame in the world (T_{w,o}).
struct SceneObject {
  std::vector<ObjectPart> parts;
  Pose pose;

  /// Throws InvalidArgument when there are no parts, indices are out of range or
  /// a triangle has (near) zero area.
  void validate() const;

  /// Surface centroid of all parts, in the object frame.
  Vec3 centroid_local() const;
  Vec3 centroid_world() const { return pose.transform_point(centroid_local()); }
};

TriangleMesh make_box(const Vec3& center, const Vec3& half_extents);

/// Closed cylinder along z between z0 and z1. `bottom_cap`/`top_cap` toggle the disks.
TriangleMesh make_cylinder(const Vec3& base_center, double radius, double height, int segments,
                           bool bottom_cap = true, bool top_cap = true);

TriangleMesh make_uv_sphere(const Vec3& center, double radius, int stacks, int slices);

/// Two-part bottle: body cylinder (SideGrasp) and cap (TopGrasp), base on z = 0.
SceneObject make_bottle(const Pose& pose = Pose::identity());

}  // namespace wristservo
