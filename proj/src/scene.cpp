#include "wristservo/scene.hpp"

#include <cmath>

#include "wristservo/errors.hpp"

namespace wristservo {

std::string_view to_string(PartLabel label) {
  switch (label) {
    case PartLabel::TopGrasp: return "TopGrasp";
    case PartLabel::SideGrasp: return "SideGrasp";
    case PartLabel::NoGrasp: return "NoGrasp";
  }
  return "NoGrasp";
}

std::optional<PartLabel> parse_part_label(std::string_view text) {
  if (text == "TopGrasp" || text == "top_grasp" || text == "top") return PartLabel::TopGrasp;
  if (text == "SideGrasp" || text == "side_grasp" || text == "side") return PartLabel::SideGrasp;
  if (text == "NoGrasp" || text == "no_grasp" || text == "none") return PartLabel::NoGrasp;
  return std::nullopt;
}

namespace {

double triangle_area(const TriangleMesh& m, const std::array<int, 3>& t) {
  const Vec3& a = m.vertices[t[0]];
  return 0.5 * (m.vertices[t[1]] - a).cross(m.vertices[t[2]] - a).norm();
}

}  // namespace

double TriangleMesh::area() const {
  double total = 0.0;
  for (const auto& t : triangles) total += triangle_area(*this, t);
  return total;
}

Vec3 TriangleMesh::surface_centroid() const {
  Vec3 acc = Vec3::Zero();
  double total = 0.0;
  for (const auto& t : triangles) {
    const double a = triangle_area(*this, t);
    acc += a * (vertices[t[0]] + vertices[t[1]] + vertices[t[2]]) / 3.0;
    total += a;
  }
  return total > 0.0 ? Vec3(acc / total) : Vec3::Zero();
}

void SceneObject::validate() const {
  if (parts.empty()) throw InvalidArgument("scene object has no parts");
  for (const ObjectPart& part : parts) {
    if (part.mesh.triangles.empty()) throw InvalidArgument("object part has an empty mesh");
    const int n = static_cast<int>(part.mesh.vertices.size());
    for (const auto& t : part.mesh.triangles) {
      for (int idx : t) {
        if (idx < 0 || idx >= n) throw InvalidArgument("triangle index out of range");
      }
      if (triangle_area(part.mesh, t) < 1e-14) {
        throw InvalidArgument("degenerate (zero-area) triangle");
      }
    }
  }
}

Vec3 SceneObject::centroid_local() const {
  Vec3 acc = Vec3::Zero();
  double total = 0.0;
  for (const ObjectPart& part : parts) {
    const double a = part.mesh.area();
    acc += a * part.mesh.surface_centroid();
    total += a;
  }
  return total > 0.0 ? Vec3(acc / total) : Vec3::Zero();
}

TriangleMesh make_box(const Vec3& center, const Vec3& h) {
  TriangleMesh m;
  for (int i = 0; i < 8; ++i) {
    m.vertices.push_back(center + Vec3((i & 1) ? h.x() : -h.x(), (i & 2) ? h.y() : -h.y(),
                                       (i & 4) ? h.z() : -h.z()));
  }
  const int quads[6][4] = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4},
                           {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
  for (const auto& q : quads) {
    m.triangles.push_back({q[0], q[1], q[2]});
    m.triangles.push_back({q[0], q[2], q[3]});
  }
  return m;
}

TriangleMesh make_cylinder(const Vec3& base_center, double radius, double height, int segments,
                           bool bottom_cap, bool top_cap) {
  TriangleMesh m;
  for (int i = 0; i < segments; ++i) {
    const double a = 2.0 * kPi * i / segments;
    const Vec3 rim(radius * std::cos(a), radius * std::sin(a), 0.0);
    m.vertices.push_back(base_center + rim);
    m.vertices.push_back(base_center + rim + Vec3(0.0, 0.0, height));
  }
  for (int i = 0; i < segments; ++i) {
    const int j = (i + 1) % segments;
    m.triangles.push_back({2 * i, 2 * j, 2 * j + 1});
    m.triangles.push_back({2 * i, 2 * j + 1, 2 * i + 1});
  }
  if (bottom_cap) {
    const int c = static_cast<int>(m.vertices.size());
    m.vertices.push_back(base_center);
    for (int i = 0; i < segments; ++i) m.triangles.push_back({c, 2 * ((i + 1) % segments), 2 * i});
  }
  if (top_cap) {
    const int c = static_cast<int>(m.vertices.size());
    m.vertices.push_back(base_center + Vec3(0.0, 0.0, height));
    for (int i = 0; i < segments; ++i) {
      m.triangles.push_back({c, 2 * i + 1, 2 * ((i + 1) % segments) + 1});
    }
  }
  return m;
}

TriangleMesh make_uv_sphere(const Vec3& center, double radius, int stacks, int slices) {
  TriangleMesh m;
  m.vertices.push_back(center + Vec3(0.0, 0.0, radius));
  for (int s = 1; s < stacks; ++s) {
    const double phi = kPi * s / stacks;
    for (int k = 0; k < slices; ++k) {
      const double theta = 2.0 * kPi * k / slices;
      m.vertices.push_back(center + radius * Vec3(std::sin(phi) * std::cos(theta),
                                                  std::sin(phi) * std::sin(theta),
                                                  std::cos(phi)));
    }
  }
  const int south = static_cast<int>(m.vertices.size());
  m.vertices.push_back(center + Vec3(0.0, 0.0, -radius));
  auto ring = [&](int s, int k) { return 1 + (s - 1) * slices + (k % slices); };
  for (int k = 0; k < slices; ++k) m.triangles.push_back({0, ring(1, k), ring(1, k + 1)});
  for (int s = 1; s < stacks - 1; ++s) {
    for (int k = 0; k < slices; ++k) {
      m.triangles.push_back({ring(s, k), ring(s + 1, k), ring(s + 1, k + 1)});
      m.triangles.push_back({ring(s, k), ring(s + 1, k + 1), ring(s, k + 1)});
    }
  }
  for (int k = 0; k < slices; ++k) {
    m.triangles.push_back({south, ring(stacks - 1, k + 1), ring(stacks - 1, k)});
  }
  return m;
}

SceneObject make_bottle(const Pose& pose) {
  SceneObject obj;
  obj.pose = pose;
  obj.parts.push_back(
      {PartLabel::SideGrasp, make_cylinder(Vec3::Zero(), 0.03, 0.15, 32, true, true)});
  obj.parts.push_back(
      {PartLabel::TopGrasp, make_cylinder(Vec3(0.0, 0.0, 0.15), 0.013, 0.035, 24, false, true)});
  return obj;
}

}  // namespace wristservo
