#include "wristservo/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace wristservo {

namespace {

struct ScreenVertex {
  double u, v, inv_z;
};

// Sutherland-Hodgman against z >= near; yields 0, 3 or 4 vertices.
int clip_near(const std::array<Vec3, 3>& in, double near_plane, std::array<Vec3, 4>& out) {
  int n = 0;
  for (int i = 0; i < 3; ++i) {
    const Vec3& a = in[i];
    const Vec3& b = in[(i + 1) % 3];
    const bool a_in = a.z() >= near_plane;
    const bool b_in = b.z() >= near_plane;
    if (a_in) out[n++] = a;
    if (a_in != b_in) {
      const double t = (near_plane - a.z()) / (b.z() - a.z());
      out[n++] = a + t * (b - a);
    }
  }
  return n;
}

void raster_triangle(const CameraIntrinsics& k, const ScreenVertex& a, const ScreenVertex& b,
                     const ScreenVertex& c, int part, DepthImage& img) {
  const double area = (b.u - a.u) * (c.v - a.v) - (b.v - a.v) * (c.u - a.u);
  if (std::abs(area) < 1e-12) return;

  const double umin = std::min({a.u, b.u, c.u});
  const double umax = std::max({a.u, b.u, c.u});
  const double vmin = std::min({a.v, b.v, c.v});
  const double vmax = std::max({a.v, b.v, c.v});
  if (umax < 0.0 || vmax < 0.0 || umin > k.width - 1 || vmin > k.height - 1) return;
  const int u0 = static_cast<int>(std::ceil(std::max(umin, 0.0)));
  const int u1 = static_cast<int>(std::floor(std::min(umax, static_cast<double>(k.width - 1))));
  const int v0 = static_cast<int>(std::ceil(std::max(vmin, 0.0)));
  const int v1 = static_cast<int>(std::floor(std::min(vmax, static_cast<double>(k.height - 1))));

  const double inv_area = 1.0 / area;
  // Edge i is A_i * u + B_i * v + C_i, normalized so the interior is >= 0.
  const double ea[3] = {-(c.v - b.v) * inv_area, -(a.v - c.v) * inv_area, -(b.v - a.v) * inv_area};
  const double eb[3] = {(c.u - b.u) * inv_area, (a.u - c.u) * inv_area, (b.u - a.u) * inv_area};
  const double ec[3] = {(-(c.u - b.u) * b.v + (c.v - b.v) * b.u) * inv_area,
                        (-(a.u - c.u) * c.v + (a.v - c.v) * c.u) * inv_area,
                        (-(b.u - a.u) * a.v + (b.v - a.v) * a.u) * inv_area};

  for (int v = v0; v <= v1; ++v) {
    // Span of u where all three edge functions are non-negative, widened by one
    // pixel; the exact test below decides the boundary pixels.
    double lo = u0;
    double hi = u1;
    bool empty = false;
    for (int i = 0; i < 3; ++i) {
      const double rest = eb[i] * v + ec[i];
      if (ea[i] > 0.0) {
        lo = std::max(lo, -rest / ea[i]);
      } else if (ea[i] < 0.0) {
        hi = std::min(hi, -rest / ea[i]);
      } else if (rest < 0.0) {
        empty = true;
      }
    }
    if (empty || lo > hi + 1.0) continue;
    const int su = std::max(u0, static_cast<int>(std::ceil(lo)) - 1);
    const int eu = std::min(u1, static_cast<int>(std::floor(hi)) + 1);
    double w0 = ea[0] * su + eb[0] * v + ec[0];
    double w1 = ea[1] * su + eb[1] * v + ec[1];
    double w2 = ea[2] * su + eb[2] * v + ec[2];
    double* depth_row = img.depth.data() + static_cast<std::size_t>(v) * k.width;
    int* part_row = img.part.data() + static_cast<std::size_t>(v) * k.width;
    bool touched = false;
    for (int u = su; u <= eu; ++u, w0 += ea[0], w1 += ea[1], w2 += ea[2]) {
      if (w0 < 0.0 || w1 < 0.0 || w2 < 0.0) continue;
      const double inv_z = w0 * a.inv_z + w1 * b.inv_z + w2 * c.inv_z;
      if (!(inv_z > 0.0)) continue;
      const double z = 1.0 / inv_z;
      if (z < depth_row[u]) {
        depth_row[u] = z;
        part_row[u] = part;
        img.u_min = std::min(img.u_min, u);
        img.u_max = std::max(img.u_max, u);
        touched = true;
      }
    }
    if (touched) {
      img.v_min = std::min(img.v_min, v);
      img.v_max = std::max(img.v_max, v);
    }
  }
}

}  // namespace

void DepthImage::reset(int new_width, int new_height) {
  const std::size_t n = static_cast<std::size_t>(new_width) * new_height;
  if (new_width != width || new_height != height || depth.size() != n) {
    width = new_width;
    height = new_height;
    depth.assign(n, std::numeric_limits<double>::infinity());
    part.assign(n, -1);
  } else if (u_min <= u_max) {
    for (int v = v_min; v <= v_max; ++v) {
      const std::size_t row = static_cast<std::size_t>(v) * width;
      std::fill(depth.begin() + row + u_min, depth.begin() + row + u_max + 1,
                std::numeric_limits<double>::infinity());
      std::fill(part.begin() + row + u_min, part.begin() + row + u_max + 1, -1);
    }
  }
  u_min = width;
  v_min = height;
  u_max = -1;
  v_max = -1;
}

DepthImage rasterize(const CameraIntrinsics& intrinsics, const Pose& camera_from_object,
                     const SceneObject& object, double near_plane) {
  DepthImage img;
  rasterize_into(img, intrinsics, camera_from_object, object, near_plane);
  return img;
}

void rasterize_into(DepthImage& img, const CameraIntrinsics& intrinsics,
                    const Pose& camera_from_object, const SceneObject& object, double near_plane) {
  img.reset(intrinsics.width, intrinsics.height);

  auto to_screen = [&](const Vec3& p) {
    return ScreenVertex{intrinsics.fx * p.x() / p.z() + intrinsics.cx,
                        intrinsics.fy * p.y() / p.z() + intrinsics.cy, 1.0 / p.z()};
  };

  std::vector<Vec3> camera_vertices;
  for (std::size_t pi = 0; pi < object.parts.size(); ++pi) {
    const TriangleMesh& mesh = object.parts[pi].mesh;
    camera_vertices.clear();
    camera_vertices.reserve(mesh.vertices.size());
    for (const Vec3& v : mesh.vertices) camera_vertices.push_back(camera_from_object.transform_point(v));

    for (const auto& tri : mesh.triangles) {
      const std::array<Vec3, 3> in{camera_vertices[tri[0]], camera_vertices[tri[1]],
                                   camera_vertices[tri[2]]};
      std::array<Vec3, 4> clipped;
      const int count = clip_near(in, near_plane, clipped);
      if (count < 3) continue;
      const ScreenVertex s0 = to_screen(clipped[0]);
      for (int i = 1; i + 1 < count; ++i) {
        raster_triangle(intrinsics, s0, to_screen(clipped[i]), to_screen(clipped[i + 1]),
                        static_cast<int>(pi), img);
      }
    }
  }
}

std::vector<PartMask> render_part_masks_from(const CameraIntrinsics& intrinsics,
                                             const Pose& camera_from_object,
                                             const SceneObject& object) {
  thread_local DepthImage img;
  rasterize_into(img, intrinsics, camera_from_object, object);

  std::vector<PartMask> masks(object.parts.size());
  std::vector<double> depth_sum(object.parts.size(), 0.0);
  for (int v = img.v_min; v <= img.v_max; ++v) {
    for (int u = img.u_min; u <= img.u_max; ++u) {
      const int p = img.part_at(u, v);
      if (p < 0) continue;
      masks[p].pixels.push_back({u, v});
      depth_sum[p] += img.depth_at(u, v);
    }
  }

  std::vector<PartMask> visible;
  for (std::size_t p = 0; p < masks.size(); ++p) {
    PartMask& m = masks[p];
    if (m.pixels.empty()) continue;
    m.label = object.parts[p].label;
    m.part_index = static_cast<int>(p);
    m.centroid = mask_centroid(m.pixels);
    m.mean_depth = depth_sum[p] / static_cast<double>(m.pixels.size());
    visible.push_back(std::move(m));
  }
  if (visible.empty()) throw NothingVisible("no object part projects into the image");
  return visible;
}

std::vector<PartMask> render_part_masks(const CameraIntrinsics& intrinsics,
                                        const Pose& camera_pose, const SceneObject& object) {
  return render_part_masks_from(intrinsics, compose(inverse(camera_pose), object.pose), object);
}

}  // namespace wristservo
