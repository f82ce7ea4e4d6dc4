#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "wristservo/camera.hpp"
#include "wristservo/errors.hpp"
#include "wristservo/scene.hpp"

namespace wristservo {

struct Pixel {
  int u = 0;
  int v = 0;

  friend bool operator==(const Pixel&, const Pixel&) = default;
  /// Row-major order (v, then u).
  friend bool operator<(const Pixel& a, const Pixel& b) {
    return a.v != b.v ? a.v < b.v : a.u < b.u;
  }
};

/// Pixels of one visible object part. Pixels are kept sorted row-major.
struct PartMask {
  PartLabel label = PartLabel::NoGrasp;
  std::vector<Pixel> pixels;
  Vec2 centroid = Vec2::Zero();
  double mean_depth = 0.0;
  int part_index = -1;
};

/// Label-free union of neighbouring masks.
struct MergedRegion {
  std::vector<Pixel> pixels;
  Vec2 centroid = Vec2::Zero();
  double mean_depth = 0.0;
  std::vector<std::size_t> members;
};

Vec2 mask_centroid(std::span<const Pixel> pixels);
inline Vec2 mask_centroid(const PartMask& mask) { return mask_centroid(mask.pixels); }

/// Unions masks whose pixel sets lie within Chebyshev distance `adjacency_px`,
/// closed transitively. Regions are ordered by their smallest member index.
std::vector<MergedRegion> merge_object_mask(std::span<const PartMask> masks,
                                            double adjacency_px = 3.0);

inline int label_ordinal(const PartMask& m) { return static_cast<int>(m.label); }
inline int label_ordinal(const MergedRegion&) { return 0; }

template <typename T>
concept CenteredRegion = requires(const T& t) {
  { t.centroid } -> std::convertible_to<Vec2>;
  { t.pixels.size() } -> std::convertible_to<std::size_t>;
  { label_ordinal(t) } -> std::convertible_to<int>;
};

/// Index of the item whose centroid is closest to (cx, cy). Distance ties go to the
/// larger pixel count, then to the lower label ordinal, then to the earlier
/// ordinal-equal item whose pixels sort first.
template <CenteredRegion T>
std::size_t select_nearest_to_center_index(std::span<const T> items,
                                           const CameraIntrinsics& intrinsics) {
  if (items.empty()) throw EmptyInput("nothing to select from");
  constexpr double kTie = 1e-9;
  const Vec2 center(intrinsics.cx, intrinsics.cy);
  auto better = [&](const T& a, const T& b) {
    const double da = (a.centroid - center).norm();
    const double db = (b.centroid - center).norm();
    if (std::abs(da - db) > kTie) return da < db;
    if (a.pixels.size() != b.pixels.size()) return a.pixels.size() > b.pixels.size();
    if (label_ordinal(a) != label_ordinal(b)) return label_ordinal(a) < label_ordinal(b);
    return std::lexicographical_compare(a.pixels.begin(), a.pixels.end(), b.pixels.begin(),
                                        b.pixels.end());
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < items.size(); ++i) {
    if (better(items[i], items[best])) best = i;
  }
  return best;
}

template <CenteredRegion T>
const T& select_nearest_to_center(std::span<const T> items, const CameraIntrinsics& intrinsics) {
  return items[select_nearest_to_center_index(items, intrinsics)];
}

/// Row runs (v, u_start, length) of a row-major sorted pixel set.
struct PixelRun {
  int v = 0;
  int u = 0;
  int length = 0;
};

std::vector<PixelRun> run_length_encode(std::span<const Pixel> sorted_pixels);
std::vector<Pixel> run_length_decode(std::span<const PixelRun> runs);

}  // namespace wristservo
