#include "wristservo/masks.hpp"

#include <cmath>
#include <numeric>

namespace wristservo {

Vec2 mask_centroid(std::span<const Pixel> pixels) {
  if (pixels.empty()) throw EmptyMask("mask has no pixels");
  double su = 0.0;
  double sv = 0.0;
  for (const Pixel& p : pixels) {
    su += p.u;
    sv += p.v;
  }
  const double n = static_cast<double>(pixels.size());
  return {su / n, sv / n};
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

struct Box {
  int u0, v0, u1, v1;
};

Box bounds(std::span<const Pixel> pixels) {
  Box b{pixels[0].u, pixels[0].v, pixels[0].u, pixels[0].v};
  for (const Pixel& p : pixels) {
    b.u0 = std::min(b.u0, p.u);
    b.v0 = std::min(b.v0, p.v);
    b.u1 = std::max(b.u1, p.u);
    b.v1 = std::max(b.v1, p.v);
  }
  return b;
}

// Whether some pixel of `b` lies within Chebyshev distance `r` of a pixel of `a`.
bool within_chebyshev(std::span<const Pixel> a, const Box& box_a, std::span<const Pixel> b,
                      const Box& box_b, int r) {
  if (box_b.u0 > box_a.u1 + r || box_b.u1 < box_a.u0 - r || box_b.v0 > box_a.v1 + r ||
      box_b.v1 < box_a.v0 - r) {
    return false;
  }
  // Summed-area table of `a`'s occupancy; each pixel of `b` queries its (2r+1)^2 window.
  const int w = box_a.u1 - box_a.u0 + 1;
  const int h = box_a.v1 - box_a.v0 + 1;
  std::vector<int> sat(static_cast<std::size_t>(w + 1) * (h + 1), 0);
  auto at = [&](int x, int y) -> int& { return sat[static_cast<std::size_t>(y) * (w + 1) + x]; };
  for (const Pixel& p : a) at(p.u - box_a.u0 + 1, p.v - box_a.v0 + 1) = 1;
  for (int y = 1; y <= h; ++y) {
    for (int x = 1; x <= w; ++x) at(x, y) += at(x - 1, y) + at(x, y - 1) - at(x - 1, y - 1);
  }
  for (const Pixel& p : b) {
    const int x0 = std::max(p.u - r - box_a.u0, 0);
    const int x1 = std::min(p.u + r - box_a.u0, w - 1);
    const int y0 = std::max(p.v - r - box_a.v0, 0);
    const int y1 = std::min(p.v + r - box_a.v0, h - 1);
    if (x0 > x1 || y0 > y1) continue;
    if (at(x1 + 1, y1 + 1) - at(x0, y1 + 1) - at(x1 + 1, y0) + at(x0, y0) > 0) return true;
  }
  return false;
}

}  // namespace

std::vector<MergedRegion> merge_object_mask(std::span<const PartMask> masks,
                                            double adjacency_px) {
  if (adjacency_px < 0.0) throw InvalidArgument("adjacency_px must be non-negative");
  std::vector<MergedRegion> out;
  if (masks.empty()) return out;

  const int r = static_cast<int>(std::floor(adjacency_px));
  std::vector<Box> boxes;
  boxes.reserve(masks.size());
  for (const PartMask& m : masks) {
    if (m.pixels.empty()) throw EmptyMask("cannot merge an empty mask");
    boxes.push_back(bounds(m.pixels));
  }

  UnionFind uf(masks.size());
  for (std::size_t i = 0; i < masks.size(); ++i) {
    for (std::size_t j = i + 1; j < masks.size(); ++j) {
      if (uf.find(i) == uf.find(j)) continue;
      if (within_chebyshev(masks[i].pixels, boxes[i], masks[j].pixels, boxes[j], r)) uf.unite(i, j);
    }
  }

  std::vector<std::ptrdiff_t> slot(masks.size(), -1);
  for (std::size_t i = 0; i < masks.size(); ++i) {
    const std::size_t root = uf.find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<std::ptrdiff_t>(out.size());
      out.emplace_back();
    }
    out[static_cast<std::size_t>(slot[root])].members.push_back(i);
  }

  for (MergedRegion& region : out) {
    double depth_sum = 0.0;
    std::size_t depth_count = 0;
    Box box = boxes[region.members.front()];
    for (std::size_t i : region.members) {
      depth_sum += masks[i].mean_depth * static_cast<double>(masks[i].pixels.size());
      depth_count += masks[i].pixels.size();
      box.u0 = std::min(box.u0, boxes[i].u0);
      box.v0 = std::min(box.v0, boxes[i].v0);
      box.u1 = std::max(box.u1, boxes[i].u1);
      box.v1 = std::max(box.v1, boxes[i].v1);
    }
    if (region.members.size() == 1) {
      region.pixels = masks[region.members.front()].pixels;
    } else {
      // Union through a bitmap; scanning it yields sorted, unique pixels.
      const int w = box.u1 - box.u0 + 1;
      const int h = box.v1 - box.v0 + 1;
      std::vector<unsigned char> bits(static_cast<std::size_t>(w) * h, 0);
      std::size_t upper = 0;
      for (std::size_t i : region.members) {
        upper += masks[i].pixels.size();
        for (const Pixel& p : masks[i].pixels) {
          bits[static_cast<std::size_t>(p.v - box.v0) * w + (p.u - box.u0)] = 1;
        }
      }
      region.pixels.reserve(upper);
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          if (bits[static_cast<std::size_t>(y) * w + x]) region.pixels.push_back({x + box.u0, y + box.v0});
        }
      }
    }
    region.centroid = mask_centroid(region.pixels);
    region.mean_depth = depth_sum / static_cast<double>(depth_count);
  }
  return out;
}

std::vector<PixelRun> run_length_encode(std::span<const Pixel> sorted_pixels) {
  std::vector<PixelRun> runs;
  for (const Pixel& p : sorted_pixels) {
    if (!runs.empty() && runs.back().v == p.v && runs.back().u + runs.back().length == p.u) {
      ++runs.back().length;
    } else {
      runs.push_back({p.v, p.u, 1});
    }
  }
  return runs;
}

std::vector<Pixel> run_length_decode(std::span<const PixelRun> runs) {
  std::vector<Pixel> pixels;
  for (const PixelRun& r : runs) {
    for (int k = 0; k < r.length; ++k) pixels.push_back({r.u + k, r.v});
  }
  return pixels;
}

}  // namespace wristservo
