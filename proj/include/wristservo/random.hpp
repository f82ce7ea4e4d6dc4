#pragma once

#include <cstdint>
#include <random>

namespace wristservo {

/// Seedable generator with a bit-exact definition on every platform:
/// mt19937_64 words mapped to doubles by hand instead of std distributions.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace wristservo
