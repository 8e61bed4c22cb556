#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hyperflow {

// Seedable generator with a fixed algorithm on every platform.
//
// Bits come from std::mt19937_64, whose output sequence is pinned by the
// standard. The standard distributions are implementation-defined, so the
// real-valued draws are done here:
//   uniform(): top 53 bits scaled by 2^-53, in [0, 1)
//   normal():  Marsaglia polar method, second variate cached
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform draw in (0, 1].
  double uniform_open_closed() { return 1.0 - uniform(); }

  // Integer in [lo, hi].
  int integer(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
  }

  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double x, y, r2;
    do {
      x = uniform(-1.0, 1.0);
      y = uniform(-1.0, 1.0);
      r2 = x * x + y * y;
    } while (r2 >= 1.0 || r2 == 0.0);
    const double f = std::sqrt(-2.0 * std::log(r2) / r2);
    cached_ = y * f;
    has_cached_ = true;
    return x * f;
  }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace hyperflow
