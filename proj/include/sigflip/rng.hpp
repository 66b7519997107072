#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "sigflip/chart.hpp"

namespace sigflip {

// Seeded RNG with fully pinned-down output. std::uniform_real_distribution
// and std::normal_distribution are implementation-defined, so uniforms come
// straight from mt19937_64 bits and normals from Box-Muller; identical seeds
// give identical streams on every platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  // [0, 1)
  double uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    if (u1 <= 0.0) u1 = 0x1.0p-53;  // log(0) guard
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  Point point_in(const Chart& chart) {
    Point p(chart.dim());
    for (int i = 0; i < chart.dim(); ++i)
      p[i] = uniform(chart.interval(i)[0], chart.interval(i)[1]);
    return p;
  }

  // Derived seed for the k-th independent substream.
  static std::uint64_t substream(std::uint64_t seed, std::uint64_t k) {
    return seed ^ (0x9e3779b97f4a7c15ull * (k + 1));
  }

private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sigflip
