#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>

namespace finslerlab {

// SplitMix64: tiny, portable, seedable. Reports name this generator so other
// implementations can replay the exact sample stream from (seed, index).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t mix(std::uint64_t v) {
    v = (v ^ (v >> 30)) * 0xBF58476D1CE4E5B9ULL;
    v = (v ^ (v >> 27)) * 0x94D049BB133111EBULL;
    return v ^ (v >> 31);
  }

  // Independent generator for sample `index` of run `seed`:
  // state = mix(seed) xor mix((index+1) * golden).
  static SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(mix(seed) ^ mix((index + 1) * 0x9E3779B97F4A7C15ULL));
  }

  // Uniform in (0, 1].
  double uniform01() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Standard normal via Box-Muller (two uniforms per draw, no caching).
  double gaussian() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Eigen::VectorXd gaussian_vector(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = gaussian();
    return v;
  }

  Eigen::VectorXd on_sphere(int n) {
    Eigen::VectorXd v = gaussian_vector(n);
    double norm = v.norm();
    while (norm < 1e-12) {
      v = gaussian_vector(n);
      norm = v.norm();
    }
    return v / norm;
  }

  Eigen::VectorXd in_ball(const Eigen::VectorXd& center, double radius) {
    const int n = static_cast<int>(center.size());
    const double r = radius * std::pow(uniform01(), 1.0 / n);
    return center + r * on_sphere(n);
  }

 private:
  std::uint64_t state_;
};

}  // namespace finslerlab
