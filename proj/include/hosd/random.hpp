// random.hpp
// Counter-based Gaussian stream. All randomness in hosd comes from here.
//
// Stream definition (fixed so seeded outputs are portable):
//   mix(z)   = SplitMix64 finalizer
//              z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//              z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//              z ^ (z >> 31)
//   key      = mix(seed) ^ mix(stream + 0xD1B54A32D192ED03)
//   word_k   = mix(key + (k + 1) * 0x9E3779B97F4A7C15),  k = 0, 1, 2, ...
//   uniform  = ((word >> 11) + 1) * 2^-53            in (0, 1]
//   normals  = Box-Muller on two consecutive uniforms (u1, u2):
//              r = sqrt(-2 ln u1), n0 = r cos(2 pi u2), n1 = r sin(2 pi u2)
//   complex  = (n0, n1) from one Box-Muller pair

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "hosd/core.hpp"

namespace hosd {

inline constexpr std::uint64_t splitmix_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(splitmix_finalize(seed) ^ splitmix_finalize(stream + 0xD1B54A32D192ED03ULL)) {}

  std::uint64_t next_word() {
    ++counter_;
    return splitmix_finalize(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  double uniform() { return static_cast<double>((next_word() >> 11) + 1) * 0x1.0p-53; }

  Complex complex_normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(angle), r * std::sin(angle)};
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const Complex pair = complex_normal();
    spare_ = pair.imag();
    has_spare_ = true;
    return pair.real();
  }

  Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    // Row-major fill so the draw order matches the tensor convention.
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = complex_normal();
    }
    return m;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace hosd
