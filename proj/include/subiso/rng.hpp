#pragma once

// Pinned pseudo-random source so seeded runs reproduce bit-identically on
// any conforming implementation: xorshift64* (Marsaglia's 64-bit shift
// register with a multiplicative output scramble) plus Box-Muller Gaussians.

#include "subiso/core.hpp"

#include <cstdint>

namespace subiso {

class SeededSource {
 public:
  // Seed 0 would lock xorshift at zero, so it is remapped to the splitmix64
  // golden-ratio constant. Every other seed is used verbatim.
  explicit SeededSource(std::uint64_t seed)
      : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next_u64() {
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545f4914f6cdd1dull;
  }

  // Uniform in (0,1); a zero mantissa is rejected so log() is always finite.
  double uniform01() {
    for (;;) {
      const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
      if (u > 0) return u;
    }
  }

  // Box-Muller pair; the cosine value is returned first, the sine cached.
  double gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::acos(-1.0) * u2;
    cached_ = r * std::sin(t);
    have_cached_ = true;
    return r * std::cos(t);
  }

  // Entries drawn row by row. Complex entries consume two Gaussians
  // (real part first) and are scaled by 1/sqrt(2).
  template <class T>
  Mat<T> gaussian_matrix(int rows, int cols) {
    Mat<T> m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        if constexpr (scalar_traits<T>::field == Field::real) {
          m(i, j) = gaussian();
        } else {
          const double re = gaussian();
          const double im = gaussian();
          m(i, j) = cplx(re, im) / std::sqrt(2.0);
        }
      }
    return m;
  }

 private:
  std::uint64_t state_;
  double cached_ = 0;
  bool have_cached_ = false;
};

}  // namespace subiso
