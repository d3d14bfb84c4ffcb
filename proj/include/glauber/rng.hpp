#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "glauber/geometry.hpp"

namespace glauber {

/// splitmix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stream seed for (master_seed, stream_index); distinct indices decorrelate.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 0x51a7ef29c3d10b45ULL));
}

/// Deterministic random stream: every draw is hand-rolled on top of
/// mt19937_64 so output bytes do not depend on the standard library's
/// distribution implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Uniform in [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Exponential waiting time with the given rate.
  double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

  /// Uniform integer in [0, n), unbiased via rejection.
  std::size_t uniform_index(std::size_t n) {
    const std::uint64_t m = static_cast<std::uint64_t>(n);
    const std::uint64_t bound = UINT64_MAX - UINT64_MAX % m;
    std::uint64_t v;
    do {
      v = eng_();
    } while (v >= bound);
    return static_cast<std::size_t>(v % m);
  }

  /// Exact Poisson draw; large means are split into chunks so the
  /// multiplication method never underflows.
  std::uint64_t poisson(double mean) {
    std::uint64_t total = 0;
    while (mean > 30.0) {
      total += poisson_small(30.0);
      mean -= 30.0;
    }
    return total + poisson_small(mean);
  }

  /// Uniform location in the box.
  Point uniform_point(const Box& box) {
    Point p;
    for (int i = 0; i < box.dim; ++i) p[i] = uniform(0.0, box.side[i]);
    return p;
  }

 private:
  std::uint64_t poisson_small(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double prod = 1.0;
    do {
      ++k;
      prod *= uniform01();
    } while (prod > limit);
    return k - 1;
  }

  std::mt19937_64 eng_;
};

}  // namespace glauber
