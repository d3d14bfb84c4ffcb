#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "glauber/errors.hpp"

namespace glauber {

/// A location in the box. Storage is fixed at three coordinates; the active
/// dimension (1..3) is carried by the Box. Unused coordinates stay zero.
struct Point {
  std::array<double, 3> c{0.0, 0.0, 0.0};

  double& operator[](std::size_t i) { return c[i]; }
  double operator[](std::size_t i) const { return c[i]; }
  bool operator==(const Point& o) const { return c == o.c; }
};

enum class Boundary { periodic, empty };

/// Axis-aligned simulation box [0, side_i) with either periodic wrapping or
/// plain (empty) boundary for displacements.
struct Box {
  int dim = 1;
  std::array<double, 3> side{1.0, 1.0, 1.0};
  Boundary boundary = Boundary::periodic;

  Box() = default;
  Box(int d, std::array<double, 3> s, Boundary b = Boundary::periodic)
      : dim(d), side(s), boundary(b) {
    if (d < 1 || d > 3) throw DomainError("box dimension must be 1, 2 or 3");
    for (int i = 0; i < d; ++i)
      if (!(s[i] > 0.0) || !std::isfinite(s[i]))
        throw DomainError("box sides must be positive and finite");
  }

  double volume() const {
    double v = 1.0;
    for (int i = 0; i < dim; ++i) v *= side[i];
    return v;
  }

  double min_side() const {
    double m = side[0];
    for (int i = 1; i < dim; ++i) m = std::min(m, side[i]);
    return m;
  }

  bool contains(const Point& p) const {
    for (int i = 0; i < dim; ++i)
      if (!(p[i] >= 0.0 && p[i] <= side[i])) return false;
    return true;
  }

  /// Component-wise displacement x - y, reduced to the nearest image when periodic.
  Point displacement(const Point& x, const Point& y) const {
    Point d;
    for (int i = 0; i < dim; ++i) {
      double v = x[i] - y[i];
      if (boundary == Boundary::periodic) v -= side[i] * std::nearbyint(v / side[i]);
      d[i] = v;
    }
    return d;
  }

  double distance2(const Point& x, const Point& y) const {
    Point d = displacement(x, y);
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += d[i] * d[i];
    return s;
  }

  double distance(const Point& x, const Point& y) const { return std::sqrt(distance2(x, y)); }

  /// Map a point back into [0, side) per axis (periodic only; no-op otherwise).
  Point wrap(const Point& p) const {
    Point q = p;
    if (boundary != Boundary::periodic) return q;
    for (int i = 0; i < dim; ++i) {
      double v = std::fmod(q[i], side[i]);
      if (v < 0.0) v += side[i];
      if (v >= side[i]) v = 0.0;  // fmod can return side under rounding
      q[i] = v;
    }
    return q;
  }

  bool operator==(const Box& o) const {
    if (dim != o.dim || boundary != o.boundary) return false;
    for (int i = 0; i < dim; ++i)
      if (side[i] != o.side[i]) return false;
    return true;
  }
};

/// Axis-aligned sub-box [lo, hi) used as observable support and integration domain.
/// Windows never wrap around a periodic boundary.
struct Window {
  std::array<double, 3> lo{0.0, 0.0, 0.0};
  std::array<double, 3> hi{0.0, 0.0, 0.0};

  Window() = default;
  Window(std::array<double, 3> l, std::array<double, 3> h) : lo(l), hi(h) {}

  bool contains(const Point& p, int dim) const {
    for (int i = 0; i < dim; ++i)
      if (!(p[i] >= lo[i] && p[i] < hi[i])) return false;
    return true;
  }

  double volume(int dim) const {
    double v = 1.0;
    for (int i = 0; i < dim; ++i) v *= (hi[i] - lo[i]);
    return v;
  }

  void validate(const Box& box) const {
    for (int i = 0; i < box.dim; ++i) {
      if (!(lo[i] < hi[i])) throw DomainError("window must have lo < hi on every axis");
      if (lo[i] < 0.0 || hi[i] > box.side[i])
        throw DomainError("window must lie inside the box");
    }
  }

  /// Smallest window covering both operands (used for product observables).
  static Window hull(const Window& a, const Window& b, int dim) {
    Window w = a;
    for (int i = 0; i < dim; ++i) {
      w.lo[i] = std::min(a.lo[i], b.lo[i]);
      w.hi[i] = std::max(a.hi[i], b.hi[i]);
    }
    return w;
  }
};

/// e^{-E} with the convention that an infinite energy gives exactly zero.
inline double exp_neg(double energy) {
  if (std::isinf(energy) && energy > 0.0) return 0.0;
  return std::exp(-energy);
}

}  // namespace glauber
