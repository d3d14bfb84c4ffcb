#pragma once

#include <limits>
#include <string>

#include "glauber/geometry.hpp"

namespace glauber {

/// Tagged pair potential. Every shipped potential is nonnegative (repulsive),
/// even (depends on the displacement only through its norm), and integrable in
/// the sense that z * integral(1 - e^{-phi}) is finite.
class Potential {
 public:
  enum class Kind { zero, strauss, hard_core, soft_gaussian };

  static Potential zero();
  /// strength >= 0 inside the open ball of the given range, 0 outside.
  static Potential strauss(double strength, double range);
  /// +infinity inside the open ball of the given range, 0 outside.
  static Potential hard_core(double range);
  /// strength * exp(-|r|^2 / (2 scale^2)), truncated to exactly 0 beyond the
  /// radius where the value drops below 1e-12.
  static Potential soft_gaussian(double strength, double scale);

  Kind kind() const { return kind_; }
  double strength() const { return strength_; }
  double range() const { return range_; }

  /// phi evaluated on a displacement vector (first `dim` coordinates).
  double evaluate(const Point& displacement, int dim) const;
  double evaluate_r2(double r2) const;  ///< phi as a function of |r|^2.

  /// Interaction radius beyond which phi is exactly zero.
  double cutoff() const { return cutoff_; }

  /// All shipped potentials are nonnegative; kept explicit because the gap and
  /// perfect-sampling operations require it.
  bool nonnegative() const { return true; }

  std::string describe() const;

 private:
  Potential(Kind k, double strength, double range, double cutoff)
      : kind_(k), strength_(strength), range_(range), cutoff_(cutoff) {}

  Kind kind_ = Kind::zero;
  double strength_ = 0.0;  // interaction strength (unused for zero/hard_core)
  double range_ = 0.0;     // ball radius or gaussian scale
  double cutoff_ = 0.0;
};

/// z * integral over R^d of (1 - e^{-phi(x)}) dx. Closed form for the ball
/// potentials, adaptive radial quadrature (abs tol <= 1e-8) for the rest.
double delta_integral(const Potential& phi, double activity, int dim);

/// Volume of the d-ball of radius r (d = 1, 2, 3).
double ball_volume(int dim, double r);

}  // namespace glauber
