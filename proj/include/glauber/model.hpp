#pragma once

#include "glauber/configuration.hpp"
#include "glauber/geometry.hpp"
#include "glauber/potential.hpp"

namespace glauber {

/// Immutable model description: activity z, pair potential, box, plus the
/// derived interaction integral delta = z * integral(1 - e^{-phi}).
struct ModelParams {
  double activity = 1.0;
  Potential potential = Potential::zero();
  Box box;
  double delta = 0.0;

  /// Validates and derives delta. Periodic boxes must have every side at
  /// least twice the potential cutoff so the minimum-image convention pairs
  /// each point with at most one image of any other.
  static ModelParams make(double activity, const Potential& potential, const Box& box);

  /// Fresh empty configuration whose grid supports this model's interactions.
  Configuration make_configuration() const { return Configuration(box, potential.cutoff()); }
};

/// Energy of inserting x into gamma: sum of phi over displacements to every
/// point of gamma other than x itself. +infinity as soon as one term is.
double relative_energy(const Point& x, const Configuration& gamma, const ModelParams& params);

}  // namespace glauber
