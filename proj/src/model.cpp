#include "glauber/model.hpp"

#include <cmath>
#include <limits>

#include "glauber/errors.hpp"

namespace glauber {

ModelParams ModelParams::make(double activity, const Potential& potential, const Box& box) {
  if (!(activity >= 0.0) || !std::isfinite(activity))
    throw DomainError("activity must be finite and nonnegative");
  if (box.boundary == Boundary::periodic && potential.cutoff() > 0.0) {
    for (int i = 0; i < box.dim; ++i)
      if (box.side[i] < 2.0 * potential.cutoff())
        throw ModelError("periodic box sides must be at least twice the interaction range");
  }
  ModelParams p;
  p.activity = activity;
  p.potential = potential;
  p.box = box;
  p.delta = delta_integral(potential, activity, box.dim);
  if (!std::isfinite(p.delta)) throw ModelError("interaction integral diverges");
  return p;
}

double relative_energy(const Point& x, const Configuration& gamma, const ModelParams& params) {
  if (!params.box.contains(x)) throw DomainError("relative_energy: point outside the box");
  const Potential& phi = params.potential;
  if (phi.cutoff() == 0.0) return 0.0;  // no interaction at any positive distance
  if (!gamma.supports_range(phi.cutoff()))
    throw DomainError("relative_energy: configuration grid too fine for this interaction range");
  const double cut2 = phi.cutoff() * phi.cutoff();
  double energy = 0.0;
  bool infinite = false;
  gamma.for_each_neighbor(x, [&](const Point& y, std::size_t) {
    if (infinite || y == x) return;  // x itself never contributes
    const double r2 = params.box.distance2(x, y);
    if (r2 >= cut2) return;
    const double term = phi.evaluate_r2(r2);
    if (std::isinf(term)) {
      infinite = true;
      return;
    }
    energy += term;
  });
  return infinite ? std::numeric_limits<double>::infinity() : energy;
}

}  // namespace glauber
