#include "glauber/potential.hpp"

#include <cmath>

#include "glauber/errors.hpp"

namespace glauber {
namespace {

constexpr double kSoftTruncation = 1e-12;

// Adaptive Simpson on [a, b], absolute tolerance. The integrands here are
// smooth and rapidly decaying, so straightforward recursion is plenty.
double adaptive_simpson(const auto& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const auto& f, double a, double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

double sphere_surface(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * M_PI;
    default: return 4.0 * M_PI;
  }
}

}  // namespace

Potential Potential::zero() { return Potential(Kind::zero, 0.0, 0.0, 0.0); }

Potential Potential::strauss(double strength, double range) {
  if (!(strength >= 0.0) || !std::isfinite(strength))
    throw DomainError("strauss strength must be finite and nonnegative");
  if (!(range > 0.0) || !std::isfinite(range))
    throw DomainError("strauss range must be positive and finite");
  return Potential(Kind::strauss, strength, range, strength == 0.0 ? 0.0 : range);
}

Potential Potential::hard_core(double range) {
  if (!(range > 0.0) || !std::isfinite(range))
    throw DomainError("hard core range must be positive and finite");
  return Potential(Kind::hard_core, 0.0, range, range);
}

Potential Potential::soft_gaussian(double strength, double scale) {
  if (!(strength >= 0.0) || !std::isfinite(strength))
    throw DomainError("soft gaussian strength must be finite and nonnegative");
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw DomainError("soft gaussian scale must be positive and finite");
  double cutoff = 0.0;
  if (strength > kSoftTruncation)
    cutoff = scale * std::sqrt(2.0 * std::log(strength / kSoftTruncation));
  return Potential(Kind::soft_gaussian, strength, scale, cutoff);
}

double Potential::evaluate_r2(double r2) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::strauss:
      return r2 < range_ * range_ ? strength_ : 0.0;
    case Kind::hard_core:
      return r2 < range_ * range_ ? std::numeric_limits<double>::infinity() : 0.0;
    case Kind::soft_gaussian: {
      if (r2 >= cutoff_ * cutoff_) return 0.0;  // declared truncation
      return strength_ * std::exp(-r2 / (2.0 * range_ * range_));
    }
  }
  return 0.0;
}

double Potential::evaluate(const Point& displacement, int dim) const {
  double r2 = 0.0;
  for (int i = 0; i < dim; ++i) r2 += displacement[i] * displacement[i];
  return evaluate_r2(r2);
}

std::string Potential::describe() const {
  switch (kind_) {
    case Kind::zero: return "zero";
    case Kind::strauss:
      return "strauss(strength=" + std::to_string(strength_) + ", range=" + std::to_string(range_) + ")";
    case Kind::hard_core: return "hard_core(range=" + std::to_string(range_) + ")";
    case Kind::soft_gaussian:
      return "soft_gaussian(strength=" + std::to_string(strength_) + ", scale=" + std::to_string(range_) + ")";
  }
  return "?";
}

double ball_volume(int dim, double r) {
  switch (dim) {
    case 1: return 2.0 * r;
    case 2: return M_PI * r * r;
    case 3: return 4.0 / 3.0 * M_PI * r * r * r;
    default: throw DomainError("dimension must be 1, 2 or 3");
  }
}

double delta_integral(const Potential& phi, double activity, int dim) {
  if (dim < 1 || dim > 3) throw DomainError("dimension must be 1, 2 or 3");
  if (!(activity >= 0.0) || !std::isfinite(activity))
    throw DomainError("activity must be finite and nonnegative");
  switch (phi.kind()) {
    case Potential::Kind::zero:
      return 0.0;
    case Potential::Kind::strauss:
      return activity * (1.0 - std::exp(-phi.strength())) * ball_volume(dim, phi.range());
    case Potential::Kind::hard_core:
      return activity * ball_volume(dim, phi.range());
    case Potential::Kind::soft_gaussian: {
      if (phi.cutoff() == 0.0) return 0.0;
      const auto radial = [&](double r) {
        const double one_minus = -std::expm1(-phi.evaluate_r2(r * r));
        double jac = 1.0;
        for (int i = 1; i < dim; ++i) jac *= r;
        return one_minus * jac;
      };
      const double integral = integrate(radial, 0.0, phi.cutoff(), 1e-10);
      return activity * sphere_surface(dim) * integral;
    }
  }
  return 0.0;
}

}  // namespace glauber
