#include "glauber/generator.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "glauber/errors.hpp"
#include "glauber/parallel.hpp"

namespace glauber {
namespace {

// Axis coordinates where the birth integrand can be non-smooth: the extents
// of the interaction ball around every point (and its periodic images) that
// can reach the window.
std::array<std::vector<double>, 3> interaction_breaks(const Configuration& gamma,
                                                      const ModelParams& params, const Window& w) {
  std::array<std::vector<double>, 3> breaks;
  const double r = params.potential.cutoff();
  if (r <= 0.0) return breaks;
  const int dim = params.box.dim;
  const bool periodic = params.box.boundary == Boundary::periodic;
  const int off_lo = periodic ? -1 : 0;
  const int off_hi = periodic ? 1 : 0;
  for (const Point& y : gamma.points()) {
    int off[3] = {off_lo, off_lo, off_lo};
    while (true) {
      Point img = y;
      for (int i = 0; i < dim; ++i) img[i] += off[i] * params.box.side[i];
      bool near = true;
      for (int i = 0; i < dim; ++i)
        if (img[i] < w.lo[i] - r || img[i] > w.hi[i] + r) near = false;
      if (near)
        for (int i = 0; i < dim; ++i) {
          breaks[i].push_back(img[i] - r);
          breaks[i].push_back(img[i] + r);
        }
      int i = dim - 1;
      while (i >= 0 && ++off[i] > off_hi) off[i--] = off_lo;
      if (i < 0) break;
    }
  }
  return breaks;
}

void append_breaks(std::array<std::vector<double>, 3>& dst, const Observable& obs, int dim) {
  for (int i = 0; i < dim; ++i) {
    const auto& b = obs.axis_breaks(i);
    dst[i].insert(dst[i].end(), b.begin(), b.end());
  }
}

bool intersect(const Window& a, const Window& b, int dim, Window& out) {
  for (int i = 0; i < dim; ++i) {
    out.lo[i] = std::max(a.lo[i], b.lo[i]);
    out.hi[i] = std::min(a.hi[i], b.hi[i]);
    if (!(out.lo[i] < out.hi[i])) return false;
  }
  return true;
}

std::vector<Point> points_in(const Configuration& gamma, const Window& w) {
  std::vector<Point> pts;
  for (const Point& p : gamma.points())
    if (w.contains(p, gamma.box().dim)) pts.push_back(p);
  return pts;
}

// Per-chain means of a fixed set of per-sample quantities, batched over chains.
template <class Fn>
std::vector<Estimate> ensemble_slots(const SampleSet& samples, unsigned threads,
                                     std::size_t nslots, Fn&& per_sample) {
  const std::size_t j = samples.chains.size();
  if (j < 2) throw EstimationError("ensemble estimates need at least two chains");
  std::vector<std::vector<double>> chain_means(nslots, std::vector<double>(j, 0.0));
  parallel_for(j, threads, [&](std::size_t c) {
    const auto& chain = samples.chains[c];
    if (chain.empty()) throw EstimationError("ensemble estimates need nonempty chains");
    std::vector<double> acc(nslots, 0.0), slots(nslots, 0.0);
    for (const TimedSample& ts : chain) {
      std::fill(slots.begin(), slots.end(), 0.0);
      per_sample(ts.config, slots.data());
      for (std::size_t s = 0; s < nslots; ++s) acc[s] += slots[s];
    }
    for (std::size_t s = 0; s < nslots; ++s)
      chain_means[s][c] = acc[s] / static_cast<double>(chain.size());
  });
  std::vector<Estimate> out;
  out.reserve(nslots);
  for (const auto& v : chain_means) out.push_back(batch_mean(v));
  return out;
}

}  // namespace

double d_minus(const Observable& F, const Configuration& gamma, const Point& x) {
  Configuration work = gamma;
  const double base = F(work);
  if (!work.remove_point(x)) throw DomainError("d_minus: x is not a point of gamma");
  return F(work) - base;
}

double d_plus(const Observable& F, const Configuration& gamma, const Point& x) {
  Configuration work = gamma;
  const double base = F(work);
  if (work.find(x) != Configuration::npos) return 0.0;  // gamma + x == gamma
  work.insert(x);
  return base - F(work);
}

double d_minus2(const Observable& F, const Configuration& gamma, const Point& x, const Point& y) {
  if (x == y) return -d_minus(F, gamma, x);
  Configuration work = gamma;
  const double f0 = F(work);
  if (!work.remove_point(x)) throw DomainError("d_minus2: x is not a point of gamma");
  const double fx = F(work);
  if (!work.remove_point(y)) throw DomainError("d_minus2: y is not a point of gamma");
  const double fxy = F(work);
  work.insert(x);
  const double fy = F(work);
  return fxy - fx - fy + f0;
}

GeneratorValue apply_generator(const Observable& F, const Configuration& gamma,
                               const ModelParams& params, const QuadratureSpec& spec) {
  Configuration work = gamma;
  const double f0 = F(work);
  const Window& w = F.support();

  double death = 0.0;
  for (const Point& p : points_in(gamma, w)) {
    work.remove_point(p);
    death += F(work) - f0;
    work.insert(p);
  }

  auto breaks = interaction_breaks(gamma, params, w);
  append_breaks(breaks, F, params.box.dim);
  const double z = params.activity;
  auto integrand = [&](const Point& x) {
    const double weight = z * exp_neg(relative_energy(x, work, params));
    if (weight == 0.0) return 0.0;
    const std::size_t idx = work.insert(x);
    const double fplus = F(work);
    work.remove_at(idx);  // the inserted point sits at the end
    return weight * (f0 - fplus);
  };
  const IntegralEstimate birth = integrate_window(w, params.box.dim, integrand, breaks.data(),
                                                  params.potential.cutoff(), spec);
  if (birth.error > spec.tolerance)
    throw AccuracyError("apply_generator: quadrature error " + std::to_string(birth.error) +
                        " above tolerance " + std::to_string(spec.tolerance));
  return GeneratorValue{birth.value - death, birth.error, birth.evaluations};
}

IntegralEstimate insertion_integral(const PairObservable& G, const Configuration& gamma,
                                    const ModelParams& params, const QuadratureSpec& spec) {
  Configuration work = gamma;
  const Window& w = G.window();
  auto breaks = interaction_breaks(gamma, params, w);
  for (int i = 0; i < params.box.dim; ++i) {
    const auto& b = G.axis_breaks(i);
    breaks[i].insert(breaks[i].end(), b.begin(), b.end());
  }
  const double z = params.activity;
  auto integrand = [&](const Point& x) {
    const double weight = z * exp_neg(relative_energy(x, work, params));
    if (weight == 0.0) return 0.0;
    const std::size_t idx = work.insert(x);
    const double value = G(work, x);
    work.remove_at(idx);
    return weight * value;
  };
  const IntegralEstimate est = integrate_window(w, params.box.dim, integrand, breaks.data(),
                                                params.potential.cutoff(), spec);
  if (est.error > spec.tolerance)
    throw AccuracyError("insertion_integral: quadrature error above tolerance");
  return est;
}

DirichletForms dirichlet_form_mc(const Observable& F, const Observable& G,
                                 const SampleSet& samples, const ModelParams& params,
                                 const QuadratureSpec& spec, unsigned threads) {
  Window wi;
  const bool overlap = intersect(F.support(), G.support(), params.box.dim, wi);
  auto per_sample = [&](const Configuration& gamma, double* slots) {
    if (!overlap) return;  // both representations vanish identically
    Configuration work = gamma;
    const double f0 = F(work), g0 = G(work);
    double death = 0.0;
    for (const Point& p : points_in(gamma, wi)) {
      work.remove_point(p);
      death += (F(work) - f0) * (G(work) - g0);
      work.insert(p);
    }
    auto breaks = interaction_breaks(gamma, params, wi);
    append_breaks(breaks, F, params.box.dim);
    append_breaks(breaks, G, params.box.dim);
    const double z = params.activity;
    auto integrand = [&](const Point& x) {
      const double weight = z * exp_neg(relative_energy(x, work, params));
      if (weight == 0.0) return 0.0;
      const std::size_t idx = work.insert(x);
      const double dfp = f0 - F(work);
      const double dgp = g0 - G(work);
      work.remove_at(idx);
      return weight * dfp * dgp;
    };
    const IntegralEstimate birth = integrate_window(wi, params.box.dim, integrand, breaks.data(),
                                                    params.potential.cutoff(), spec);
    if (birth.error > spec.tolerance)
      throw AccuracyError("dirichlet_form_mc: quadrature error above tolerance");
    slots[0] = death;
    slots[1] = birth.value;
    slots[2] = death - birth.value;
  };
  auto est = ensemble_slots(samples, threads, 3, per_sample);
  return DirichletForms{est[0], est[1], est[2]};
}

CoercivityTerms coercivity_terms(const Observable& F, const SampleSet& samples,
                                 const ModelParams& params, const QuadratureSpec& spec,
                                 unsigned threads) {
  const double cutoff = params.potential.cutoff();
  const double cut2 = cutoff * cutoff;
  auto per_sample = [&](const Configuration& gamma, double* slots) {
    const GeneratorValue hf = apply_generator(F, gamma, params, spec);
    const double lhs = hf.value * hf.value;

    Configuration work = gamma;
    const double f0 = F(work);
    const std::vector<Point> pts = points_in(gamma, F.support());
    const std::size_t m = pts.size();
    std::vector<double> fminus(m);
    for (std::size_t k = 0; k < m; ++k) {
      work.remove_point(pts[k]);
      fminus[k] = F(work);
      work.insert(pts[k]);
    }
    double trace = 0.0, cross = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double d1 = fminus[k] - f0;
      trace += d1 * d1;  // diagonal: second gradient collapses to -D-F
    }
    for (std::size_t k = 0; k < m; ++k) {
      work.remove_point(pts[k]);
      for (std::size_t l = k + 1; l < m; ++l) {
        work.remove_point(pts[l]);
        const double fkl = F(work);
        work.insert(pts[l]);
        const double d2 = fkl - fminus[k] - fminus[l] + f0;
        trace += 2.0 * d2 * d2;  // ordered pairs
        if (cutoff > 0.0 && params.box.distance2(pts[k], pts[l]) < cut2) {
          const double phi = params.potential.evaluate(
              params.box.displacement(pts[k], pts[l]), params.box.dim);
          if (phi != 0.0) {
            const double weight = std::expm1(phi);
            const double p1 = fkl - fminus[k];
            const double p2 = fkl - fminus[l];
            if (!(std::isinf(weight) && (p1 == 0.0 || p2 == 0.0)))
              cross += 2.0 * weight * p1 * p2;
          }
        }
      }
      work.insert(pts[k]);
    }
    slots[0] = lhs;
    slots[1] = trace;
    slots[2] = cross;
    slots[3] = lhs - trace - cross;
  };
  auto est = ensemble_slots(samples, threads, 4, per_sample);
  return CoercivityTerms{est[0], est[1], est[2], est[3]};
}

SymmetryDefect symmetry_defect(const Observable& F, const Observable& G, const SampleSet& samples,
                               const ModelParams& params, const QuadratureSpec& spec,
                               unsigned threads) {
  Window wi;
  const bool overlap = intersect(F.support(), G.support(), params.box.dim, wi);
  auto per_sample = [&](const Configuration& gamma, double* slots) {
    const GeneratorValue hf = apply_generator(F, gamma, params, spec);
    Configuration work = gamma;
    const double f0 = F(work), g0 = G(work);
    double death = 0.0;
    if (overlap) {
      for (const Point& p : points_in(gamma, wi)) {
        work.remove_point(p);
        death += (F(work) - f0) * (G(work) - g0);
        work.insert(p);
      }
    }
    slots[0] = hf.value * g0;
    slots[1] = death;
    slots[2] = hf.value * g0 - death;
  };
  auto est = ensemble_slots(samples, threads, 3, per_sample);
  return SymmetryDefect{est[0], est[1], est[2]};
}

Estimate generator_mean(const Observable& F, const SampleSet& samples, const ModelParams& params,
                        const QuadratureSpec& spec, unsigned threads) {
  auto per_sample = [&](const Configuration& gamma, double* slots) {
    slots[0] = apply_generator(F, gamma, params, spec).value;
  };
  return ensemble_slots(samples, threads, 1, per_sample)[0];
}

GapBoundTerms gap_bound_terms(const Observable& F, const SampleSet& samples,
                              const ModelParams& params, const QuadratureSpec& spec,
                              unsigned threads) {
  const double one_minus_delta = 1.0 - params.delta;
  auto per_sample = [&](const Configuration& gamma, double* slots) {
    const double hf = apply_generator(F, gamma, params, spec).value;
    const double f0 = F(gamma);
    slots[0] = hf * hf;
    slots[1] = hf * f0;
    slots[2] = hf * hf - one_minus_delta * hf * f0;
  };
  auto est = ensemble_slots(samples, threads, 3, per_sample);
  return GapBoundTerms{est[0], est[1], est[2]};
}

}  // namespace glauber
