#pragma once

#include "glauber/dynamics.hpp"
#include "glauber/model.hpp"
#include "glauber/observable.hpp"
#include "glauber/quadrature.hpp"
#include "glauber/stats.hpp"

namespace glauber {

/// Removal gradient F(gamma \ x) - F(gamma); x must be a point of gamma.
double d_minus(const Observable& F, const Configuration& gamma, const Point& x);

/// Insertion gradient F(gamma) - F(gamma + x); zero when x already in gamma.
double d_plus(const Observable& F, const Configuration& gamma, const Point& x);

/// Second removal gradient; collapses to -d_minus on the diagonal.
double d_minus2(const Observable& F, const Configuration& gamma, const Point& x, const Point& y);

struct GeneratorValue {
  double value = 0.0;       // birth integral minus death sum
  double quad_error = 0.0;  // error estimate of the birth integral
  std::size_t evaluations = 0;
};

/// Generator applied at a configuration:
///   (HF)(gamma) = integral_W z e^{-E(x,gamma)} (F(gamma) - F(gamma+x)) dx
///                 - sum_{x in gamma} (F(gamma\x) - F(gamma)).
/// The integral runs over F's support window (the gradient vanishes outside)
/// and is aligned to the observable's break lines and the interaction circles
/// around nearby points. Raises an accuracy error when the quadrature error
/// estimate exceeds spec.tolerance.
GeneratorValue apply_generator(const Observable& F, const Configuration& gamma,
                               const ModelParams& params, const QuadratureSpec& spec);

/// One-sample integral of z e^{-E(x,gamma)} G(gamma + x, x) over G's window
/// (the birth side of the integral identity).
IntegralEstimate insertion_integral(const PairObservable& G, const Configuration& gamma,
                                    const ModelParams& params, const QuadratureSpec& spec);

/// The two equivalent Dirichlet-form representations, estimated on the same
/// ensemble: death side sum_x D-F D-G, birth side z e^{-E} D+F D+G. The
/// difference is estimated per sample, so its standard error accounts for the
/// correlation between the two sides.
struct DirichletForms {
  Estimate death_side;
  Estimate birth_side;
  Estimate difference;
};
DirichletForms dirichlet_form_mc(const Observable& F, const Observable& G, const SampleSet& samples,
                                 const ModelParams& params, const QuadratureSpec& spec,
                                 unsigned threads = 1);

/// Terms of the generator-square identity
///   E[(HF)^2] = E[trace] + E[cross],
///   trace = sum_{x,y in gamma} (D-_x D-_y F)^2,
///   cross = sum_{x != y} (e^{phi(x-y)} - 1)
///           (F(gamma\{x,y}) - F(gamma\x)) (F(gamma\{x,y}) - F(gamma\y)).
struct CoercivityTerms {
  Estimate lhs;     // E[(HF)^2]
  Estimate trace;
  Estimate cross;
  Estimate defect;  // per-sample lhs - trace - cross
};
CoercivityTerms coercivity_terms(const Observable& F, const SampleSet& samples,
                                 const ModelParams& params, const QuadratureSpec& spec,
                                 unsigned threads = 1);

/// E[HF * G] versus the death-side Dirichlet form E[sum D-F D-G]; their
/// per-sample difference estimates the symmetry defect.
struct SymmetryDefect {
  Estimate generator_side;
  Estimate dirichlet_side;
  Estimate defect;
};
SymmetryDefect symmetry_defect(const Observable& F, const Observable& G, const SampleSet& samples,
                               const ModelParams& params, const QuadratureSpec& spec,
                               unsigned threads = 1);

/// E[HF] (zero at stationarity).
Estimate generator_mean(const Observable& F, const SampleSet& samples, const ModelParams& params,
                        const QuadratureSpec& spec, unsigned threads = 1);

/// E[(HF)^2] and E[HF * F]; the spectral bound asserts
/// E[(HF)^2] >= (1 - delta) E[HF * F].
struct GapBoundTerms {
  Estimate hf_square;
  Estimate hf_times_f;
  Estimate slack;  // per-sample (HF)^2 - (1-delta) HF*F
};
GapBoundTerms gap_bound_terms(const Observable& F, const SampleSet& samples,
                              const ModelParams& params, const QuadratureSpec& spec,
                              unsigned threads = 1);

}  // namespace glauber
