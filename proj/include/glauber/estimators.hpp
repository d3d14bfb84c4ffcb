#pragma once

#include <cstdint>
#include <vector>

#include "glauber/dynamics.hpp"
#include "glauber/generator.hpp"
#include "glauber/model.hpp"
#include "glauber/observable.hpp"
#include "glauber/stats.hpp"

namespace glauber {

/// Binned one- and two-point correlation estimates with per-bin standard
/// errors (batch means over chains). k1 is a per-axis grid over the box; k2 is
/// radial, normalized so that an ideal gas at activity z gives k2 = z^2.
struct CorrelationBins {
  int k1_bins_per_axis = 0;
  std::vector<double> k1;
  std::vector<double> k1_se;
  std::vector<double> r_edges;  // k2 shell edges, size bins+1
  std::vector<double> k2;
  std::vector<double> k2_se;
};

CorrelationBins estimate_correlations(const SampleSet& samples, const ModelParams& params,
                                      int k1_bins_per_axis, std::size_t k2_bins, double r_max,
                                      unsigned threads = 1);

/// Moment bound check for nonnegative potentials: every k1 bin must satisfy
/// k1 <= z + sigmas * se, every k2 bin k2 <= z^2 + sigmas * se.
struct RuelleReport {
  bool pass = true;
  double worst_excess_sigmas = 0.0;  // most positive (estimate - bound) / se
  std::vector<int> k1_violations;
  std::vector<int> k2_violations;
};

RuelleReport ruelle_check(const CorrelationBins& bins, const ModelParams& params,
                          double sigmas = 3.0);

/// Integral identity defect: E[sum_{x in gamma} G(gamma, x)] minus
/// E[integral z e^{-E(x,gamma)} G(gamma + x, x) dx], estimated per sample.
struct GnzResult {
  Estimate occupied_side;
  Estimate insertion_side;
  Estimate defect;
};

GnzResult gnz_defect(const PairObservable& G, const SampleSet& samples, const ModelParams& params,
                     const QuadratureSpec& spec, unsigned threads = 1);

/// Stationary autocorrelation of an observable on a regular time grid, with an
/// exponential decay rate fitted on the window where the pooled curve falls
/// from `fit_upper` to `fit_lower` of its initial value.
struct AutocorrConfig {
  std::size_t chain_count = 8;
  double burn_in = 50.0;
  double horizon = 400.0;  // time span sampled after burn-in
  double dt = 0.05;
  double lag_max = 10.0;
  double fit_upper = 0.8;
  double fit_lower = 0.2;
  std::uint64_t seed = 1;
};

struct AutocorrEstimate {
  std::vector<double> lag_times;
  std::vector<double> corr;     // mean over chains of normalized curves
  std::vector<double> corr_se;  // batch-means se of the normalized curves
  std::size_t fit_first = 0;    // fit window, indices into lag_times
  std::size_t fit_last = 0;
  std::vector<double> lambda_chains;
  double lambda_hat = 0.0;
  double lambda_se = 0.0;
  double ci_width = 0.0;  // three standard errors
};

AutocorrEstimate autocorrelation(const Observable& F, const ModelParams& params,
                                 const AutocorrConfig& cfg, unsigned threads = 1);

/// Functional inequality check: death-side Dirichlet form against
/// (1 - delta) times the variance. Passes when the batched slack
/// E(F,F) - (1-delta) Var(F) is above -sigmas * se.
struct PoincareResult {
  Estimate dirichlet;
  Estimate variance;
  Estimate slack;
  double one_minus_delta = 0.0;
  bool pass = false;
};

PoincareResult poincare_check(const Observable& F, const SampleSet& samples,
                              const ModelParams& params, double sigmas = 3.0,
                              unsigned threads = 1);

}  // namespace glauber
