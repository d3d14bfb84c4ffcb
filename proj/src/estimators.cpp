#include "glauber/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "glauber/errors.hpp"
#include "glauber/parallel.hpp"

namespace glauber {
namespace {

std::size_t k1_bin_index(const Point& p, const Box& box, int bins) {
  std::size_t flat = 0;
  for (int i = 0; i < box.dim; ++i) {
    int b = static_cast<int>(p[i] / (box.side[i] / bins));
    b = std::clamp(b, 0, bins - 1);
    flat = flat * static_cast<std::size_t>(bins) + static_cast<std::size_t>(b);
  }
  return flat;
}

double shell_volume(int dim, double r_lo, double r_hi) {
  return ball_volume(dim, r_hi) - ball_volume(dim, r_lo);
}

}  // namespace

CorrelationBins estimate_correlations(const SampleSet& samples, const ModelParams& params,
                                      int k1_bins_per_axis, std::size_t k2_bins, double r_max,
                                      unsigned threads) {
  if (k1_bins_per_axis < 1) throw DomainError("estimate_correlations: need at least one k1 bin");
  if (k2_bins < 1) throw DomainError("estimate_correlations: need at least one k2 bin");
  if (!(r_max > 0.0)) throw DomainError("estimate_correlations: r_max must be positive");
  if (params.box.boundary == Boundary::periodic && r_max > 0.5 * params.box.min_side() + 1e-12)
    throw DomainError("estimate_correlations: r_max exceeds half the box for periodic boundary");
  const std::size_t j = samples.chains.size();
  if (j < 2) throw EstimationError("estimate_correlations: need at least two chains");

  std::size_t nk1 = 1;
  for (int i = 0; i < params.box.dim; ++i) nk1 *= static_cast<std::size_t>(k1_bins_per_axis);
  const double bin_vol = params.box.volume() / static_cast<double>(nk1);

  std::vector<std::vector<double>> k1_chain(j, std::vector<double>(nk1, 0.0));
  std::vector<std::vector<double>> k2_chain(j, std::vector<double>(k2_bins, 0.0));

  parallel_for(j, threads, [&](std::size_t c) {
    const auto& chain = samples.chains[c];
    if (chain.empty()) throw EstimationError("estimate_correlations: empty chain");
    auto& k1_acc = k1_chain[c];
    auto& k2_acc = k2_chain[c];
    for (const TimedSample& ts : chain) {
      const auto& pts = ts.config.points();
      for (const Point& p : pts) k1_acc[k1_bin_index(p, params.box, k1_bins_per_axis)] += 1.0;
      for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b) {
          const double r = params.box.distance(pts[a], pts[b]);
          if (r >= r_max) continue;
          const std::size_t bin = std::min(
              static_cast<std::size_t>(r / (r_max / static_cast<double>(k2_bins))), k2_bins - 1);
          k2_acc[bin] += 2.0;  // ordered pairs
        }
    }
    const double n = static_cast<double>(chain.size());
    for (double& v : k1_acc) v /= n * bin_vol;
    for (std::size_t b = 0; b < k2_bins; ++b) {
      const double r_lo = r_max * static_cast<double>(b) / static_cast<double>(k2_bins);
      const double r_hi = r_max * static_cast<double>(b + 1) / static_cast<double>(k2_bins);
      k2_acc[b] /= n * params.box.volume() * shell_volume(params.box.dim, r_lo, r_hi);
    }
  });

  CorrelationBins out;
  out.k1_bins_per_axis = k1_bins_per_axis;
  out.k1.resize(nk1);
  out.k1_se.resize(nk1);
  std::vector<double> slot(j);
  for (std::size_t b = 0; b < nk1; ++b) {
    for (std::size_t c = 0; c < j; ++c) slot[c] = k1_chain[c][b];
    const Estimate e = batch_mean(slot);
    out.k1[b] = e.value;
    out.k1_se[b] = e.se;
  }
  out.r_edges.resize(k2_bins + 1);
  for (std::size_t b = 0; b <= k2_bins; ++b)
    out.r_edges[b] = r_max * static_cast<double>(b) / static_cast<double>(k2_bins);
  out.k2.resize(k2_bins);
  out.k2_se.resize(k2_bins);
  for (std::size_t b = 0; b < k2_bins; ++b) {
    for (std::size_t c = 0; c < j; ++c) slot[c] = k2_chain[c][b];
    const Estimate e = batch_mean(slot);
    out.k2[b] = e.value;
    out.k2_se[b] = e.se;
  }
  return out;
}

RuelleReport ruelle_check(const CorrelationBins& bins, const ModelParams& params, double sigmas) {
  if (!params.potential.nonnegative())
    throw ModelError("ruelle_check: requires a nonnegative potential");
  RuelleReport report;
  const double z = params.activity;
  for (std::size_t b = 0; b < bins.k1.size(); ++b) {
    const double se = std::max(bins.k1_se[b], 1e-300);
    const double excess = (bins.k1[b] - z) / se;
    report.worst_excess_sigmas = std::max(report.worst_excess_sigmas, excess);
    if (bins.k1[b] > z + sigmas * bins.k1_se[b]) {
      report.pass = false;
      report.k1_violations.push_back(static_cast<int>(b));
    }
  }
  for (std::size_t b = 0; b < bins.k2.size(); ++b) {
    const double se = std::max(bins.k2_se[b], 1e-300);
    const double excess = (bins.k2[b] - z * z) / se;
    report.worst_excess_sigmas = std::max(report.worst_excess_sigmas, excess);
    if (bins.k2[b] > z * z + sigmas * bins.k2_se[b]) {
      report.pass = false;
      report.k2_violations.push_back(static_cast<int>(b));
    }
  }
  return report;
}

GnzResult gnz_defect(const PairObservable& G, const SampleSet& samples, const ModelParams& params,
                     const QuadratureSpec& spec, unsigned threads) {
  const std::size_t j = samples.chains.size();
  if (j < 2) throw EstimationError("gnz_defect: need at least two chains");
  std::vector<double> occ(j), ins(j), diff(j);
  parallel_for(j, threads, [&](std::size_t c) {
    const auto& chain = samples.chains[c];
    if (chain.empty()) throw EstimationError("gnz_defect: empty chain");
    double occ_acc = 0.0, ins_acc = 0.0;
    for (const TimedSample& ts : chain) {
      double lhs = 0.0;
      for (const Point& p : ts.config.points()) {
        if (!G.window().contains(p, params.box.dim)) continue;  // G vanishes off-window
        lhs += G(ts.config, p);
      }
      const double rhs = insertion_integral(G, ts.config, params, spec).value;
      occ_acc += lhs;
      ins_acc += rhs;
    }
    const double n = static_cast<double>(chain.size());
    occ[c] = occ_acc / n;
    ins[c] = ins_acc / n;
    diff[c] = (occ_acc - ins_acc) / n;
  });
  return GnzResult{batch_mean(occ), batch_mean(ins), batch_mean(diff)};
}

AutocorrEstimate autocorrelation(const Observable& F, const ModelParams& params,
                                 const AutocorrConfig& cfg, unsigned threads) {
  if (cfg.chain_count < 2) throw EstimationError("autocorrelation: need at least two chains");
  if (!(cfg.dt > 0.0) || !(cfg.horizon > cfg.lag_max) || !(cfg.lag_max > 0.0))
    throw DomainError("autocorrelation: need dt > 0 and horizon > lag_max > 0");
  const std::size_t m = static_cast<std::size_t>(std::floor(cfg.horizon / cfg.dt)) + 1;
  const std::size_t lags = static_cast<std::size_t>(std::floor(cfg.lag_max / cfg.dt)) + 1;

  std::vector<std::vector<double>> cov(cfg.chain_count, std::vector<double>(lags, 0.0));
  parallel_for(cfg.chain_count, threads, [&](std::size_t c) {
    ChainState state(params, derive_seed(cfg.seed, c));
    advance_to(state, params, cfg.burn_in);
    std::vector<double> f(m);
    for (std::size_t k = 0; k < m; ++k) {
      advance_to(state, params, cfg.burn_in + static_cast<double>(k) * cfg.dt);
      f[k] = F(state.config);
    }
    double mean = 0.0;
    for (double v : f) mean += v;
    mean /= static_cast<double>(m);
    for (std::size_t lag = 0; lag < lags; ++lag) {
      double acc = 0.0;
      for (std::size_t i = 0; i + lag < m; ++i) acc += (f[i] - mean) * (f[i + lag] - mean);
      cov[c][lag] = acc / static_cast<double>(m - lag);
    }
  });

  AutocorrEstimate out;
  out.lag_times.resize(lags);
  for (std::size_t lag = 0; lag < lags; ++lag)
    out.lag_times[lag] = static_cast<double>(lag) * cfg.dt;

  // Pooled normalized curve and per-lag spread over chains.
  out.corr.resize(lags);
  out.corr_se.resize(lags);
  std::vector<double> slot(cfg.chain_count);
  for (std::size_t c = 0; c < cfg.chain_count; ++c)
    if (!(cov[c][0] > 0.0))
      throw EstimationError("autocorrelation: an observable chain has zero variance");
  for (std::size_t lag = 0; lag < lags; ++lag) {
    for (std::size_t c = 0; c < cfg.chain_count; ++c) slot[c] = cov[c][lag] / cov[c][0];
    const Estimate e = batch_mean(slot);
    out.corr[lag] = e.value;
    out.corr_se[lag] = e.se;
  }

  // Fit window from the pooled curve.
  std::size_t first = 1;
  while (first < lags && out.corr[first] > cfg.fit_upper) ++first;
  std::size_t last = first;
  while (last < lags && out.corr[last] > cfg.fit_lower) ++last;
  if (last >= lags) last = lags - 1;
  if (first >= lags || last <= first + 1)
    throw EstimationError("autocorrelation: unusable fit window; extend lag_max or horizon");
  out.fit_first = first;
  out.fit_last = last;

  // Per-chain exponential fit on the common window.
  for (std::size_t c = 0; c < cfg.chain_count; ++c) {
    bool positive = true;
    for (std::size_t k = first; k <= last && positive; ++k)
      if (!(cov[c][k] > 0.0)) positive = false;
    if (!positive) continue;  // this chain's curve crossed zero inside the window
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    double n = 0.0;
    for (std::size_t k = first; k <= last; ++k) {
      const double x = out.lag_times[k];
      const double y = std::log(cov[c][k]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      n += 1.0;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.lambda_chains.push_back(-slope);
  }
  if (out.lambda_chains.size() < 2)
    throw EstimationError("autocorrelation: too few usable chains for the decay fit");
  const Estimate lam = batch_mean(out.lambda_chains);
  out.lambda_hat = lam.value;
  out.lambda_se = lam.se;
  out.ci_width = 3.0 * lam.se;
  return out;
}

PoincareResult poincare_check(const Observable& F, const SampleSet& samples,
                              const ModelParams& params, double sigmas, unsigned threads) {
  const std::size_t j = samples.chains.size();
  if (j < 2) throw EstimationError("poincare_check: need at least two chains");
  const double one_minus_delta = 1.0 - params.delta;
  std::vector<double> dir(j), var(j), slack(j);
  parallel_for(j, threads, [&](std::size_t c) {
    const auto& chain = samples.chains[c];
    if (chain.size() < 2) throw EstimationError("poincare_check: chains too short");
    RunningStat fstat;
    double dir_acc = 0.0;
    for (const TimedSample& ts : chain) {
      Configuration work = ts.config;
      const double f0 = F(work);
      fstat.add(f0);
      double death = 0.0;
      for (const Point& p : ts.config.points()) {
        if (!F.support().contains(p, params.box.dim)) continue;
        work.remove_point(p);
        const double d = F(work) - f0;
        death += d * d;
        work.insert(p);
      }
      dir_acc += death;
    }
    dir[c] = dir_acc / static_cast<double>(chain.size());
    var[c] = fstat.variance();
    slack[c] = dir[c] - one_minus_delta * var[c];
  });
  PoincareResult out;
  out.dirichlet = batch_mean(dir);
  out.variance = batch_mean(var);
  out.slack = batch_mean(slack);
  out.one_minus_delta = one_minus_delta;
  out.pass = out.slack.value >= -sigmas * out.slack.se;
  return out;
}

}  // namespace glauber
