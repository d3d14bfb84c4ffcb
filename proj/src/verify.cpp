#include "glauber/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "glauber/errors.hpp"
#include "glauber/observable.hpp"

namespace glauber {

namespace {

CheckResult two_sided(std::string name, std::string statistic, const Estimate& est, double sigmas) {
  CheckResult r;
  r.name = std::move(name);
  r.statistic = std::move(statistic);
  r.estimate = est.value;
  r.se = est.se;
  r.target = 0.0;
  r.threshold = sigmas * est.se;
  r.two_sided = true;
  r.pass = std::abs(est.value) <= r.threshold;
  return r;
}

CheckResult one_sided(std::string name, std::string statistic, const Estimate& est, double bound,
                      double sigmas) {
  CheckResult r;
  r.name = std::move(name);
  r.statistic = std::move(statistic);
  r.estimate = est.value;
  r.se = est.se;
  r.target = bound;
  r.threshold = bound - sigmas * est.se;
  r.two_sided = false;
  r.pass = est.value >= r.threshold;
  return r;
}

}  // namespace

std::vector<CheckResult> check_gnz(const SampleSet& samples, const ModelParams& params,
                                   const QuadratureSpec& quad, double sigmas, unsigned threads) {
  std::vector<CheckResult> out;
  for (const PairObservable& g : battery::gnz_fixtures(params.box)) {
    const GnzResult res = gnz_defect(g, samples, params, quad, threads);
    CheckResult r = two_sided("gnz." + g.name(),
                              "occupied-side sum minus insertion-side integral", res.defect,
                              sigmas);
    r.details = {{"occupied_side", res.occupied_side.value},
                 {"occupied_side_se", res.occupied_side.se},
                 {"insertion_side", res.insertion_side.value},
                 {"insertion_side_se", res.insertion_side.se}};
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CheckResult> check_dirichlet(const SampleSet& samples, const ModelParams& params,
                                         const QuadratureSpec& quad, double sigmas,
                                         unsigned threads) {
  const std::vector<Observable> obs = battery::standard(params.box);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < obs.size(); ++i) pairs.emplace_back(i, i);
  pairs.emplace_back(0, 1);

  std::vector<CheckResult> out;
  for (const auto& [i, j] : pairs) {
    const DirichletForms res = dirichlet_form_mc(obs[i], obs[j], samples, params, quad, threads);
    CheckResult r = two_sided("dirichlet." + obs[i].name() + "." + obs[j].name(),
                              "death-side minus birth-side form estimate", res.difference, sigmas);
    r.details = {{"death_side", res.death_side.value},
                 {"death_side_se", res.death_side.se},
                 {"birth_side", res.birth_side.value},
                 {"birth_side_se", res.birth_side.se}};
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CheckResult> check_symmetry(const SampleSet& samples, const ModelParams& params,
                                        const QuadratureSpec& quad, double sigmas,
                                        unsigned threads) {
  const std::vector<Observable> obs = battery::standard(params.box);
  const std::pair<std::size_t, std::size_t> pairs[] = {{0, 1}, {1, 0}, {0, 3}, {3, 0}};

  std::vector<CheckResult> out;
  for (const auto& [i, j] : pairs) {
    const SymmetryDefect res = symmetry_defect(obs[i], obs[j], samples, params, quad, threads);
    CheckResult r = two_sided("symmetry." + obs[i].name() + "." + obs[j].name(),
                              "mean HF*G minus death-side form", res.defect, sigmas);
    r.details = {{"generator_side", res.generator_side.value},
                 {"generator_side_se", res.generator_side.se},
                 {"dirichlet_side", res.dirichlet_side.value},
                 {"dirichlet_side_se", res.dirichlet_side.se}};
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CheckResult> check_coercivity(const SampleSet& samples, const ModelParams& params,
                                          const QuadratureSpec& quad, double sigmas,
                                          unsigned threads) {
  std::vector<CheckResult> out;
  for (const Observable& f : battery::standard(params.box)) {
    const CoercivityTerms res = coercivity_terms(f, samples, params, quad, threads);
    CheckResult r = two_sided("coercivity." + f.name(),
                              "mean (HF)^2 minus trace term minus cross term", res.defect, sigmas);
    r.details = {{"lhs", res.lhs.value},
                 {"lhs_se", res.lhs.se},
                 {"trace", res.trace.value},
                 {"trace_se", res.trace.se},
                 {"cross", res.cross.value},
                 {"cross_se", res.cross.se}};
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CheckResult> check_stationarity(const SampleSet& samples, const ModelParams& params,
                                            const QuadratureSpec& quad, double sigmas,
                                            unsigned threads) {
  std::vector<CheckResult> out;
  for (const Observable& f : battery::standard(params.box)) {
    const Estimate res = generator_mean(f, samples, params, quad, threads);
    out.push_back(
        two_sided("stationarity." + f.name(), "mean of HF over equilibrium samples", res, sigmas));
  }
  return out;
}

std::vector<CheckResult> check_lower_bound(const SampleSet& samples, const ModelParams& params,
                                           const QuadratureSpec& quad, double sigmas,
                                           unsigned threads) {
  std::vector<CheckResult> out;
  for (const Observable& f : battery::standard(params.box)) {
    const GapBoundTerms res = gap_bound_terms(f, samples, params, quad, threads);
    CheckResult r = one_sided("lower_bound." + f.name(),
                              "mean (HF)^2 - (1-delta) HF*F (must be >= 0)", res.slack, 0.0,
                              sigmas);
    r.details = {{"hf_square", res.hf_square.value},
                 {"hf_square_se", res.hf_square.se},
                 {"hf_times_f", res.hf_times_f.value},
                 {"hf_times_f_se", res.hf_times_f.se},
                 {"one_minus_delta", 1.0 - params.delta}};
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CheckResult> check_poincare(const SampleSet& samples, const ModelParams& params,
                                        double sigmas, unsigned threads) {
  std::vector<CheckResult> out;
  for (const Observable& f : battery::standard(params.box)) {
    const PoincareResult res = poincare_check(f, samples, params, sigmas, threads);
    CheckResult r = one_sided("poincare." + f.name(),
                              "dirichlet form minus (1-delta) * variance (must be >= 0)",
                              res.slack, 0.0, sigmas);
    r.pass = res.pass;
    r.details = {{"dirichlet", res.dirichlet.value},
                 {"dirichlet_se", res.dirichlet.se},
                 {"variance", res.variance.value},
                 {"variance_se", res.variance.se},
                 {"one_minus_delta", res.one_minus_delta}};
    out.push_back(std::move(r));
  }
  return out;
}

CorrelationBins correlation_bins(const SampleSet& samples, const ModelParams& params,
                                 const VerifyOptions& options, unsigned threads) {
  double r_max = options.r_max;
  if (r_max <= 0.0) r_max = 0.5 * params.box.min_side();
  return estimate_correlations(samples, params, options.k1_bins, options.k2_bins, r_max, threads);
}

std::vector<CheckResult> check_ruelle(const CorrelationBins& bins, const ModelParams& params,
                                      double sigmas) {
  const RuelleReport rep = ruelle_check(bins, params, sigmas);

  CheckResult r;
  r.name = "ruelle.moment_bounds";
  r.statistic = "worst (estimate - bound) / se over k1 and k2 bins";
  r.estimate = rep.worst_excess_sigmas;
  r.se = 1.0;
  r.target = 0.0;
  r.threshold = sigmas;
  r.two_sided = false;
  r.pass = rep.pass;
  r.details = {{"k1_violations", static_cast<double>(rep.k1_violations.size())},
               {"k2_violations", static_cast<double>(rep.k2_violations.size())},
               {"activity", params.activity}};
  return {r};
}

CheckResult gap_check_result(const std::string& name, const AutocorrEstimate& est, double bound) {
  CheckResult r;
  r.name = "gap." + name;
  r.statistic = "fitted autocorrelation decay rate";
  r.estimate = est.lambda_hat;
  r.se = est.lambda_se;
  r.target = bound;
  // The fitted rate must reach (1 - delta) minus the fit's confidence width.
  r.threshold = bound - est.ci_width;
  r.two_sided = false;
  r.pass = est.lambda_hat >= r.threshold;
  r.details = {{"ci_width", est.ci_width},
               {"fit_first_time", est.lag_times[est.fit_first]},
               {"fit_last_time", est.lag_times[est.fit_last]},
               {"one_minus_delta", bound}};
  return r;
}

std::vector<CheckResult> check_gap(const ModelParams& params, const VerifyOptions& options,
                                   unsigned threads) {
  const double bound = 1.0 - params.delta;
  std::vector<CheckResult> out;
  double min_lambda = std::numeric_limits<double>::infinity();
  double min_ci = 0.0;
  std::string min_name;

  for (const Observable& f : battery::standard(params.box)) {
    const AutocorrEstimate est = autocorrelation(f, params, options.autocorr, threads);
    if (est.lambda_hat < min_lambda) {
      min_lambda = est.lambda_hat;
      min_ci = est.ci_width;
      min_name = f.name();
    }
    out.push_back(gap_check_result(f.name(), est, bound));
  }

  CheckResult overall;
  overall.name = "gap.min_over_battery";
  overall.statistic = "slowest fitted decay rate over the battery (observable: " + min_name + ")";
  overall.estimate = min_lambda;
  overall.se = min_ci / 3.0;
  overall.target = bound;
  overall.threshold = bound - min_ci;
  overall.two_sided = false;
  overall.pass = min_lambda >= overall.threshold;
  overall.details = {{"ci_width", min_ci}};
  out.push_back(std::move(overall));
  return out;
}

VerifyReport run_verification(const ModelParams& params, const EnsembleConfig& ensemble,
                              const VerifyOptions& options, unsigned threads) {
  const bool needs_samples = options.gnz || options.dirichlet || options.symmetry ||
                             options.coercivity || options.stationarity || options.lower_bound ||
                             options.poincare || options.ruelle;
  if (needs_samples && (ensemble.samples_per_chain == 0 || ensemble.chain_count == 0))
    throw DomainError("verification requires a positive sample count");

  VerifyReport report;
  if (needs_samples) {
    const SampleSet samples = sample_ensemble(params, ensemble, threads);
    if (options.gnz) report.add_all(check_gnz(samples, params, options.quad, options.sigmas, threads));
    if (options.dirichlet)
      report.add_all(check_dirichlet(samples, params, options.quad, options.sigmas, threads));
    if (options.symmetry)
      report.add_all(check_symmetry(samples, params, options.quad, options.sigmas, threads));
    if (options.coercivity)
      report.add_all(check_coercivity(samples, params, options.quad, options.sigmas, threads));
    if (options.stationarity)
      report.add_all(check_stationarity(samples, params, options.quad, options.sigmas, threads));
    if (options.lower_bound)
      report.add_all(check_lower_bound(samples, params, options.quad, options.sigmas, threads));
    if (options.poincare)
      report.add_all(check_poincare(samples, params, options.sigmas, threads));
    if (options.ruelle)
      report.add_all(
          check_ruelle(correlation_bins(samples, params, options, threads), params, options.sigmas));
  }
  if (options.gap) report.add_all(check_gap(params, options, threads));
  return report;
}

}  // namespace glauber
