#pragma once

#include <string>
#include <utility>
#include <vector>

#include "glauber/dynamics.hpp"
#include "glauber/estimators.hpp"
#include "glauber/generator.hpp"
#include "glauber/model.hpp"

namespace glauber {

/// One verification statistic. For two-sided consistency checks the pass rule
/// is |estimate - target| <= threshold with threshold = sigmas * se; for
/// one-sided bound checks it is estimate >= threshold.
struct CheckResult {
  std::string name;       // stable identifier, e.g. "gnz.ind_window"
  std::string statistic;  // what the number is
  double estimate = 0.0;
  double se = 0.0;
  double target = 0.0;     // comparison point (0 for defects, bound for gaps)
  double threshold = 0.0;  // allowed deviation or required lower bound
  bool two_sided = true;
  bool pass = false;
  std::vector<std::pair<std::string, double>> details;
};

struct VerifyOptions {
  bool gnz = true;
  bool dirichlet = true;
  bool symmetry = true;
  bool coercivity = true;
  bool stationarity = true;
  bool lower_bound = true;
  bool poincare = true;
  bool ruelle = true;
  bool gap = false;  // autocorrelation fits; runs its own chains

  double sigmas = 3.0;
  QuadratureSpec quad;
  AutocorrConfig autocorr;
  int k1_bins = 4;
  std::size_t k2_bins = 8;
  double r_max = 0.0;  // 0: half the minimum box side for periodic boxes
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_pass = true;

  void add(CheckResult r) {
    all_pass = all_pass && r.pass;
    checks.push_back(std::move(r));
  }
  void add_all(std::vector<CheckResult> rs) {
    for (auto& r : rs) add(std::move(r));
  }
};

/// Individual check groups. Each returns one CheckResult per statistic; the
/// battery observables and marked fixtures are the standard ones for the box.
std::vector<CheckResult> check_gnz(const SampleSet& samples, const ModelParams& params,
                                   const QuadratureSpec& quad, double sigmas, unsigned threads);
std::vector<CheckResult> check_dirichlet(const SampleSet& samples, const ModelParams& params,
                                         const QuadratureSpec& quad, double sigmas,
                                         unsigned threads);
std::vector<CheckResult> check_symmetry(const SampleSet& samples, const ModelParams& params,
                                        const QuadratureSpec& quad, double sigmas,
                                        unsigned threads);
std::vector<CheckResult> check_coercivity(const SampleSet& samples, const ModelParams& params,
                                          const QuadratureSpec& quad, double sigmas,
                                          unsigned threads);
std::vector<CheckResult> check_stationarity(const SampleSet& samples, const ModelParams& params,
                                            const QuadratureSpec& quad, double sigmas,
                                            unsigned threads);
std::vector<CheckResult> check_lower_bound(const SampleSet& samples, const ModelParams& params,
                                           const QuadratureSpec& quad, double sigmas,
                                           unsigned threads);
std::vector<CheckResult> check_poincare(const SampleSet& samples, const ModelParams& params,
                                        double sigmas, unsigned threads);
std::vector<CheckResult> check_ruelle(const CorrelationBins& bins, const ModelParams& params,
                                      double sigmas);

/// Correlation bins with the options' binning, defaulting r_max to half the
/// smallest box side.
CorrelationBins correlation_bins(const SampleSet& samples, const ModelParams& params,
                                 const VerifyOptions& options, unsigned threads);
std::vector<CheckResult> check_gap(const ModelParams& params, const VerifyOptions& options,
                                   unsigned threads);

/// Bound check shared by check_gap and the gap subcommand: the fitted decay
/// rate must reach (1 - delta) minus the fit's confidence width.
CheckResult gap_check_result(const std::string& name, const AutocorrEstimate& est, double bound);

/// Draw one equilibrium ensemble and run every check enabled in `options`.
VerifyReport run_verification(const ModelParams& params, const EnsembleConfig& ensemble,
                              const VerifyOptions& options, unsigned threads);

}  // namespace glauber
