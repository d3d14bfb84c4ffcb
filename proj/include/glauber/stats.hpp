#pragma once

#include <cstddef>
#include <vector>

namespace glauber {

/// Point estimate with a standard error obtained by batch means over
/// independent chains (one batch per chain).
struct Estimate {
  double value = 0.0;
  double se = 0.0;
  std::size_t batches = 0;

  bool within(double target, double sigmas) const;
};

/// Mean and standard error of the per-chain values (requires >= 2 chains).
Estimate batch_mean(const std::vector<double>& chain_values);

/// Welford accumulator.
class RunningStat {
 public:
  void add(double x);
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;  // unbiased; 0 when n < 2

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Upper-tail probability of the chi-square distribution (regularized
/// incomplete gamma Q(k/2, x/2)).
double chi_square_pvalue(double statistic, int dof);

/// Goodness-of-fit p-value of integer samples against a model pmf: bins with
/// expected count below 5 are pooled from the tail inward before applying the
/// chi-square test. `pmf(k)` must sum to 1 over k >= 0.
double chi_square_gof_pvalue(const std::vector<std::size_t>& counts,
                             const std::vector<double>& probabilities);

/// Two-sample Kolmogorov-Smirnov p-value (asymptotic; conservative for
/// discrete data).
double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b);

/// One-sample Kolmogorov-Smirnov p-value of integer samples against a model
/// cdf given as cumulative probabilities for k = 0, 1, ....
double ks_one_sample_pvalue(const std::vector<double>& samples,
                            const std::vector<double>& model_cdf);

/// Total variation distance between an empirical distribution (counts) and a
/// model distribution (probabilities) over the same index set; any empirical
/// mass outside the model support must be appended by the caller as an extra
/// count with probability zero.
double tv_distance(const std::vector<std::size_t>& counts, const std::vector<double>& probabilities);

}  // namespace glauber
