#include "glauber/stats.hpp"

#include <algorithm>
#include <cmath>

#include "glauber/errors.hpp"

namespace glauber {

bool Estimate::within(double target, double sigmas) const {
  return std::abs(value - target) <= sigmas * se;
}

Estimate batch_mean(const std::vector<double>& chain_values) {
  const std::size_t j = chain_values.size();
  if (j < 2) throw EstimationError("batch_mean: need at least two independent chains");
  double mean = 0.0;
  for (double v : chain_values) mean += v;
  mean /= static_cast<double>(j);
  double ss = 0.0;
  for (double v : chain_values) ss += (v - mean) * (v - mean);
  const double se = std::sqrt(ss / static_cast<double>(j * (j - 1)));
  return Estimate{mean, se, j};
}

void RunningStat::add(double x) {
  ++n_;
  const double d = x - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (x - mean_);
}

double RunningStat::variance() const {
  return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1);
}

namespace {

// Regularized incomplete gamma Q(a, x) by series / continued fraction.
double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw DomainError("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {  // series for P(a, x)
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return 1.0 - sum * std::exp(-x + a * std::log(x) - gln);
  }
  // Lentz continued fraction for Q(a, x)
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - gln) * h;
}

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

}  // namespace

double chi_square_pvalue(double statistic, int dof) {
  if (dof <= 0) throw DomainError("chi_square_pvalue: dof must be positive");
  return gamma_q(0.5 * dof, 0.5 * statistic);
}

double chi_square_gof_pvalue(const std::vector<std::size_t>& counts,
                             const std::vector<double>& probabilities) {
  if (counts.size() != probabilities.size() || counts.empty())
    throw DomainError("chi_square_gof_pvalue: size mismatch");
  std::size_t n = 0;
  for (std::size_t c : counts) n += c;
  if (n == 0) throw DomainError("chi_square_gof_pvalue: no samples");

  // Pool bins from the tail until every expected count is at least 5.
  std::vector<double> obs, expd;
  double pool_o = 0.0, pool_e = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    pool_o += static_cast<double>(counts[i]);
    pool_e += probabilities[i] * static_cast<double>(n);
    if (pool_e >= 5.0) {
      obs.push_back(pool_o);
      expd.push_back(pool_e);
      pool_o = pool_e = 0.0;
    }
  }
  if (pool_e > 0.0 || pool_o > 0.0) {
    if (!expd.empty()) {
      obs.back() += pool_o;
      expd.back() += pool_e;
    } else {
      obs.push_back(pool_o);
      expd.push_back(std::max(pool_e, 1e-12));
    }
  }
  if (obs.size() < 2) throw EstimationError("chi_square_gof_pvalue: too few usable bins");
  double stat = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i)
    stat += (obs[i] - expd[i]) * (obs[i] - expd[i]) / expd[i];
  return chi_square_pvalue(stat, static_cast<int>(obs.size()) - 1);
}

double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample_pvalue: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
}

double ks_one_sample_pvalue(const std::vector<double>& samples,
                            const std::vector<double>& model_cdf) {
  if (samples.empty() || model_cdf.empty()) throw DomainError("ks_one_sample_pvalue: empty input");
  std::vector<double> s = samples;
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  std::size_t i = 0;
  for (std::size_t k = 0; k < model_cdf.size(); ++k) {
    while (i < s.size() && s[i] <= static_cast<double>(k)) ++i;
    d = std::max(d, std::abs(static_cast<double>(i) / n - model_cdf[k]));
  }
  const double ne = std::sqrt(n);
  return kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
}

double tv_distance(const std::vector<std::size_t>& counts,
                   const std::vector<double>& probabilities) {
  if (counts.size() != probabilities.size())
    throw DomainError("tv_distance: size mismatch");
  std::size_t n = 0;
  for (std::size_t c : counts) n += c;
  if (n == 0) throw DomainError("tv_distance: no samples");
  double tv = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i)
    tv += std::abs(static_cast<double>(counts[i]) / static_cast<double>(n) - probabilities[i]);
  return 0.5 * tv;
}

}  // namespace glauber
