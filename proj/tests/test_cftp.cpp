#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "glauber/cftp.hpp"
#include "glauber/dynamics.hpp"
#include "glauber/rng.hpp"
#include "glauber/stats.hpp"

using namespace glauber;

namespace {

std::vector<double> poisson_pmf(double mean, std::size_t cells) {
  std::vector<double> pmf;
  double p = std::exp(-mean), acc = 0.0;
  for (std::size_t k = 0; k + 1 < cells; ++k) {
    pmf.push_back(p);
    acc += p;
    p *= mean / static_cast<double>(k + 1);
  }
  pmf.push_back(1.0 - acc);
  return pmf;
}

double min_pair_distance(const Configuration& c) {
  double best = 1e300;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j)
      best = std::min(best, c.box().distance(c.at(i), c.at(j)));
  return best;
}

}  // namespace

TEST_CASE("perfect draws without interaction are exactly the reference product law") {
  ModelParams m =
      ModelParams::make(1.25, Potential::zero(), Box(1, {2.0, 1.0, 1.0}, Boundary::periodic));
  const double mean = 2.5;
  std::vector<std::size_t> counts(13, 0);
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    Configuration g = cftp_sample(m, derive_seed(71, i));
    ++counts[std::min<std::size_t>(g.size(), counts.size() - 1)];
    if (i < 50)
      for (std::size_t k = 0; k < g.size(); ++k) REQUIRE(m.box.contains(g.at(k)));
  }
  CHECK(chi_square_gof_pvalue(counts, poisson_pmf(mean, counts.size())) > 1e-3);
}

TEST_CASE("perfect draws are reproducible from the seed") {
  Box box(1, {5.0, 1.0, 1.0}, Boundary::periodic);
  ModelParams m = ModelParams::make(0.8, Potential::strauss(1.0, 0.5), box);
  Configuration a = cftp_sample(m, 12345);
  Configuration b = cftp_sample(m, 12345);
  CHECK(Configuration::same_points(a, b));

  bool any_diff = false;
  for (int i = 0; i < 10 && !any_diff; ++i) {
    Configuration c = cftp_sample(m, 999 + i);
    if (!Configuration::same_points(a, c)) any_diff = true;
  }
  CHECK(any_diff);
}

TEST_CASE("perfect draws never violate hard exclusion") {
  Box box(1, {8.0, 1.0, 1.0}, Boundary::periodic);
  ModelParams m = ModelParams::make(1.5, Potential::hard_core(0.5), box);
  for (int i = 0; i < 400; ++i) {
    Configuration g = cftp_sample(m, derive_seed(83, i));
    if (g.size() >= 2) REQUIRE(min_pair_distance(g) >= 0.5);
  }
}

TEST_CASE("perfect draws match long equilibrium runs of the jump chain") {
  Box box(1, {6.0, 1.0, 1.0}, Boundary::periodic);
  ModelParams m = ModelParams::make(1.0, Potential::strauss(1.0, 0.5), box);

  std::vector<double> cftp_counts;
  for (int i = 0; i < 1500; ++i)
    cftp_counts.push_back(static_cast<double>(cftp_sample(m, derive_seed(17, i)).size()));

  std::vector<double> mcmc_counts;
  auto samples = sample_equilibrium(m, 50.0, 1500, 2.0, 4321);
  for (const auto& s : samples) mcmc_counts.push_back(static_cast<double>(s.config.size()));

  CHECK(ks_two_sample_pvalue(cftp_counts, mcmc_counts) > 0.01);
}

TEST_CASE("zero activity coalesces immediately to the empty configuration") {
  ModelParams m =
      ModelParams::make(0.0, Potential::zero(), Box(1, {3.0, 1.0, 1.0}, Boundary::periodic));
  Configuration g = cftp_sample(m, 7);
  CHECK(g.empty());
}

TEST_CASE("an exhausted event budget raises a coalescence error") {
  // dense hard-core gas: the bounding processes cannot merge in a few events
  Box box(1, {10.0, 1.0, 1.0}, Boundary::periodic);
  ModelParams m = ModelParams::make(20.0, Potential::hard_core(0.5), box);
  CftpOptions opts;
  opts.initial_events = 8;
  opts.max_events = 16;
  CHECK_THROWS_AS(cftp_sample(m, 3, opts), CoalescenceError);
}

TEST_CASE("the sampler accepts a caller-provided stream and advances it") {
  ModelParams m =
      ModelParams::make(1.0, Potential::zero(), Box(1, {2.0, 1.0, 1.0}, Boundary::periodic));
  RandomStream rng(2718);
  Configuration first = cftp_sample(m, rng);
  Configuration second = cftp_sample(m, rng);  // stream moved on: a fresh draw
  // two consecutive draws from one stream are almost surely different
  bool differ = !Configuration::same_points(first, second);
  for (int i = 0; i < 5 && !differ; ++i)
    differ = !Configuration::same_points(first, cftp_sample(m, rng));
  CHECK(differ);
}
