#include <cmath>
#include <vector>

#include "doctest.h"
#include "glauber/estimators.hpp"
#include "glauber/observable.hpp"
#include "glauber/rng.hpp"

using namespace glauber;

namespace {

SampleSet ideal_ensemble(const ModelParams& m, std::size_t chains, std::size_t per,
                         std::uint64_t seed) {
  EnsembleConfig cfg;
  cfg.chain_count = chains;
  cfg.samples_per_chain = per;
  cfg.burn_in = 25.0;
  cfg.spacing = 0.6;
  cfg.seed = seed;
  return sample_ensemble(m, cfg, 1);
}

}  // namespace

TEST_CASE("correlation estimates of the ideal gas match the product law") {
  Box box(2, {3.0, 3.0, 1.0}, Boundary::periodic);
  ModelParams m = ModelParams::make(1.2, Potential::zero(), box);
  SampleSet samples = ideal_ensemble(m, 8, 600, 91);
  CorrelationBins bins = estimate_correlations(samples, m, 3, 5, 1.4, 1);

  REQUIRE(bins.k1.size() == 9);
  for (std::size_t i = 0; i < bins.k1.size(); ++i) {
    CHECK(bins.k1_se[i] > 0.0);
    CHECK(std::abs(bins.k1[i] - 1.2) <= 4.0 * bins.k1_se[i]);
  }
  REQUIRE(bins.k2.size() == 5);
  REQUIRE(bins.r_edges.size() == 6);
  for (std::size_t i = 0; i < bins.k2.size(); ++i) {
    CHECK(std::abs(bins.k2[i] - 1.44) <= 4.0 * bins.k2_se[i]);
  }
}

TEST_CASE("the flat index of the one-point grid runs the first axis slowest") {
  Box box(2, {3.0, 6.0, 1.0}, Boundary::periodic);
  ModelParams m = ModelParams::make(1.0, Potential::zero(), box);
  Configuration g = m.make_configuration();
  Point p;
  p[0] = 0.1;  // axis-0 bin 0 of 2
  p[1] = 5.9;  // axis-1 bin 1 of 2
  g.insert(p);
  SampleSet samples;
  samples.chains.push_back({TimedSample{0.0, g}});
  samples.chains.push_back({TimedSample{0.0, g}});

  CorrelationBins bins = estimate_correlations(samples, m, 2, 2, 1.0, 1);
  REQUIRE(bins.k1.size() == 4);
  const double cell_volume = 1.5 * 3.0;
  CHECK(bins.k1[0 * 2 + 1] == doctest::Approx(1.0 / cell_volume));  // (bin0, bin1)
  CHECK(bins.k1[0] == 0.0);
  CHECK(bins.k1[2] == 0.0);
  CHECK(bins.k1[3] == 0.0);
}

TEST_CASE("pair correlations vanish inside a hard exclusion radius") {
  Box box(1, {8.0, 1.0, 1.0}, Boundary::periodic);
  ModelParams m = ModelParams::make(1.5, Potential::hard_core(0.5), box);
  SampleSet samples = ideal_ensemble(m, 4, 400, 77);
  CorrelationBins bins = estimate_correlations(samples, m, 2, 8, 2.0, 1);
  // shells of width 0.25: the first two lie strictly inside the exclusion ball
  REQUIRE(bins.r_edges[2] == doctest::Approx(0.5));
  CHECK(bins.k2[0] == 0.0);
  CHECK(bins.k2_se[0] == 0.0);
  CHECK(bins.k2[1] == 0.0);
  // beyond the exclusion radius pairs do occur
  double beyond = 0.0;
  for (std::size_t i = 2; i < bins.k2.size(); ++i) beyond += bins.k2[i];
  CHECK(beyond > 0.0);
}

TEST_CASE("the moment bound accepts lawful ensembles and flags inflated ones") {
  Box box(1, {8.0, 1.0, 1.0}, Boundary::periodic);
  ModelParams m = ModelParams::make(1.0, Potential::strauss(1.0, 0.5), box);
  SampleSet samples = ideal_ensemble(m, 6, 500, 55);
  CorrelationBins bins = estimate_correlations(samples, m, 4, 6, 2.0, 1);
  RuelleReport ok = ruelle_check(bins, m, 3.0);
  CHECK(ok.pass);
  CHECK(ok.k1_violations.empty());
  CHECK(ok.k2_violations.empty());

  // the same samples claimed to come from half the activity must be rejected
  ModelParams wrong = ModelParams::make(0.35, Potential::strauss(1.0, 0.5), box);
  RuelleReport bad = ruelle_check(bins, wrong, 3.0);
  CHECK_FALSE(bad.pass);
  CHECK(bad.worst_excess_sigmas > 3.0);
  CHECK(!bad.k1_violations.empty());
}

TEST_CASE("the insertion-balance identity holds on equilibrium ensembles") {
  SUBCASE("ideal gas: the insertion side is deterministic") {
    Box box(2, {4.0, 4.0, 1.0}, Boundary::periodic);
    ModelParams m = ModelParams::make(1.0, Potential::zero(), box);
    SampleSet samples = ideal_ensemble(m, 6, 300, 2077);
    const auto fixtures = battery::gnz_fixtures(box);
    QuadratureSpec spec;
    GnzResult r = gnz_defect(fixtures[0], samples, m, spec, 1);
    const Window& w = fixtures[0].window();
    CHECK(r.insertion_side.value == doctest::Approx(w.volume(2)).epsilon(1e-9));
    CHECK(r.insertion_side.se < 1e-9);
    CHECK(r.occupied_side.within(w.volume(2), 3.5));
    CHECK(r.defect.within(0.0, 3.5));
  }
  SUBCASE("with interaction both sides drop below the ideal value together") {
    Box box(1, {6.0, 1.0, 1.0}, Boundary::periodic);
    ModelParams m = ModelParams::make(1.0, Potential::strauss(1.0, 0.5), box);
    SampleSet samples = ideal_ensemble(m, 6, 500, 2078);
    const auto fixtures = battery::gnz_fixtures(box);
    QuadratureSpec spec;
    for (const auto& G : fixtures) {
      GnzResult r = gnz_defect(G, samples, m, spec, 1);
      CHECK(r.defect.within(0.0, 4.0));
    }
  }
}

TEST_CASE("the fitted relaxation rate of a linear observable is one without interaction") {
  // each window count relaxes at unit rate under the free dynamics
  Box box(1, {4.0, 1.0, 1.0}, Boundary::periodic);
  ModelParams m = ModelParams::make(1.0, Potential::zero(), box);
  Window w({0.5, 0.0, 0.0}, {3.5, 0.0, 0.0});
  Observable count = battery::window_count(box, w, "count");
  AutocorrConfig cfg;
  cfg.chain_count = 8;
  cfg.burn_in = 30.0;
  cfg.horizon = 600.0;
  cfg.dt = 0.05;
  cfg.lag_max = 6.0;
  cfg.seed = 808;
  AutocorrEstimate est = autocorrelation(count, m, cfg, 1);
  CHECK(est.lambda_hat == doctest::Approx(1.0).epsilon(0.1));
  CHECK(est.ci_width > 0.0);
  CHECK(est.lambda_chains.size() == 8);
  CHECK(est.fit_last > est.fit_first);
  REQUIRE(!est.corr.empty());
  CHECK(est.corr[0] == doctest::Approx(1.0));  // normalized at lag zero
}

TEST_CASE("a constant observable has no decay rate to fit") {
  Box box(1, {4.0, 1.0, 1.0}, Boundary::periodic);
  ModelParams m = ModelParams::make(1.0, Potential::zero(), box);
  Observable c("const", Window({0.5, 0.0, 0.0}, {3.5, 0.0, 0.0}), 1.0,
               [](const Configuration&) { return 2.0; });
  AutocorrConfig cfg;
  cfg.chain_count = 4;
  cfg.burn_in = 5.0;
  cfg.horizon = 20.0;
  cfg.seed = 9;
  CHECK_THROWS_AS(autocorrelation(c, m, cfg, 1), EstimationError);
}

TEST_CASE("the variance bound holds on equilibrium ensembles") {
  SUBCASE("without interaction the bound is tight for window counts") {
    Box box(2, {4.0, 4.0, 1.0}, Boundary::periodic);
    ModelParams m = ModelParams::make(1.0, Potential::zero(), box);
    SampleSet samples = ideal_ensemble(m, 8, 400, 3001);
    const auto obs = battery::standard(box);
    for (const auto& F : obs) {
      PoincareResult r = poincare_check(F, samples, m, 3.0, 1);
      CHECK(r.pass);
      CHECK(r.one_minus_delta == 1.0);
      CHECK(r.variance.value > 0.0);
    }
  }
  SUBCASE("with interaction the weighted bound still holds") {
    Box box(1, {6.0, 1.0, 1.0}, Boundary::periodic);
    ModelParams m = ModelParams::make(0.8, Potential::strauss(1.0, 0.5), box);
    SampleSet samples = ideal_ensemble(m, 8, 500, 3002);
    const auto obs = battery::standard(box);
    PoincareResult r = poincare_check(obs[0], samples, m, 3.0, 1);
    CHECK(r.pass);
    CHECK(r.one_minus_delta == doctest::Approx(1.0 - m.delta));
  }
}

TEST_CASE("correlation estimation is independent of the worker count") {
  Box box(2, {3.0, 3.0, 1.0}, Boundary::periodic);
  ModelParams m = ModelParams::make(1.0, Potential::strauss(0.5, 0.5), box);
  SampleSet samples = ideal_ensemble(m, 4, 150, 404);
  CorrelationBins one = estimate_correlations(samples, m, 3, 4, 1.2, 1);
  CorrelationBins four = estimate_correlations(samples, m, 3, 4, 1.2, 4);
  for (std::size_t i = 0; i < one.k1.size(); ++i) CHECK(one.k1[i] == four.k1[i]);
  for (std::size_t i = 0; i < one.k2.size(); ++i) CHECK(one.k2[i] == four.k2[i]);
}
