#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "glauber/errors.hpp"
#include "glauber/generator.hpp"
#include "glauber/observable.hpp"
#include "glauber/oracle.hpp"
#include "glauber/rng.hpp"

using namespace glauber;
using oracle::DiscreteModel;
using oracle::RateMatrix;

namespace {

int popcount(std::uint64_t v) { return __builtin_popcountll(v); }

// Gibbs weight (z a)^{|S|} e^{-U(S)} computed straight from the definition.
double gibbs_weight(const DiscreteModel& dm, std::uint64_t state) {
  const double za = dm.params.activity * dm.cell_volume;
  double energy = 0.0;
  for (std::size_t i = 0; i < dm.cell_count(); ++i) {
    if (!(state >> i & 1)) continue;
    for (std::size_t j = i + 1; j < dm.cell_count(); ++j) {
      if (!(state >> j & 1)) continue;
      energy += dm.pair_energy(i, j);
    }
  }
  return std::pow(za, popcount(state)) * exp_neg(energy);
}

// Independent enumeration of the normalized Gibbs law over the states the
// rate matrix kept (checking separately that nothing with positive weight
// was dropped).
std::vector<double> gibbs_law(const DiscreteModel& dm, const RateMatrix& rm, std::size_t cap) {
  std::vector<double> w(rm.size());
  double total = 0.0;
  for (std::size_t s = 0; s < rm.size(); ++s) {
    w[s] = gibbs_weight(dm, rm.states[s]);
    total += w[s];
  }
  // sweep the full cube: every state outside rm.states must have zero weight
  const std::uint64_t full = std::uint64_t{1} << dm.cell_count();
  for (std::uint64_t s = 0; s < full; ++s) {
    if (popcount(s) > static_cast<int>(cap)) continue;
    if (rm.index.find(s) == rm.index.end()) REQUIRE(gibbs_weight(dm, s) == 0.0);
  }
  for (auto& x : w) x /= total;
  return w;
}

ModelParams params_1d(double z, const Potential& phi, double side) {
  return ModelParams::make(z, phi, Box(1, {side, 1.0, 1.0}, Boundary::periodic));
}

}  // namespace

TEST_CASE("the single-cell chain has the exact two-state equilibrium and rate") {
  ModelParams m = params_1d(0.7, Potential::zero(), 2.0);
  DiscreteModel dm = DiscreteModel::make(m, 1, 1);
  CHECK(dm.cell_volume == doctest::Approx(2.0));
  RateMatrix rm = oracle::build_rate_matrix(dm);
  REQUIRE(rm.size() == 2);

  const double za = 0.7 * 2.0;
  CHECK(rm.q(0, 1) == doctest::Approx(za).epsilon(1e-14));
  CHECK(rm.q(1, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rm.q(0, 0) == doctest::Approx(-za).epsilon(1e-14));

  Eigen::VectorXd pi = oracle::stationary_distribution(rm);
  CHECK(pi(0) == doctest::Approx(1.0 / (1.0 + za)).epsilon(1e-12));
  CHECK(pi(1) == doctest::Approx(za / (1.0 + za)).epsilon(1e-12));

  // two-state chain relaxes at the sum of the rates
  CHECK(oracle::spectral_gap_eig(rm, pi) == doctest::Approx(1.0 + za).epsilon(1e-10));
}

TEST_CASE("without interaction the chain factorizes into independent cells") {
  // occupancies are independent two-state chains; the equilibrium law is
  // product Bernoulli and the slowest mode still relaxes at 1 + z a
  ModelParams m = params_1d(0.5, Potential::zero(), 2.0);
  DiscreteModel dm = DiscreteModel::make(m, 10, 10);
  RateMatrix rm = oracle::build_rate_matrix(dm);
  REQUIRE(rm.size() == 1024);

  const double za = 0.5 * 0.2;
  const double p = za / (1.0 + za);
  Eigen::VectorXd pi = oracle::stationary_distribution(rm);
  for (std::size_t s = 0; s < rm.size(); ++s) {
    const int k = popcount(rm.states[s]);
    const double expected = std::pow(p, k) * std::pow(1.0 - p, 10 - k);
    REQUIRE(std::abs(pi(s) - expected) < 1e-10);
  }
  CHECK(oracle::spectral_gap_eig(rm, pi) == doctest::Approx(1.0 + za).epsilon(1e-9));
}

TEST_CASE("the stationary solve matches the normalized equilibrium weights") {
  SUBCASE("bounded-range interaction in one dimension") {
    ModelParams m = params_1d(1.0, Potential::strauss(1.0, 0.5), 3.0);
    DiscreteModel dm = DiscreteModel::make(m, 6, 4);
    RateMatrix rm = oracle::build_rate_matrix(dm);
    Eigen::VectorXd pi = oracle::stationary_distribution(rm);
    std::vector<double> ref = gibbs_law(dm, rm, 4);
    for (std::size_t s = 0; s < rm.size(); ++s) REQUIRE(std::abs(pi(s) - ref[s]) < 1e-10);
  }
  SUBCASE("two-dimensional grid") {
    Box box(2, {2.0, 2.0, 1.0}, Boundary::periodic);
    ModelParams m = ModelParams::make(0.8, Potential::strauss(0.7, 0.6), box);
    DiscreteModel dm = DiscreteModel::make(m, 3, 3);
    RateMatrix rm = oracle::build_rate_matrix(dm);
    Eigen::VectorXd pi = oracle::stationary_distribution(rm);
    std::vector<double> ref = gibbs_law(dm, rm, 3);
    for (std::size_t s = 0; s < rm.size(); ++s) REQUIRE(std::abs(pi(s) - ref[s]) < 1e-10);
  }
}

TEST_CASE("hard exclusion removes overlapping states from the chain") {
  // centres 0.25 apart, exclusion radius 0.5: neighbouring cells conflict
  ModelParams m = params_1d(1.0, Potential::hard_core(0.5), 2.0);
  DiscreteModel dm = DiscreteModel::make(m, 8, 3);
  RateMatrix rm = oracle::build_rate_matrix(dm);
  CHECK(rm.size() < oracle::state_count(8, 3));
  for (std::size_t s = 0; s < rm.size(); ++s) {
    const std::uint64_t mask = rm.states[s];
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = i + 1; j < 8; ++j)
        if ((mask >> i & 1) && (mask >> j & 1)) REQUIRE(dm.pair_energy(i, j) == 0.0);
  }
  // equilibrium is strictly positive on the kept states and reversible
  Eigen::VectorXd pi = oracle::stationary_distribution(rm);
  for (std::size_t s = 0; s < rm.size(); ++s) REQUIRE(pi(s) > 0.0);
  CHECK(oracle::spectral_gap_eig(rm, pi) > 0.0);
}

TEST_CASE("snapping continuum configurations onto cell occupancies") {
  ModelParams m = params_1d(1.0, Potential::zero(), 2.0);
  DiscreteModel dm = DiscreteModel::make(m, 4, 2);
  RateMatrix rm = oracle::build_rate_matrix(dm);

  Configuration g = m.make_configuration();
  Point a;
  a[0] = 0.1;  // cell 0
  Point b;
  b[0] = 1.6;  // cell 3
  g.insert(a);
  g.insert(b);
  auto idx = rm.snap(dm, g);
  REQUIRE(idx.has_value());
  CHECK(rm.states[*idx] == ((1u << 0) | (1u << 3)));

  Point c;
  c[0] = 0.4;  // also cell 0: collision
  g.insert(c);
  CHECK_FALSE(rm.snap(dm, g).has_value());
  g.remove_point(c);

  Point d;
  d[0] = 0.6;  // cell 1
  Point e;
  e[0] = 1.1;  // cell 2
  g.insert(d);
  g.insert(e);  // four points exceed the cap of 2
  CHECK_FALSE(rm.snap(dm, g).has_value());
}

TEST_CASE("randomized small instances satisfy the spectral lower bound") {
  RandomStream r(20260817);
  int checked = 0;
  for (int trial = 0; trial < 14; ++trial) {
    const double z = 0.2 + 1.3 * r.uniform01();
    const double side = 2.0 + 2.0 * r.uniform01();
    Potential phi = Potential::zero();
    switch (trial % 4) {
      case 0: phi = Potential::zero(); break;
      case 1: phi = Potential::strauss(0.5 + 1.5 * r.uniform01(), 0.2 + 0.2 * r.uniform01()); break;
      case 2: phi = Potential::hard_core(0.2 + 0.15 * r.uniform01()); break;
      case 3: phi = Potential::soft_gaussian(0.8, 0.12 + 0.05 * r.uniform01()); break;
    }
    ModelParams m = params_1d(z, phi, side);
    const int cells = 3 + static_cast<int>(r.uniform_index(6));
    const std::size_t cap = 2 + r.uniform_index(3);
    DiscreteModel dm = DiscreteModel::make(m, cells, cap);
    RateMatrix rm = oracle::build_rate_matrix(dm);
    if (rm.size() < 2) continue;

    Eigen::VectorXd pi = oracle::stationary_distribution(rm);
    std::vector<double> ref = gibbs_law(dm, rm, cap);
    for (std::size_t s = 0; s < rm.size(); ++s) REQUIRE(std::abs(pi(s) - ref[s]) < 1e-10);

    const double gap = oracle::spectral_gap_eig(rm, pi);  // throws unless reversible
    CHECK(gap > 0.0);
    const double delta = oracle::delta_discrete(dm);
    CAPTURE(trial);
    CAPTURE(gap);
    CAPTURE(delta);
    if (delta < 1.0) CHECK(gap >= 1.0 - delta - 1e-9);
    ++checked;
  }
  CHECK(checked >= 12);
}

TEST_CASE("the discrete interaction sum has the literal Riemann value") {
  SUBCASE("no interaction") {
    DiscreteModel dm = DiscreteModel::make(params_1d(2.0, Potential::zero(), 2.0), 6, 3);
    CHECK(oracle::delta_discrete(dm) == 0.0);
  }
  SUBCASE("bounded range touching only the self cell") {
    // centres 0.5 apart, interaction radius 0.5 (open ball): only r = 0 counts
    ModelParams m = params_1d(1.5, Potential::strauss(1.0, 0.5), 4.0);
    DiscreteModel dm = DiscreteModel::make(m, 8, 3);
    CHECK(oracle::delta_discrete(dm) ==
          doctest::Approx(1.5 * 0.5 * (1.0 - std::exp(-1.0))).epsilon(1e-13));
  }
  SUBCASE("bounded range covering the two nearest neighbours") {
    // centres 0.25 apart: cells at 0 and +-0.25 lie inside the radius
    ModelParams m = params_1d(1.5, Potential::strauss(1.0, 0.5), 4.0);
    DiscreteModel dm = DiscreteModel::make(m, 16, 3);
    CHECK(oracle::delta_discrete(dm) ==
          doctest::Approx(1.5 * 0.25 * 3.0 * (1.0 - std::exp(-1.0))).epsilon(1e-13));
  }
  SUBCASE("hard exclusion counts the self cell in full") {
    ModelParams m = params_1d(2.0, Potential::hard_core(0.5), 4.0);
    DiscreteModel dm = DiscreteModel::make(m, 8, 3);
    CHECK(oracle::delta_discrete(dm) == doctest::Approx(2.0 * 0.5).epsilon(1e-13));
  }
  SUBCASE("refining the grid approaches the continuum integral") {
    ModelParams m = params_1d(1.0, Potential::strauss(1.0, 0.5), 4.0);
    DiscreteModel dm = DiscreteModel::make(m, 64, 2);
    CHECK(std::abs(oracle::delta_discrete(dm) - m.delta) < 0.05 * m.delta + 0.05);
  }
}

TEST_CASE("generator rows of the discrete chain track the continuum operator") {
  // without interaction the defect of a window count is known exactly: the
  // discrete chain cannot give birth into an occupied cell (continuum integral
  // still covers that volume), and at the occupancy cap it gives no births at
  // all, so
  //   HF + Qf = -z a |S ∩ W|   when |S| < cap,
  //   HF + Qf = -z |W|         when |S| = cap.
  ModelParams m = params_1d(0.6, Potential::zero(), 2.0);
  DiscreteModel dm = DiscreteModel::make(m, 4, 2);
  RateMatrix rm = oracle::build_rate_matrix(dm);

  const Window w({0.5, 0.0, 0.0}, {1.5, 0.0, 0.0});  // cells 1 and 2 exactly
  Observable count = battery::window_count(m.box, w, "count");
  Eigen::VectorXd fvec(rm.size());
  std::vector<Configuration> configs;
  for (std::size_t s = 0; s < rm.size(); ++s) {
    Configuration g = m.make_configuration();
    for (std::size_t i = 0; i < dm.cell_count(); ++i)
      if (rm.states[s] >> i & 1) g.insert(dm.centers[i]);
    fvec(s) = count(g);
    configs.push_back(g);
  }
  Eigen::VectorXd qf = rm.q * fvec;

  QuadratureSpec spec;
  const double za = 0.6 * dm.cell_volume;
  const double zW = 0.6 * w.volume(1);
  for (std::size_t s = 0; s < rm.size(); ++s) {
    GeneratorValue hv = apply_generator(count, configs[s], m, spec);
    const double occupied_in_window = count(configs[s]);
    const double expected =
        popcount(rm.states[s]) == 2 ? -zW : -za * occupied_in_window;
    CHECK(hv.value + qf(s) == doctest::Approx(expected).epsilon(1e-8));
  }
}

TEST_CASE("capacity guards refuse oversized state spaces") {
  CHECK(oracle::state_count(1, 1) == 2);
  CHECK(oracle::state_count(6, 4) == 1 + 6 + 15 + 20 + 15);
  CHECK(oracle::state_count(10, 10) == 1024);
  CHECK_THROWS_AS(oracle::state_count(40, 40), CapacityError);
  CHECK_THROWS_AS(oracle::state_count(65, 2), CapacityError);
  ModelParams m = params_1d(1.0, Potential::zero(), 2.0);
  // the model object itself is cheap at 40 cells; dense enumeration is not
  DiscreteModel big = DiscreteModel::make(m, 40, 40);
  CHECK_THROWS_AS(oracle::build_rate_matrix(big), CapacityError);
  CHECK_THROWS_AS(DiscreteModel::make(m, 70, 1), CapacityError);
  CHECK_THROWS_AS(DiscreteModel::make(m, 0, 1), DomainError);
  CHECK_THROWS_AS(DiscreteModel::make(m, 4, 0), DomainError);
}

TEST_CASE("cell lookup maps points to the right centres") {
  Box box(2, {2.0, 3.0, 1.0}, Boundary::periodic);
  ModelParams m = ModelParams::make(1.0, Potential::zero(), box);
  DiscreteModel dm = DiscreteModel::make(m, 3, 2);
  REQUIRE(dm.cell_count() == 9);
  RandomStream r(31);
  for (int i = 0; i < 200; ++i) {
    Point p = r.uniform_point(box);
    const std::size_t c = dm.cell_of(p);
    REQUIRE(c < 9);
    // the centre of the chosen cell is within half a cell on every axis
    for (int ax = 0; ax < 2; ++ax)
      CHECK(std::abs(dm.centers[c][ax] - p[ax]) <= box.side[ax] / 3.0 / 2.0 + 1e-12);
  }
}
