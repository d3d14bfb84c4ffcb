#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "doctest.h"
#include "glauber/rng.hpp"
#include "glauber/stats.hpp"

using namespace glauber;

TEST_CASE("streams with equal seeds produce identical draws") {
  RandomStream a(12345), b(12345);
  for (int i = 0; i < 200; ++i) {
    CHECK(a.uniform01() == b.uniform01());
    CHECK(a.uniform_index(17) == b.uniform_index(17));
    CHECK(a.poisson(4.2) == b.poisson(4.2));
    CHECK(a.exponential(1.3) == b.exponential(1.3));
  }
}

TEST_CASE("derived stream seeds differ across indices and masters") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t m : {1ULL, 2ULL, 999ULL})
    for (std::uint64_t i = 0; i < 50; ++i) seen.insert(derive_seed(m, i));
  CHECK(seen.size() == 150);  // no collisions in this small family
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("uniform draws live in the half-open unit interval with mean one half") {
  RandomStream r(7);
  RunningStat s;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double u = r.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    s.add(u);
  }
  const double se = std::sqrt(1.0 / 12.0 / n);
  CHECK(std::abs(s.mean() - 0.5) < 5.0 * se);
  CHECK(std::abs(s.variance() - 1.0 / 12.0) < 0.001);
}

TEST_CASE("uniform index covers its range evenly") {
  RandomStream r(11);
  const std::size_t k = 7;
  std::vector<std::size_t> counts(k, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    std::size_t v = r.uniform_index(k);
    REQUIRE(v < k);
    ++counts[v];
  }
  std::vector<double> probs(k, 1.0 / static_cast<double>(k));
  CHECK(chi_square_gof_pvalue(counts, probs) > 1e-4);
}

TEST_CASE("exponential waiting times have the requested mean") {
  RandomStream r(13);
  RunningStat s;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double t = r.exponential(2.0);
    REQUIRE(t >= 0.0);
    s.add(t);
  }
  // mean 1/2, sd 1/2
  CHECK(std::abs(s.mean() - 0.5) < 5.0 * 0.5 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("poisson draws match the target mean and variance") {
  RandomStream r(17);
  SUBCASE("zero mean gives zero") { CHECK(r.poisson(0.0) == 0); }
  SUBCASE("moderate mean") {
    RunningStat s;
    const int n = 100000;
    for (int i = 0; i < n; ++i) s.add(static_cast<double>(r.poisson(3.7)));
    const double se = std::sqrt(3.7 / n);
    CHECK(std::abs(s.mean() - 3.7) < 5.0 * se);
    CHECK(std::abs(s.variance() - 3.7) < 0.15);
  }
  SUBCASE("large mean exercises the chunked path") {
    RunningStat s;
    const int n = 20000;
    for (int i = 0; i < n; ++i) s.add(static_cast<double>(r.poisson(250.0)));
    const double se = std::sqrt(250.0 / n);
    CHECK(std::abs(s.mean() - 250.0) < 5.0 * se);
    CHECK(std::abs(s.variance() - 250.0) < 12.0);
  }
}

TEST_CASE("uniform points land inside the box on every axis") {
  Box b(3, {2.0, 0.5, 9.0}, Boundary::periodic);
  RandomStream r(23);
  for (int i = 0; i < 1000; ++i) {
    Point p = r.uniform_point(b);
    for (int a = 0; a < 3; ++a) {
      REQUIRE(p[a] >= 0.0);
      REQUIRE(p[a] < b.side[a]);
    }
  }
}
