#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "glauber/configuration.hpp"
#include "glauber/rng.hpp"

using namespace glauber;

namespace {

// Brute-force pair count within radius r (minimum image) between x and all
// stored points other than index `skip`.
std::size_t brute_neighbors_within(const Configuration& c, const Point& x, double r,
                                   std::size_t skip = Configuration::npos) {
  std::size_t n = 0;
  const double r2 = r * r;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i == skip) continue;
    if (c.box().distance2(x, c.at(i)) <= r2) ++n;
  }
  return n;
}

std::size_t grid_neighbors_within(const Configuration& c, const Point& x, double r,
                                  std::size_t skip = Configuration::npos) {
  std::size_t n = 0;
  const double r2 = r * r;
  c.for_each_neighbor(x, [&](const Point& p, std::size_t idx) {
    if (idx == skip) return;
    if (c.box().distance2(x, p) <= r2) ++n;
  });
  return n;
}

}  // namespace

TEST_CASE("insert, find and remove keep exact bookkeeping") {
  Box box(2, {3.0, 3.0, 1.0}, Boundary::periodic);
  Configuration c(box, 0.5);
  CHECK(c.empty());

  Point a;
  a[0] = 0.5;
  a[1] = 0.5;
  Point b;
  b[0] = 2.5;
  b[1] = 1.0;
  c.insert(a);
  c.insert(b);
  CHECK(c.size() == 2);
  CHECK(c.find(a) != Configuration::npos);
  CHECK(c.find(b) != Configuration::npos);

  Point missing;
  missing[0] = 1.0;
  missing[1] = 1.0;
  CHECK(c.find(missing) == Configuration::npos);
  CHECK_FALSE(c.remove_point(missing));

  CHECK(c.remove_point(a));
  CHECK(c.size() == 1);
  CHECK(c.find(a) == Configuration::npos);
  CHECK(c.grid_consistent());

  Point outside;
  outside[0] = -0.1;
  CHECK_THROWS_AS(c.insert(outside), DomainError);
  CHECK_THROWS_AS(c.remove_at(5), DomainError);
}

TEST_CASE("swap removal keeps the grid index consistent") {
  Box box(1, {10.0, 1.0, 1.0}, Boundary::periodic);
  Configuration c(box, 1.0);
  for (int i = 0; i < 8; ++i) {
    Point p;
    p[0] = 0.7 + i * 1.1;
    c.insert(p);
  }
  REQUIRE(c.grid_consistent());
  c.remove_at(0);  // moves the last point into slot 0
  CHECK(c.size() == 7);
  CHECK(c.grid_consistent());
  c.remove_at(3);
  c.remove_at(0);
  CHECK(c.size() == 5);
  CHECK(c.grid_consistent());
}

TEST_CASE("window counts match a direct scan") {
  Box box(2, {4.0, 4.0, 1.0}, Boundary::periodic);
  Configuration c(box, 0.0);
  RandomStream r(99);
  for (int i = 0; i < 200; ++i) c.insert(r.uniform_point(box));
  Window w({0.5, 1.0, 0.0}, {2.5, 3.0, 0.0});
  std::size_t direct = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (w.contains(c.at(i), 2)) ++direct;
  CHECK(c.count_in(w) == direct);
}

TEST_CASE("neighbor queries are exhaustive within the range hint under random churn") {
  const double range = 0.45;
  for (int dim : {1, 2, 3}) {
    for (Boundary bc : {Boundary::periodic, Boundary::empty}) {
      CAPTURE(dim);
      Box box(dim, {3.1, 2.6, 2.2}, bc);
      Configuration c(box, range);
      REQUIRE(c.supports_range(range));
      RandomStream r(1000 + dim);
      for (int step = 0; step < 600; ++step) {
        if (c.empty() || r.uniform01() < 0.6) {
          c.insert(r.uniform_point(box));
        } else {
          c.remove_at(r.uniform_index(c.size()));
        }
        REQUIRE(c.grid_consistent());
        // probe at a fresh location and at an existing point
        Point probe = r.uniform_point(box);
        REQUIRE(grid_neighbors_within(c, probe, range) ==
                brute_neighbors_within(c, probe, range));
        if (!c.empty()) {
          std::size_t i = r.uniform_index(c.size());
          REQUIRE(grid_neighbors_within(c, c.at(i), range, i) ==
                  brute_neighbors_within(c, c.at(i), range, i));
        }
      }
    }
  }
}

TEST_CASE("distance sums over neighbors agree with brute force to machine precision") {
  const double range = 0.6;
  Box box(2, {5.0, 5.0, 1.0}, Boundary::periodic);
  Configuration c(box, range);
  RandomStream r(424242);
  for (int i = 0; i < 300; ++i) c.insert(r.uniform_point(box));

  for (int probe = 0; probe < 50; ++probe) {
    Point x = r.uniform_point(box);
    const double r2 = range * range;
    double via_grid = 0.0;
    c.for_each_neighbor(x, [&](const Point& p, std::size_t) {
      const double d2 = box.distance2(x, p);
      if (d2 <= r2) via_grid += std::sqrt(d2);
    });
    double brute = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double d2 = box.distance2(x, c.at(i));
      if (d2 <= r2) brute += std::sqrt(d2);
    }
    // identical terms in possibly different order
    CHECK(via_grid == doctest::Approx(brute).epsilon(1e-12));
  }
}

TEST_CASE("range support reports honest coverage") {
  Box box(2, {4.0, 4.0, 1.0}, Boundary::periodic);
  Configuration fine(box, 0.5);  // 8 cells per axis of width 0.5
  CHECK(fine.supports_range(0.5));
  CHECK(fine.supports_range(0.4));
  CHECK_FALSE(fine.supports_range(0.8));
  Configuration coarse(box, 2.0);  // two cells per axis: always scanned fully
  CHECK(coarse.supports_range(3.9));
}

TEST_CASE("set equality of configurations ignores storage order") {
  Box box(1, {5.0, 1.0, 1.0});
  Configuration a(box), b(box);
  Point p, q;
  p[0] = 1.0;
  q[0] = 2.0;
  a.insert(p);
  a.insert(q);
  b.insert(q);
  b.insert(p);
  CHECK(Configuration::same_points(a, b));
  b.remove_point(p);
  CHECK_FALSE(Configuration::same_points(a, b));
  Point near = p;
  near[0] += 1e-13;  // exact coordinates matter
  b.insert(near);
  CHECK_FALSE(Configuration::same_points(a, b));
}

TEST_CASE("a zero range hint collapses the grid to a single cell") {
  Box box(3, {1.0, 1.0, 1.0});
  Configuration c(box, 0.0);
  RandomStream r(5);
  for (int i = 0; i < 20; ++i) c.insert(r.uniform_point(box));
  CHECK(c.grid_consistent());
  // every point is everybody's neighbor candidate
  std::size_t seen = 0;
  c.for_each_neighbor(c.at(0), [&](const Point&, std::size_t) { ++seen; });
  CHECK(seen == c.size());
}
