#pragma once

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "glauber/configuration.hpp"
#include "glauber/geometry.hpp"

namespace glauber {

/// Local bounded function of the configuration. Locality contract: the value
/// depends only on the points inside the support window, so inserting or
/// removing points outside it never changes eval. axis_breaks lists the
/// axis-aligned coordinates where eval(gamma + point at x) can jump as x
/// moves (window edges); quadrature aligns its cells to them.
class Observable {
 public:
  Observable(std::string name, Window support, double bound,
             std::function<double(const Configuration&)> eval,
             std::array<std::vector<double>, 3> breaks = {})
      : name_(std::move(name)),
        support_(support),
        bound_(bound),
        eval_(std::move(eval)),
        breaks_(std::move(breaks)) {}

  double operator()(const Configuration& gamma) const { return eval_(gamma); }
  const std::string& name() const { return name_; }
  const Window& support() const { return support_; }
  double bound() const { return bound_; }
  const std::vector<double>& axis_breaks(int axis) const { return breaks_[axis]; }

 private:
  std::string name_;
  Window support_;
  double bound_;
  std::function<double(const Configuration&)> eval_;
  std::array<std::vector<double>, 3> breaks_;
};

/// Function of (configuration, marked location) used by the integral
/// identity checks; vanishes when the mark is outside the window.
class PairObservable {
 public:
  PairObservable(std::string name, Window window,
                 std::function<double(const Configuration&, const Point&)> eval,
                 std::array<std::vector<double>, 3> breaks = {})
      : name_(std::move(name)), window_(window), eval_(std::move(eval)), breaks_(std::move(breaks)) {}

  double operator()(const Configuration& gamma, const Point& x) const { return eval_(gamma, x); }
  const std::string& name() const { return name_; }
  const Window& window() const { return window_; }
  const std::vector<double>& axis_breaks(int axis) const { return breaks_[axis]; }

 private:
  std::string name_;
  Window window_;
  std::function<double(const Configuration&, const Point&)> eval_;
  std::array<std::vector<double>, 3> breaks_;
};

namespace battery {

/// Number of points in the window.
Observable window_count(const Box& box, const Window& w, const std::string& name);

/// Sum over window points of a tent weight (1 at the window center, 0 at the
/// window boundary); a linear observable with a non-flat profile.
Observable tent_weighted_count(const Box& box, const Window& w, const std::string& name);

/// Product of two window counts.
Observable count_product(const Box& box, const Window& w1, const Window& w2,
                         const std::string& name);

/// tanh(count / scale): smooth, uniformly bounded.
Observable smoothed_count(const Box& box, const Window& w, double scale, const std::string& name);

/// The five standard observables used by the verification suites: two window
/// counts, their product, a smoothed count, and a tent-weighted count.
std::vector<Observable> standard(const Box& box);

/// Default test windows for a box: centered sub-boxes spanning [0.15, 0.60]
/// and [0.40, 0.85] of each side.
std::pair<Window, Window> standard_windows(const Box& box);

/// Marked-location fixtures for the integral identity checks:
/// indicator of the window, indicator times window count, indicator times a
/// smoothed count of a second window.
std::vector<PairObservable> gnz_fixtures(const Box& box);

}  // namespace battery
}  // namespace glauber
