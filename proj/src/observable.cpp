#include "glauber/observable.hpp"

#include <cmath>

namespace glauber {
namespace battery {
namespace {

std::array<std::vector<double>, 3> window_breaks(const Box& box, const Window& w) {
  std::array<std::vector<double>, 3> b;
  for (int i = 0; i < box.dim; ++i) b[i] = {w.lo[i], w.hi[i]};
  return b;
}

std::array<std::vector<double>, 3> merged_breaks(const Box& box, const Window& a,
                                                 const Window& b) {
  std::array<std::vector<double>, 3> out;
  for (int i = 0; i < box.dim; ++i) out[i] = {a.lo[i], a.hi[i], b.lo[i], b.hi[i]};
  return out;
}

}  // namespace

Observable window_count(const Box& box, const Window& w, const std::string& name) {
  w.validate(box);
  return Observable(
      name, w, 1e6,
      [w](const Configuration& gamma) { return static_cast<double>(gamma.count_in(w)); },
      window_breaks(box, w));
}

Observable tent_weighted_count(const Box& box, const Window& w, const std::string& name) {
  w.validate(box);
  const int dim = box.dim;
  auto eval = [w, dim](const Configuration& gamma) {
    double acc = 0.0;
    for (const Point& p : gamma.points()) {
      if (!w.contains(p, dim)) continue;
      double weight = 1.0;
      for (int i = 0; i < dim; ++i) {
        const double c = 0.5 * (w.lo[i] + w.hi[i]);
        const double half = 0.5 * (w.hi[i] - w.lo[i]);
        weight *= std::max(0.0, 1.0 - std::abs(p[i] - c) / half);
      }
      acc += weight;
    }
    return acc;
  };
  auto breaks = window_breaks(box, w);
  for (int i = 0; i < dim; ++i) breaks[i].push_back(0.5 * (w.lo[i] + w.hi[i]));
  return Observable(name, w, 1e6, eval, breaks);
}

Observable count_product(const Box& box, const Window& w1, const Window& w2,
                         const std::string& name) {
  w1.validate(box);
  w2.validate(box);
  const int dim = box.dim;
  auto eval = [w1, w2](const Configuration& gamma) {
    return static_cast<double>(gamma.count_in(w1)) * static_cast<double>(gamma.count_in(w2));
  };
  return Observable(name, Window::hull(w1, w2, dim), 1e12, eval, merged_breaks(box, w1, w2));
}

Observable smoothed_count(const Box& box, const Window& w, double scale, const std::string& name) {
  w.validate(box);
  auto eval = [w, scale](const Configuration& gamma) {
    return std::tanh(static_cast<double>(gamma.count_in(w)) / scale);
  };
  return Observable(name, w, 1.0, eval, window_breaks(box, w));
}

std::pair<Window, Window> standard_windows(const Box& box) {
  Window w1, w2;
  for (int i = 0; i < box.dim; ++i) {
    w1.lo[i] = 0.15 * box.side[i];
    w1.hi[i] = 0.60 * box.side[i];
    w2.lo[i] = 0.40 * box.side[i];
    w2.hi[i] = 0.85 * box.side[i];
  }
  return {w1, w2};
}

std::vector<Observable> standard(const Box& box) {
  const auto [w1, w2] = standard_windows(box);
  std::vector<Observable> out;
  out.push_back(window_count(box, w1, "count_a"));
  out.push_back(window_count(box, w2, "count_b"));
  out.push_back(count_product(box, w1, w2, "count_product"));
  out.push_back(smoothed_count(box, w1, 3.0, "smooth_count"));
  out.push_back(tent_weighted_count(box, w1, "tent_count"));
  return out;
}

std::vector<PairObservable> gnz_fixtures(const Box& box) {
  const auto [w1, w2] = standard_windows(box);
  const int dim = box.dim;
  std::vector<PairObservable> out;
  out.emplace_back(
      "mark_indicator", w1,
      [w1, dim](const Configuration&, const Point& x) { return w1.contains(x, dim) ? 1.0 : 0.0; },
      window_breaks(box, w1));
  out.emplace_back(
      "mark_indicator_times_count", w1,
      [w1, dim](const Configuration& gamma, const Point& x) {
        if (!w1.contains(x, dim)) return 0.0;
        return static_cast<double>(gamma.count_in(w1));
      },
      window_breaks(box, w1));
  out.emplace_back(
      "mark_indicator_times_smooth", w1,
      [w1, w2, dim](const Configuration& gamma, const Point& x) {
        if (!w1.contains(x, dim)) return 0.0;
        return std::tanh(static_cast<double>(gamma.count_in(w2)) / 2.0);
      },
      merged_breaks(box, w1, w2));
  return out;
}

}  // namespace battery
}  // namespace glauber
