#include "glauber/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "glauber/errors.hpp"
#include "glauber/rng.hpp"

namespace glauber {
namespace {

// Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGl4X[] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                            0.8611363115940526};
constexpr double kGl4W[] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                            0.3478548451374538};
constexpr double kGl8X[] = {-0.9602898564975362, -0.7966664774136267, -0.5255324099163290,
                            -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                            0.7966664774136267,  0.9602898564975362};
constexpr double kGl8W[] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                            0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                            0.2223810344533745, 0.1012285362903763};

struct Cell {
  double lo[2], hi[2];
  double value = 0.0;  // GL8 estimate
  double err = 0.0;    // |GL8 - GL4|
};

struct CellOrder {
  bool operator()(const Cell& a, const Cell& b) const { return a.err < b.err; }
};

template <int N>
double tensor_gl(const Cell& c, int dim, const std::function<double(const Point&)>& f,
                 const double* xs, const double* ws) {
  double acc = 0.0;
  if (dim == 1) {
    const double mid = 0.5 * (c.lo[0] + c.hi[0]);
    const double half = 0.5 * (c.hi[0] - c.lo[0]);
    for (int i = 0; i < N; ++i) {
      Point p;
      p[0] = mid + half * xs[i];
      acc += ws[i] * f(p);
    }
    return acc * half;
  }
  const double mid0 = 0.5 * (c.lo[0] + c.hi[0]), half0 = 0.5 * (c.hi[0] - c.lo[0]);
  const double mid1 = 0.5 * (c.lo[1] + c.hi[1]), half1 = 0.5 * (c.hi[1] - c.lo[1]);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      Point p;
      p[0] = mid0 + half0 * xs[i];
      p[1] = mid1 + half1 * xs[j];
      acc += ws[i] * ws[j] * f(p);
    }
  return acc * half0 * half1;
}

void evaluate_cell(Cell& c, int dim, const std::function<double(const Point&)>& f,
                   std::size_t& evals) {
  const double hi = tensor_gl<8>(c, dim, f, kGl8X, kGl8W);
  const double lo = tensor_gl<4>(c, dim, f, kGl4X, kGl4W);
  c.value = hi;
  c.err = std::abs(hi - lo);
  evals += (dim == 1) ? 12 : 80;
}

std::vector<double> axis_partition(double lo, double hi, const std::vector<double>& breaks,
                                   double feature_scale) {
  std::vector<double> edges{lo, hi};
  for (double b : breaks)
    if (b > lo + 1e-13 && b < hi - 1e-13) edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-13; }),
              edges.end());
  if (feature_scale > 0.0 && std::isfinite(feature_scale)) {
    std::vector<double> fine;
    fine.push_back(edges.front());
    for (std::size_t i = 1; i < edges.size(); ++i) {
      const double a = edges[i - 1], b = edges[i];
      const int parts = std::max(1, static_cast<int>(std::ceil((b - a) / feature_scale)));
      for (int k = 1; k <= parts; ++k) fine.push_back(a + (b - a) * k / parts);
    }
    edges = std::move(fine);
  }
  return edges;
}

IntegralEstimate integrate_qmc(const Window& w, int dim,
                               const std::function<double(const Point&)>& f,
                               const QuadratureSpec& spec) {
  const int reps = std::max(2, spec.qmc_replicates);
  const std::size_t per = std::max<std::size_t>(64, spec.qmc_points / reps);
  const int bases[3] = {2, 3, 5};
  double vol = 1.0;
  for (int i = 0; i < dim; ++i) vol *= (w.hi[i] - w.lo[i]);

  auto halton = [&](std::size_t index, int base) {
    double result = 0.0, frac = 1.0 / base;
    std::size_t i = index + 1;
    while (i > 0) {
      result += frac * (i % base);
      i /= base;
      frac /= base;
    }
    return result;
  };

  std::vector<double> estimates(reps);
  std::size_t evals = 0;
  for (int r = 0; r < reps; ++r) {
    RandomStream shift_stream(derive_seed(0x5eedc0debadcafeULL, static_cast<std::uint64_t>(r)));
    double shift[3];
    for (int i = 0; i < dim; ++i) shift[i] = shift_stream.uniform01();
    double acc = 0.0;
    for (std::size_t k = 0; k < per; ++k) {
      Point p;
      for (int i = 0; i < dim; ++i) {
        double u = halton(k, bases[i]) + shift[i];
        u -= std::floor(u);
        p[i] = w.lo[i] + (w.hi[i] - w.lo[i]) * u;
      }
      acc += f(p);
      ++evals;
    }
    estimates[r] = vol * acc / static_cast<double>(per);
  }
  double mean = 0.0;
  for (double e : estimates) mean += e;
  mean /= reps;
  double var = 0.0;
  for (double e : estimates) var += (e - mean) * (e - mean);
  var /= (reps - 1);
  const double se = std::sqrt(var / reps);
  return IntegralEstimate{mean, 3.0 * se, evals};
}

}  // namespace

IntegralEstimate integrate_window(const Window& w, int dim,
                                  const std::function<double(const Point&)>& f,
                                  const std::vector<double> axis_breaks[3], double feature_scale,
                                  const QuadratureSpec& spec) {
  if (dim < 1 || dim > 3) throw DomainError("integrate_window: dimension must be 1, 2 or 3");
  if (dim == 3) return integrate_qmc(w, dim, f, spec);

  static const std::vector<double> kNoBreaks;
  std::vector<Cell> heap;
  std::size_t evals = 0;
  const auto& bx = axis_breaks ? axis_breaks[0] : kNoBreaks;
  const std::vector<double> ex = axis_partition(w.lo[0], w.hi[0], bx, feature_scale);
  if (dim == 1) {
    for (std::size_t i = 1; i < ex.size(); ++i) {
      Cell c{{ex[i - 1], 0.0}, {ex[i], 0.0}};
      evaluate_cell(c, dim, f, evals);
      heap.push_back(c);
    }
  } else {
    const auto& by = axis_breaks ? axis_breaks[1] : kNoBreaks;
    const std::vector<double> ey = axis_partition(w.lo[1], w.hi[1], by, feature_scale);
    for (std::size_t i = 1; i < ex.size(); ++i)
      for (std::size_t j = 1; j < ey.size(); ++j) {
        Cell c{{ex[i - 1], ey[j - 1]}, {ex[i], ey[j]}};
        evaluate_cell(c, dim, f, evals);
        heap.push_back(c);
      }
  }

  const CellOrder order;
  std::make_heap(heap.begin(), heap.end(), order);
  double total_err = 0.0;
  for (const Cell& c : heap) total_err += c.err;

  const double kMinWidth = 1e-9;
  while (total_err > spec.tolerance && heap.size() < spec.max_cells) {
    std::pop_heap(heap.begin(), heap.end(), order);
    Cell worst = heap.back();
    heap.pop_back();
    const int axis = (dim == 2 && (worst.hi[1] - worst.lo[1]) > (worst.hi[0] - worst.lo[0])) ? 1 : 0;
    if (worst.hi[axis] - worst.lo[axis] < kMinWidth) {
      // Cannot usefully split further: keep the cell and accept its error.
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end(), order);
      break;
    }
    total_err -= worst.err;
    const double mid = 0.5 * (worst.lo[axis] + worst.hi[axis]);
    Cell left = worst, right = worst;
    left.hi[axis] = mid;
    right.lo[axis] = mid;
    evaluate_cell(left, dim, f, evals);
    evaluate_cell(right, dim, f, evals);
    total_err += left.err + right.err;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), order);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), order);
  }

  double value = 0.0, err = 0.0;
  for (const Cell& c : heap) {
    value += c.value;
    err += c.err;
  }
  return IntegralEstimate{value, err, evals};
}

IntegralEstimate integrate_window(const Window& w, int dim,
                                  const std::function<double(const Point&)>& f,
                                  const QuadratureSpec& spec) {
  return integrate_window(w, dim, f, nullptr, 0.0, spec);
}

}  // namespace glauber
