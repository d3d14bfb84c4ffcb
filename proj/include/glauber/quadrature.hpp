#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "glauber/geometry.hpp"

namespace glauber {

/// Controls for window integrals. `tolerance` is absolute on the integral;
/// operations that promise a tolerance raise an accuracy error when the
/// returned error estimate exceeds it.
struct QuadratureSpec {
  double tolerance = 1e-6;
  std::size_t max_cells = 40000;   // refinement budget (d <= 2)
  std::size_t qmc_points = 16384;  // total evaluations (d = 3)
  int qmc_replicates = 8;
};

struct IntegralEstimate {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  std::size_t evaluations = 0;
};

/// Integrate f over the window. For d <= 2 this is tensor Gauss-Legendre on a
/// cell decomposition: initial cells are aligned to the supplied per-axis
/// breakpoints (known discontinuity lines) and capped at `feature_scale`
/// (interaction cutoff), then cells with the largest local error indicator
/// (GL8 vs GL4 difference) are bisected until the summed indicator meets the
/// tolerance or the budget runs out. For d = 3 it is a Halton sequence with
/// shifted replicates; the error estimate is three standard errors.
IntegralEstimate integrate_window(const Window& w, int dim,
                                  const std::function<double(const Point&)>& f,
                                  const std::vector<double> axis_breaks[3], double feature_scale,
                                  const QuadratureSpec& spec);

/// Convenience overload without breakpoints.
IntegralEstimate integrate_window(const Window& w, int dim,
                                  const std::function<double(const Point&)>& f,
                                  const QuadratureSpec& spec);

}  // namespace glauber
