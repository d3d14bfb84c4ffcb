#pragma once

#include <cstdint>
#include <vector>

#include "glauber/geometry.hpp"

namespace glauber {

/// Finite point configuration inside a box, backed by a uniform cell grid for
/// neighbor queries. Cells are at least as wide as the declared interaction
/// range, so any point within that range of x lives in the 3^d cell
/// neighborhood of x's cell (all cells on an axis are scanned when the axis
/// has fewer than three cells). Points are kept pairwise distinct.
class Configuration {
 public:
  /// range_hint: interaction radius the grid must support; 0 means no
  /// interactions (single cell, neighbor queries never used).
  explicit Configuration(const Box& box, double range_hint = 0.0);

  const Box& box() const { return box_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::vector<Point>& points() const { return points_; }
  const Point& at(std::size_t i) const { return points_[i]; }

  /// Insert a point (must lie inside the box). Returns its index.
  std::size_t insert(const Point& p);

  /// Remove the point at index i (swap-remove; indices are not stable).
  void remove_at(std::size_t i);

  /// Remove the point with exactly these coordinates; false if absent.
  bool remove_point(const Point& p);

  /// Index of the point with exactly these coordinates, or npos.
  std::size_t find(const Point& p) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t count_in(const Window& w) const;

  /// Visit candidate neighbors of x: every stored point whose cell is in the
  /// grid neighborhood of x's cell. Guaranteed to include all points within
  /// the range hint of x (minimum-image convention); may include farther ones.
  template <class Fn>
  void for_each_neighbor(const Point& x, Fn&& fn) const {
    std::size_t cells[kMaxNeighborCells];
    const std::size_t m = neighbor_cells(x, cells);
    for (std::size_t k = 0; k < m; ++k)
      for (std::uint32_t idx : cells_[cells[k]]) fn(points_[idx], static_cast<std::size_t>(idx));
  }

  /// True when neighbor queries at radius r are exhaustive on this grid:
  /// every axis is either fully scanned or has cells at least r wide.
  bool supports_range(double r) const {
    for (int i = 0; i < box_.dim; ++i)
      if (ncell_[i] > 2 && cell_width_[i] < r * (1.0 - 1e-12)) return false;
    return true;
  }

  /// True when the grid indexes exactly the stored points (test hook).
  bool grid_consistent() const;

  /// Set equality on the stored points (order-insensitive, exact coordinates).
  static bool same_points(const Configuration& a, const Configuration& b);

 private:
  static constexpr std::size_t kMaxNeighborCells = 3 * 3 * 3;  // <= min(n_i,3) per axis

  std::size_t flat_cell(const Point& p) const;
  std::size_t neighbor_cells(const Point& p, std::size_t* out) const;

  Box box_;
  int ncell_[3] = {1, 1, 1};
  double cell_width_[3] = {1.0, 1.0, 1.0};
  std::vector<Point> points_;
  std::vector<std::uint32_t> cell_of_;           // flat cell id per point index
  std::vector<std::vector<std::uint32_t>> cells_;  // point indices per flat cell
};

}  // namespace glauber
