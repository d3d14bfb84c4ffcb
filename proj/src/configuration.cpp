#include "glauber/configuration.hpp"

#include <algorithm>
#include <cmath>

#include "glauber/errors.hpp"

namespace glauber {

Configuration::Configuration(const Box& box, double range_hint) : box_(box) {
  std::size_t total = 1;
  for (int i = 0; i < box_.dim; ++i) {
    int n = 1;
    if (range_hint > 0.0 && std::isfinite(range_hint))
      n = std::clamp(static_cast<int>(std::floor(box_.side[i] / range_hint)), 1, 64);
    ncell_[i] = n;
    cell_width_[i] = box_.side[i] / n;
    total *= static_cast<std::size_t>(n);
  }
  cells_.resize(total);
}

std::size_t Configuration::flat_cell(const Point& p) const {
  std::size_t flat = 0;
  for (int i = 0; i < box_.dim; ++i) {
    int idx = static_cast<int>(p[i] / cell_width_[i]);
    idx = std::clamp(idx, 0, ncell_[i] - 1);
    flat = flat * static_cast<std::size_t>(ncell_[i]) + static_cast<std::size_t>(idx);
  }
  return flat;
}

std::size_t Configuration::neighbor_cells(const Point& p, std::size_t* out) const {
  int base[3] = {0, 0, 0};
  int axis_idx[3][3];  // candidate cell indices per axis
  int axis_n[3];
  for (int i = 0; i < box_.dim; ++i) {
    base[i] = std::clamp(static_cast<int>(p[i] / cell_width_[i]), 0, ncell_[i] - 1);
    const int n = ncell_[i];
    if (n <= 2) {  // scan the whole axis; wrapping would revisit cells
      axis_n[i] = n;
      for (int k = 0; k < n; ++k) axis_idx[i][k] = k;
    } else {
      axis_n[i] = 3;
      for (int off = -1; off <= 1; ++off) {
        int idx = base[i] + off;
        if (box_.boundary == Boundary::periodic) {
          if (idx < 0) idx += n;
          if (idx >= n) idx -= n;
        } else {
          idx = std::clamp(idx, 0, n - 1);
        }
        axis_idx[i][off + 1] = idx;
      }
      // clipping at an empty boundary can duplicate the base cell
      if (axis_idx[i][0] == axis_idx[i][1]) {
        axis_idx[i][1] = axis_idx[i][2];
        axis_n[i] = (axis_idx[i][1] == axis_idx[i][0]) ? 1 : 2;
      } else if (axis_idx[i][2] == axis_idx[i][1]) {
        axis_n[i] = 2;
      }
    }
  }
  std::size_t m = 0;
  const int dim = box_.dim;
  int take[3] = {0, 0, 0};
  while (true) {
    std::size_t flat = 0;
    for (int i = 0; i < dim; ++i)
      flat = flat * static_cast<std::size_t>(ncell_[i]) +
             static_cast<std::size_t>(axis_idx[i][take[i]]);
    out[m++] = flat;
    int i = dim - 1;
    while (i >= 0 && ++take[i] == axis_n[i]) take[i--] = 0;
    if (i < 0) break;
  }
  return m;
}

std::size_t Configuration::insert(const Point& p) {
  if (!box_.contains(p)) throw DomainError("point outside the box");
  const std::size_t idx = points_.size();
  const std::size_t cell = flat_cell(p);
  points_.push_back(p);
  cell_of_.push_back(static_cast<std::uint32_t>(cell));
  cells_[cell].push_back(static_cast<std::uint32_t>(idx));
  return idx;
}

void Configuration::remove_at(std::size_t i) {
  if (i >= points_.size()) throw DomainError("remove_at: index out of range");
  auto& bucket = cells_[cell_of_[i]];
  bucket.erase(std::find(bucket.begin(), bucket.end(), static_cast<std::uint32_t>(i)));
  const std::size_t last = points_.size() - 1;
  if (i != last) {  // move the last point into slot i and retarget its cell entry
    points_[i] = points_[last];
    cell_of_[i] = cell_of_[last];
    auto& moved = cells_[cell_of_[last]];
    *std::find(moved.begin(), moved.end(), static_cast<std::uint32_t>(last)) =
        static_cast<std::uint32_t>(i);
  }
  points_.pop_back();
  cell_of_.pop_back();
}

std::size_t Configuration::find(const Point& p) const {
  if (!box_.contains(p)) return npos;
  for (std::uint32_t idx : cells_[flat_cell(p)])
    if (points_[idx] == p) return idx;
  return npos;
}

bool Configuration::remove_point(const Point& p) {
  const std::size_t i = find(p);
  if (i == npos) return false;
  remove_at(i);
  return true;
}

std::size_t Configuration::count_in(const Window& w) const {
  std::size_t n = 0;
  for (const Point& p : points_)
    if (w.contains(p, box_.dim)) ++n;
  return n;
}

bool Configuration::grid_consistent() const {
  if (cell_of_.size() != points_.size()) return false;
  std::size_t indexed = 0;
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    for (std::uint32_t idx : cells_[c]) {
      if (idx >= points_.size()) return false;
      if (cell_of_[idx] != c) return false;
      if (flat_cell(points_[idx]) != c) return false;
      ++indexed;
    }
  }
  return indexed == points_.size();
}

bool Configuration::same_points(const Configuration& a, const Configuration& b) {
  if (a.size() != b.size()) return false;
  auto key = [](const Point& p) { return std::array<double, 3>{p[0], p[1], p[2]}; };
  std::vector<std::array<double, 3>> pa, pb;
  pa.reserve(a.size());
  pb.reserve(b.size());
  for (const Point& p : a.points()) pa.push_back(key(p));
  for (const Point& p : b.points()) pb.push_back(key(p));
  std::sort(pa.begin(), pa.end());
  std::sort(pb.begin(), pb.end());
  return pa == pb;
}

}  // namespace glauber
