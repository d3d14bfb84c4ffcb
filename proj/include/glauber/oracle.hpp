#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "glauber/configuration.hpp"
#include "glauber/model.hpp"

namespace glauber::oracle {

/// Brute-force finite-state surrogate of the continuum dynamics: the box is
/// split into cells_per_axis^d equal cells, each holding at most one particle,
/// with at most `cap` particles in total. Births land on cell centers at rate
/// z * a * e^{-E(center, state)}; deaths run at unit rate. Exact linear
/// algebra on this chain validates the simulator on tiny instances.
struct DiscreteModel {
  ModelParams params;
  int cells_per_axis = 1;
  std::size_t cap = 1;
  std::vector<Point> centers;  // row-major over axes, size m = cells_per_axis^d
  double cell_volume = 0.0;    // a

  static DiscreteModel make(const ModelParams& params, int cells_per_axis, std::size_t cap);

  std::size_t cell_count() const { return centers.size(); }

  /// Flat cell index containing a continuum point.
  std::size_t cell_of(const Point& p) const;

  /// Pair energy between cell centers i and j under the box convention.
  double pair_energy(std::size_t i, std::size_t j) const;
};

/// Number of occupancy states (all 0/1 vectors over m cells with at most K
/// ones), before zero-weight exclusion. Throws CapacityError above the dense
/// feasibility limit of 2e5 states or past 64 cells.
std::size_t state_count(std::size_t cells, std::size_t cap);

/// Enumerated state space plus the dense CTMC generator over it. States are
/// bitmasks over cells, ordered by particle number then mask value; states of
/// infinite internal energy (hard-core overlaps between cell centers) carry
/// zero equilibrium weight and are excluded so the chain is irreducible and
/// the stationary weighting strictly positive.
struct RateMatrix {
  std::vector<std::uint64_t> states;
  std::unordered_map<std::uint64_t, std::size_t> index;
  Eigen::MatrixXd q;  // generator: off-diagonals >= 0, zero row sums

  std::size_t size() const { return states.size(); }

  /// State index of a continuum configuration snapped to cell occupancy, or
  /// nullopt when it does not correspond to an enumerated state (two points
  /// in one cell, more than `cap` points, or an excluded zero-weight state).
  std::optional<std::size_t> snap(const DiscreteModel& model, const Configuration& config) const;
};

RateMatrix build_rate_matrix(const DiscreteModel& model);

/// Solves pi Q = 0, sum(pi) = 1 by direct dense linear algebra and verifies
/// the residual ||pi Q||_inf < 1e-10 (EstimationError otherwise).
Eigen::VectorXd stationary_distribution(const RateMatrix& rm);

/// Spectral gap of the chain: verifies detailed balance of Q under pi (max
/// defect < 1e-10, ModelError otherwise), symmetrizes by the pi-weighting,
/// and returns the smallest nonzero eigenvalue magnitude of -Q.
double spectral_gap_eig(const RateMatrix& rm, const Eigen::VectorXd& pi);

/// Discrete counterpart of delta = z * integral(1 - e^{-phi}): the Riemann
/// sum z * sum_i a (1 - e^{-phi(c_i - c_r)}) over all cells i, maximized over
/// the reference cell r (reference-independent on periodic grids).
double delta_discrete(const DiscreteModel& model);

}  // namespace glauber::oracle
