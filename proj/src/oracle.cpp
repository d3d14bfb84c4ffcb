#include "glauber/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "glauber/errors.hpp"

namespace glauber::oracle {

namespace {

constexpr std::size_t kMaxStates = 200000;  // dense feasibility limit
constexpr std::size_t kMaxCells = 64;       // bitmask width

int popcount(std::uint64_t v) { return __builtin_popcountll(v); }

}  // namespace

DiscreteModel DiscreteModel::make(const ModelParams& params, int cells_per_axis,
                                  std::size_t cap) {
  if (cells_per_axis < 1) throw DomainError("cells_per_axis must be at least 1");
  if (cap < 1) throw DomainError("occupancy cap must be at least 1");

  DiscreteModel model;
  model.params = params;
  model.cells_per_axis = cells_per_axis;

  const int d = params.box.dim;
  std::size_t m = 1;
  for (int i = 0; i < d; ++i) m *= static_cast<std::size_t>(cells_per_axis);
  if (m > kMaxCells) throw CapacityError("discrete model exceeds 64 cells");

  model.cap = std::min(cap, m);
  model.centers.resize(m);
  double volume = 1.0;
  for (int i = 0; i < d; ++i) volume *= params.box.side[i] / cells_per_axis;
  model.cell_volume = volume;

  for (std::size_t flat = 0; flat < m; ++flat) {
    Point c{};
    std::size_t rem = flat;
    for (int i = 0; i < d; ++i) {
      const std::size_t k = rem % static_cast<std::size_t>(cells_per_axis);
      rem /= static_cast<std::size_t>(cells_per_axis);
      const double width = params.box.side[i] / cells_per_axis;
      c[i] = (static_cast<double>(k) + 0.5) * width;
    }
    model.centers[flat] = c;
  }
  return model;
}

std::size_t DiscreteModel::cell_of(const Point& p) const {
  const int d = params.box.dim;
  std::size_t flat = 0;
  std::size_t stride = 1;
  for (int i = 0; i < d; ++i) {
    const double width = params.box.side[i] / cells_per_axis;
    auto k = static_cast<long long>(std::floor(p[i] / width));
    k = std::clamp(k, 0LL, static_cast<long long>(cells_per_axis) - 1);
    flat += stride * static_cast<std::size_t>(k);
    stride *= static_cast<std::size_t>(cells_per_axis);
  }
  return flat;
}

double DiscreteModel::pair_energy(std::size_t i, std::size_t j) const {
  const Point v = params.box.displacement(centers[i], centers[j]);
  return params.potential.evaluate(v, params.box.dim);
}

std::size_t state_count(std::size_t cells, std::size_t cap) {
  if (cells > kMaxCells) throw CapacityError("discrete model exceeds 64 cells");
  cap = std::min(cap, cells);
  double total = 0.0;
  double binom = 1.0;  // C(cells, 0)
  for (std::size_t k = 0;; ++k) {
    total += binom;
    if (total > static_cast<double>(kMaxStates))
      throw CapacityError("discrete state space exceeds the 2e5 dense limit");
    if (k == cap) break;
    binom *= static_cast<double>(cells - k) / static_cast<double>(k + 1);
  }
  return static_cast<std::size_t>(total + 0.5);
}

RateMatrix build_rate_matrix(const DiscreteModel& model) {
  const std::size_t m = model.cell_count();
  state_count(m, model.cap);  // capacity guard (throws)

  // Pairwise center energies, once.
  std::vector<double> phi(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      phi[i * m + j] = phi[j * m + i] = model.pair_energy(i, j);

  const auto finite_energy = [&](std::uint64_t mask) {
    for (std::size_t i = 0; i < m; ++i) {
      if (!(mask >> i & 1)) continue;
      for (std::size_t j = i + 1; j < m; ++j)
        if ((mask >> j & 1) && std::isinf(phi[i * m + j])) return false;
    }
    return true;
  };

  RateMatrix rm;
  // Enumerate masks with k set bits via Gosper's hack, k ascending, skipping
  // zero-weight (infinite energy) states.
  for (std::size_t k = 0; k <= model.cap; ++k) {
    if (k > m) break;
    if (k == 0) {
      rm.states.push_back(0);
      continue;
    }
    std::uint64_t mask = (k == 64) ? ~0ULL : ((1ULL << k) - 1);
    const std::uint64_t limit = (m == 64) ? ~0ULL : ((1ULL << m) - 1);
    while (true) {
      if (finite_energy(mask)) rm.states.push_back(mask);
      if (mask == (k == 64 ? ~0ULL : ((1ULL << k) - 1) << (m - k))) break;
      const std::uint64_t c = mask & -mask;
      const std::uint64_t r = mask + c;
      mask = (((r ^ mask) >> 2) / c) | r;
      if (mask > limit) break;
    }
  }
  rm.index.reserve(rm.states.size() * 2);
  for (std::size_t s = 0; s < rm.states.size(); ++s) rm.index.emplace(rm.states[s], s);

  const auto n = static_cast<Eigen::Index>(rm.states.size());
  rm.q = Eigen::MatrixXd::Zero(n, n);
  const double za = model.params.activity * model.cell_volume;

  for (std::size_t s = 0; s < rm.states.size(); ++s) {
    const std::uint64_t mask = rm.states[s];
    const auto row = static_cast<Eigen::Index>(s);
    double out = 0.0;

    // Deaths: each occupied cell empties at unit rate.
    for (std::size_t j = 0; j < m; ++j) {
      if (!(mask >> j & 1)) continue;
      const auto it = rm.index.find(mask & ~(1ULL << j));
      rm.q(row, static_cast<Eigen::Index>(it->second)) += 1.0;
      out += 1.0;
    }

    // Births: empty cell i fills at rate z a e^{-E(c_i, state)} while the cap
    // allows another particle.
    if (static_cast<std::size_t>(popcount(mask)) < model.cap) {
      for (std::size_t i = 0; i < m; ++i) {
        if (mask >> i & 1) continue;
        double energy = 0.0;
        for (std::size_t j = 0; j < m && !std::isinf(energy); ++j)
          if (mask >> j & 1) energy += phi[i * m + j];
        const double rate = za * exp_neg(energy);
        if (rate <= 0.0) continue;
        const auto it = rm.index.find(mask | (1ULL << i));
        if (it == rm.index.end()) continue;  // target excluded (zero weight)
        rm.q(row, static_cast<Eigen::Index>(it->second)) += rate;
        out += rate;
      }
    }
    rm.q(row, row) = -out;
  }
  return rm;
}

std::optional<std::size_t> RateMatrix::snap(const DiscreteModel& model,
                                            const Configuration& config) const {
  std::uint64_t mask = 0;
  for (const Point& p : config.points()) {
    const std::size_t cell = model.cell_of(p);
    const std::uint64_t bit = 1ULL << cell;
    if (mask & bit) return std::nullopt;  // two points in one cell
    mask |= bit;
  }
  const auto it = index.find(mask);
  if (it == index.end()) return std::nullopt;  // beyond cap or zero-weight
  return it->second;
}

Eigen::VectorXd stationary_distribution(const RateMatrix& rm) {
  const Eigen::Index n = rm.q.rows();
  if (n == 0) throw DomainError("empty rate matrix");

  // Solve Q^T pi = 0 with the first equation replaced by normalization.
  Eigen::MatrixXd a = rm.q.transpose();
  a.row(0).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(0) = 1.0;
  Eigen::VectorXd pi = a.fullPivLu().solve(b);

  const double residual = (pi.transpose() * rm.q).cwiseAbs().maxCoeff();
  if (!(residual < 1e-10))
    throw EstimationError("stationary solve residual above 1e-10");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (pi(i) < -1e-12) throw EstimationError("stationary solve produced negative mass");
    if (pi(i) < 0.0) pi(i) = 0.0;
  }
  pi /= pi.sum();
  return pi;
}

double spectral_gap_eig(const RateMatrix& rm, const Eigen::VectorXd& pi) {
  const Eigen::Index n = rm.q.rows();
  if (pi.size() != n) throw DomainError("stationary vector size mismatch");
  if (n < 2) throw DomainError("spectral gap needs at least two states");

  double defect = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      defect = std::max(defect, std::abs(pi(i) * rm.q(i, j) - pi(j) * rm.q(j, i)));
  if (!(defect < 1e-10)) throw ModelError("detailed-balance defect above 1e-10");

  for (Eigen::Index i = 0; i < n; ++i)
    if (!(pi(i) > 0.0)) throw ModelError("stationary weighting must be strictly positive");

  // A = D^{1/2} Q D^{-1/2} is symmetric under detailed balance; -A is
  // positive semidefinite with a simple zero eigenvalue (irreducible chain).
  Eigen::VectorXd sqrt_pi = pi.cwiseSqrt();
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = sqrt_pi(i) * rm.q(i, j) / sqrt_pi(j);
  Eigen::MatrixXd sym = -0.5 * (a + a.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) throw EstimationError("eigensolver failed");
  const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending

  const double scale = std::max(1.0, std::abs(ev(n - 1)));
  if (std::abs(ev(0)) > 1e-8 * scale)
    throw ModelError("rate matrix has no numerical zero mode");
  return ev(1);
}

double delta_discrete(const DiscreteModel& model) {
  const std::size_t m = model.cell_count();
  double worst = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double phi = model.pair_energy(i, r);
      sum += model.cell_volume * -std::expm1(-phi);
    }
    worst = std::max(worst, sum);
  }
  return model.params.activity * worst;
}

}  // namespace glauber::oracle
