#include "cdi/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <ostream>
#include <string>

#include <Eigen/Dense>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>
#include <boost/numeric/odeint.hpp>

#include "cdi/error.hpp"
#include "cdi/graph_io.hpp"
#include "cdi/kernels.hpp"
#include "cdi/spectra.hpp"

namespace cdi {

PerturbationVector::PerturbationVector(std::vector<double> c) : c_(std::move(c)) {
  double total = 0.0;
  for (double v : c_) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ValidationError("perturbation entries must be finite and nonnegative");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ValidationError("perturbation budget must sum to 1, got " + format_real(total));
}

PerturbationVector PerturbationVector::normalised(std::vector<double> raw) {
  double total = 0.0;
  for (double v : raw) {
    if (!(v >= 0.0)) throw ValidationError("perturbation entries must be nonnegative");
    total += v;
  }
  if (!(total > 0.0)) throw ValidationError("perturbation vector is all zero");
  for (double& v : raw) v /= total;
  return PerturbationVector(std::move(raw));
}

bool reachable_from_support(const Graph& g, std::span<const double> c) {
  std::vector<Vertex> support;
  for (Vertex v = 0; v < g.size(); ++v)
    if (c[v] > 0.0) support.push_back(v);
  const auto seen = reach_against_edges(g, support);
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

namespace {

constexpr int kDenseLuLimit = 300;
constexpr int kMaxShifts = 60;
constexpr int kStepsPerShift = 4;

/// Shifted inverse iteration on an irreducible M-matrix M. For any shift
/// sigma below lambda_min, (M - sigma I)^-1 is positive, so the
/// Collatz-Wielandt ratios of an iterate bracket 1 / (lambda_min - sigma).
/// The lower bracket end is a safe next shift, which shrinks the
/// convergence ratio (lambda_min - sigma) / (lambda_2 - sigma) each round.
template <class Factor, class Solve>
bool shifted_perron(Factor&& factor, Solve&& solve, Eigen::VectorXd& x, double& rate) {
  double sigma = 0.0, safe = 0.0;
  bool frozen = false;
  Eigen::VectorXd w;
  for (int round = 0; round < kMaxShifts; ++round) {
    if (!factor(sigma)) return false;
    double lam_lo = sigma, lam_hi = 0.0;
    for (int it = 0; it < kStepsPerShift; ++it) {
      w = solve(x);
      const Eigen::ArrayXd ratio = w.array() / x.array();
      const double lo = ratio.minCoeff(), hi = ratio.maxCoeff();
      if (!(lo > 0.0) || !std::isfinite(hi)) {
        // rounding put the shift past lambda_min; retreat and stop shifting
        if (frozen || sigma == safe) return false;
        sigma = safe;
        frozen = true;
        break;
      }
      safe = sigma;
      x = w / w.sum();
      lam_lo = std::max(lam_lo, sigma + 1.0 / hi);
      lam_hi = sigma + 1.0 / lo;
      if (lam_hi - lam_lo <= 1e-13 * lam_hi) {
        rate = 0.5 * (lam_lo + lam_hi);
        return true;
      }
    }
    if (frozen) continue;
    // keep a margin well above rounding so M - sigma I stays safely nonsingular
    sigma = std::max(sigma, lam_lo - std::max(0.1 * (lam_hi - lam_lo), 1e-8 * lam_lo));
  }
  return false;
}

}  // namespace

/// One strongly connected block of L. The spectrum of L + C is the union of
/// the spectra of these diagonal blocks, and each block is irreducible.
struct RateEvaluator::Block {
  std::vector<int> vertices;
  /// block of L with every diagonal entry stored
  Eigen::SparseMatrix<double> m;
  Eigen::VectorXd base_diagonal;
  /// block row sums of L (lambda_min >= min_i row_i + c_i)
  Eigen::VectorXd row_sums;
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu;
  std::vector<double*> diagonal;
  Eigen::VectorXd warm;

  bool evaluate(std::span<const double> c, double& rate) {
    const int k = static_cast<int>(vertices.size());
    if (warm.size() != k || !(warm.minCoeff() > 0.0)) warm = Eigen::VectorXd::Constant(k, 1.0 / k);
    Eigen::VectorXd x = warm;
    bool ok = false;
    if (k <= kDenseLuLimit) {
      Eigen::MatrixXd base(m);
      for (int i = 0; i < k; ++i) base(i, i) = base_diagonal[i] + c[vertices[i]];
      Eigen::PartialPivLU<Eigen::MatrixXd> dense;
      auto factor = [&](double sigma) {
        dense.compute(base - sigma * Eigen::MatrixXd::Identity(k, k));
        return true;
      };
      auto solve = [&](const Eigen::VectorXd& b) { return Eigen::VectorXd(dense.solve(b)); };
      ok = shifted_perron(factor, solve, x, rate);
    } else {
      if (!lu) {
        m.makeCompressed();
        lu = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
        lu->analyzePattern(m);
        for (int i = 0; i < k; ++i) diagonal.push_back(&m.coeffRef(i, i));
      }
      auto factor = [&](double sigma) {
        for (int i = 0; i < k; ++i) *diagonal[i] = base_diagonal[i] + c[vertices[i]] - sigma;
        lu->factorize(m);
        return lu->info() == Eigen::Success;
      };
      auto solve = [&](const Eigen::VectorXd& b) { return Eigen::VectorXd(lu->solve(b)); };
      ok = shifted_perron(factor, solve, x, rate);
    }
    warm = ok ? x : Eigen::VectorXd();
    return ok;
  }
};

RateEvaluator::~RateEvaluator() = default;
RateEvaluator::RateEvaluator(RateEvaluator&&) noexcept = default;
RateEvaluator& RateEvaluator::operator=(RateEvaluator&&) noexcept = default;

RateEvaluator::RateEvaluator(const SparseMatrix& laplacian)
    : n_(static_cast<int>(laplacian.rows())), listeners_(n_) {
  if (laplacian.rows() != laplacian.cols()) throw ValidationError("Laplacian must be square");
  l_ = laplacian;
  std::vector<Edge> edges;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n_);
  for (int i = 0; i < n_; ++i)
    for (SparseMatrix::InnerIterator it(laplacian, i); it; ++it) {
      const int j = static_cast<int>(it.col());
      if (j == i) {
        diag[i] += it.value();
      } else if (it.value() != 0.0) {
        if (!(it.value() < 0.0)) throw ValidationError("Laplacian off-diagonal entries must be <= 0");
        edges.push_back({i, j, -it.value()});
        listeners_[j].push_back(i);
      }
    }
  const Graph pattern(n_, std::move(edges));
  int count = 0;
  const auto comp = strong_components(pattern, &count);
  std::vector<int> local(n_);
  blocks_.resize(count);
  for (int v = 0; v < n_; ++v) {
    auto& blk = blocks_[comp[v]];
    local[v] = static_cast<int>(blk.vertices.size());
    blk.vertices.push_back(v);
  }
  for (auto& blk : blocks_) {
    const int k = static_cast<int>(blk.vertices.size());
    std::vector<Eigen::Triplet<double>> triplets;
    blk.base_diagonal.resize(k);
    blk.row_sums.resize(k);
    for (int a = 0; a < k; ++a) {
      const int v = blk.vertices[a];
      triplets.emplace_back(a, a, diag[v]);
      blk.base_diagonal[a] = diag[v];
      double row = diag[v];
      for (SparseMatrix::InnerIterator it(laplacian, v); it; ++it) {
        const int j = static_cast<int>(it.col());
        if (j == v || comp[j] != comp[v] || it.value() == 0.0) continue;
        triplets.emplace_back(a, local[j], it.value());
        row += it.value();
      }
      blk.row_sums[a] = row;
    }
    blk.m.resize(k, k);
    blk.m.setFromTriplets(triplets.begin(), triplets.end());
  }
  // cheap blocks first so larger ones can often be skipped
  std::stable_sort(blocks_.begin(), blocks_.end(), [](const Block& a, const Block& b) {
    return a.vertices.size() < b.vertices.size();
  });
}

bool RateEvaluator::reachable(std::span<const double> c) const {
  std::vector<char> seen(n_, 0);
  std::vector<int> frontier;
  for (int v = 0; v < n_; ++v)
    if (c[v] > 0.0) {
      seen[v] = 1;
      frontier.push_back(v);
    }
  std::size_t count = frontier.size();
  while (!frontier.empty()) {
    const int v = frontier.back();
    frontier.pop_back();
    for (int u : listeners_[v])
      if (!seen[u]) {
        seen[u] = 1;
        ++count;
        frontier.push_back(u);
      }
  }
  return count == static_cast<std::size_t>(n_);
}

double RateEvaluator::operator()(std::span<const double> c) {
  if (c.size() != static_cast<std::size_t>(n_))
    throw ValidationError("perturbation length does not match the Laplacian");
  for (double v : c)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ValidationError("perturbation entries must be finite and nonnegative");
  ++evaluations_;
  if (!reachable(c)) return 0.0;

  double best = std::numeric_limits<double>::infinity();
  for (auto& blk : blocks_) {
    if (blk.vertices.size() == 1) {
      best = std::min(best, blk.base_diagonal[0] + c[blk.vertices[0]]);
      continue;
    }
    double bound = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < blk.vertices.size(); ++a)
      bound = std::min(bound, blk.row_sums[a] + c[blk.vertices[a]]);
    if (bound >= best) continue;
    double rate = 0.0;
    if (!blk.evaluate(c, rate)) {
      ++fallbacks_;
      return convergence_rate_dense(l_, c);
    }
    best = std::min(best, rate);
  }
  return best;
}

double convergence_rate_dense(const SparseMatrix& laplacian, std::span<const double> c) {
  const int n = static_cast<int>(laplacian.rows());
  Eigen::MatrixXd m(laplacian);
  for (int i = 0; i < n; ++i) m(i, i) += c[i];
  // the leftmost eigenvalue of the M-matrix is real; unreachable vertices make it 0
  return std::max(0.0, min_real_eigenvalue_dense(m));
}

double convergence_rate(const SparseMatrix& laplacian, const PerturbationVector& c) {
  RateEvaluator eval(laplacian);
  return eval(c.values());
}

ConsensusTrajectory simulate(const Graph& g, const PerturbationVector& c, double u,
                             std::span<const double> x0, double dt, double t_end,
                             const SimulationOptions& options) {
  namespace odeint = boost::numeric::odeint;
  const int n = g.size();
  if (!(dt > 0.0)) throw ValidationError("time step must be positive");
  if (!(t_end >= dt)) throw ValidationError("end time must be at least one step");
  if (c.size() != static_cast<std::size_t>(n) || x0.size() != static_cast<std::size_t>(n))
    throw ValidationError("state and perturbation sizes must match the graph");

  const SparseMatrix lap = laplacian(g).matrix;
  const std::vector<double> gain(c.values().begin(), c.values().end());
  using State = std::vector<double>;
  Eigen::VectorXd xv(n), lx(n);
  auto rhs = [&](const State& x, State& dxdt, double) {
    for (int i = 0; i < n; ++i) xv[i] = x[i];
    kernels::spmv_omp(lap, xv, lx);
    for (int i = 0; i < n; ++i) dxdt[i] = -lx[i] + gain[i] * (u - x[i]);
  };

  ConsensusTrajectory traj;
  traj.target = u;
  auto observe = [&](const State& x, double t) {
    double norm = 0.0;
    for (double v : x) {
      if (!std::isfinite(v)) norm = INFINITY;
      norm = std::max(norm, std::abs(v));
    }
    if (norm > 1e12) throw Error("integration unstable at t=" + format_real(t) + "; reduce dt");
    traj.times.push_back(t);
    traj.states.push_back(x);
  };

  State x(x0.begin(), x0.end());
  const auto steps = static_cast<long long>(std::floor(t_end / dt + 1e-9));
  auto stepper = odeint::make_dense_output(options.abs_tol, options.rel_tol, dt,
                                           odeint::runge_kutta_dopri5<State>());
  std::vector<double> times(steps + 1);
  for (long long s = 0; s <= steps; ++s) times[s] = static_cast<double>(s) * dt;
  odeint::integrate_times(stepper, rhs, x, times.begin(), times.end(), dt, observe);
  return traj;
}

void write_trajectory_csv(const ConsensusTrajectory& traj, std::ostream& out) {
  const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
  out << 't';
  for (std::size_t i = 0; i < n; ++i) out << ",x" << i;
  out << '\n';
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    out << format_real(traj.times[s]);
    for (double v : traj.states[s]) out << ',' << format_real(v);
    out << '\n';
  }
}

}  // namespace cdi
