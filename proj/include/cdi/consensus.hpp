#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "cdi/graph.hpp"

namespace cdi {

/// Nonnegative input allocation with unit total budget.
class PerturbationVector {
 public:
  /// Validates c_i >= 0 and |sum - 1| <= 1e-9.
  explicit PerturbationVector(std::vector<double> c);
  /// Scales a nonnegative, nonzero vector onto the unit budget.
  static PerturbationVector normalised(std::vector<double> raw);

  std::span<const double> values() const noexcept { return c_; }
  double operator[](std::size_t i) const { return c_[i]; }
  std::size_t size() const noexcept { return c_.size(); }
  const std::vector<double>& vector() const noexcept { return c_; }

 private:
  std::vector<double> c_;
};

/// True when every vertex is reached from some vertex with c_i > 0 by
/// following edges backwards (information flows from j to i along a_ij).
bool reachable_from_support(const Graph& g, std::span<const double> c);

/// Evaluates |Re lambda_1(-(L + diag c))| for many allocations on one
/// Laplacian. L + C is an M-matrix, so its leftmost eigenvalue is real. It
/// is the minimum over the strongly connected blocks of L, where shifted
/// inverse iteration from a positive vector brackets it between
/// Collatz-Wielandt bounds and stops once they agree to 1e-13. Falls back
/// to a dense eigenvalue computation if the bounds stall.
/// Not thread-safe (keeps a warm-start vector).
class RateEvaluator {
 public:
  explicit RateEvaluator(const SparseMatrix& laplacian);
  ~RateEvaluator();
  RateEvaluator(RateEvaluator&&) noexcept;
  RateEvaluator& operator=(RateEvaluator&&) noexcept;

  /// Allocation c is used as given (no renormalisation); entries must be >= 0.
  double operator()(std::span<const double> c);

  std::size_t evaluations() const noexcept { return evaluations_; }
  std::size_t fallbacks() const noexcept { return fallbacks_; }
  int size() const noexcept { return n_; }

 private:
  bool reachable(std::span<const double> c) const;

  int n_;
  SparseMatrix l_;
  std::vector<std::vector<int>> listeners_;
  struct Block;
  std::vector<Block> blocks_;
  std::size_t evaluations_ = 0;
  std::size_t fallbacks_ = 0;
};

/// Dense reference: min real part of eig(L + C), or 0 when unreachable.
double convergence_rate_dense(const SparseMatrix& laplacian, std::span<const double> c);

double convergence_rate(const SparseMatrix& laplacian, const PerturbationVector& c);

struct ConsensusTrajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  double target = 0.0;
};

struct SimulationOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
};

/// Integrates dx_i/dt = sum_j a_ij (x_j - x_i) + c_i (u - x_i) with adaptive
/// Dormand-Prince steps, sampling every dt up to t_end.
ConsensusTrajectory simulate(const Graph& g, const PerturbationVector& c, double u,
                             std::span<const double> x0, double dt, double t_end,
                             const SimulationOptions& options = {});

/// CSV with header "t,x0,...,x{n-1}".
void write_trajectory_csv(const ConsensusTrajectory& traj, std::ostream& out);

}  // namespace cdi
