#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace cdi {

using Objective = std::function<double(std::span<const double>)>;

struct MaximizeOptions {
  /// initial simplex edge per coordinate; empty uses 5% of |x0_i|
  /// (0.00025 for zero entries)
  std::vector<double> step;
  /// optional box; trial points are projected onto it
  std::vector<double> lower;
  std::vector<double> upper;
  std::size_t max_evaluations = 5000;
  /// stop when every vertex lies within x_tol of the best (inf-norm) ...
  double x_tol = 1e-8;
  /// ... or the value spread is below f_tol * max(|f_best|, tiny)
  double f_tol = 1e-12;
  /// fresh simplexes built around the incumbent after convergence
  int restarts = 2;
};

struct MaximizeResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
  /// false when the evaluation budget ran out first
  bool converged = false;
};

/// Nelder-Mead maximisation. Ties never displace the incumbent best vertex,
/// so a flat objective returns x0 unchanged. Throws OptimizerError on a
/// non-finite objective value.
MaximizeResult numeric_maximize(const Objective& f, std::vector<double> x0,
                                const MaximizeOptions& options = {});

}  // namespace cdi
