#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "cdi/communities.hpp"
#include "cdi/consensus.hpp"
#include "cdi/nelder_mead.hpp"

namespace cdi {

struct OptimizerOptions {
  /// cap on objective calls for each numerical sub-optimisation
  std::size_t evaluations_per_phase = 5000;
  /// a step is kept when lambda * acceptance >= the current best
  double acceptance = 1.001;
  double log_eta_min = -8.0;
  double log_eta_max = 6.0;
  double log_r_min = -12.0;
  double log_r_max = 12.0;
  /// throw OptimizerError if budget/sign/monotonicity invariants break
  bool check_invariants = true;
};

/// omega^eta scaled to unit sum. Throws ValidationError if omega is all zero
/// or has a negative entry.
std::vector<double> power_transform(std::span<const double> omega, double eta);

/// sum_i p_i / r_i over sum_i 1 / r_i. r_i = +inf drops p_i. Throws if the
/// list is empty, sizes differ, or every r_i is infinite.
std::vector<double> combine(const std::vector<std::vector<double>>& p, std::span<const double> r);

struct LeaderAllocation {
  /// communities whose leader kept a positive share, in the input order
  std::vector<Community> communities;
  /// vertex of largest v1 inside each surviving community
  std::vector<Vertex> leaders;
  /// unit-sum allocation over all vertices, nonzero only on `leaders`
  std::vector<double> c;
  double lambda1 = 0.0;
  std::size_t evaluations = 0;
  int rounds = 0;
  bool budget_exhausted = false;
};

/// Concentrates the input on the most influential vertex of each community.
/// `ranked` must be ordered by decreasing influence; the start allocation is
/// proportional to 1/rank. Leaders driven to zero are dropped and the
/// remaining shares re-optimised.
LeaderAllocation leader_opt(RateEvaluator& rate, const std::vector<Community>& ranked,
                            const Eigen::VectorXd& v1, const OptimizerOptions& options = {});

struct OptimizationResult {
  std::vector<double> c;
  double lambda1 = 0.0;
  /// ranks of the communities that carry input
  std::vector<int> active_ranks;
  std::vector<double> eta;
  std::vector<double> r;
  /// best value after every accepted step
  std::vector<double> trace;
  std::size_t evaluations = 0;
  bool budget_exhausted = false;
};

/// Spreads the input over community members with weights v1^eta, adding
/// communities greedily in rank order and then pruning them.
OptimizationResult cdi_perturbation_opt(RateEvaluator& rate, const LeaderAllocation& leaders,
                                 const Eigen::VectorXd& v1, const OptimizerOptions& options = {});

/// leader_opt followed by cdi_perturbation_opt.
OptimizationResult optimise_communities(RateEvaluator& rate, const std::vector<Community>& ranked,
                                        const Eigen::VectorXd& v1,
                                        const OptimizerOptions& options = {});

struct DirectOptions {
  int starts = 3;
  std::size_t evaluations_per_start = 20000;
  /// initial simplex edge relative to the uniform entry 1/n
  double relative_step = 0.5;
  std::uint64_t seed = 1;
};

/// Nelder-Mead over all n entries of c (clamped at 0, renormalised), from
/// the uniform allocation and from random allocations.
OptimizationResult direct_baseline_opt(RateEvaluator& rate, const DirectOptions& options = {});

/// Communities from a vertex partition, ranked by their largest v1 entry;
/// each leader is the member of largest v1.
std::vector<Community> communities_from_labels(std::span<const int> labels,
                                               const Eigen::VectorXd& v1);

}  // namespace cdi
