#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cdi/graph.hpp"
#include "cdi/optimizer.hpp"
#include "cdi/spectra.hpp"

namespace cdi {

struct PartitionResult {
  std::vector<std::vector<Vertex>> communities;
  std::string method;
  /// the partition could not satisfy its construction rule; communities
  /// holds the best attempt
  bool flagged = false;
  std::string note;

  /// community index per vertex
  std::vector<int> labels(int n) const;
};

struct KMeansOptions {
  int restarts = 20;
  int max_iterations = 300;
  std::uint64_t seed = 1;
};

/// Ng-Jordan-Weiss clustering: top-k eigenvectors of D^-1/2 W D^-1/2 with
/// W = (A + A^T) / 2, rows scaled to unit length, then k-means++ seeded
/// Lloyd iterations keeping the lowest-inertia restart. Communities are
/// ordered by their smallest vertex.
PartitionResult spectral_kmeans(const Graph& g, int k, const KMeansOptions& options = {});

struct BisectionOptions {
  int target = 8;
  /// at the last level both halves need an entry with |value| above this
  double threshold = 0.01;
  MatrixKind kind = MatrixKind::adjacency;
};

/// Repeated sign splits on the second eigenvector of the symmetrised
/// matrix of each part (second largest for adjacency, second smallest for
/// the Laplacian). Disconnected parts split along components. At the last
/// level later eigenvectors are tried until both halves clear the
/// threshold. target must be a power of two.
PartitionResult spectral_bisection(const Graph& g, const BisectionOptions& options = {});

/// sqrt(sum_ij (A1_ij - A2_ij)^2).
double frobenius_distance(const Graph& a, const Graph& b);

/// Number of ordered pairs (i, j) that are an edge in exactly one graph.
long long edge_edit_distance(const Graph& a, const Graph& b);

/// candidate.lambda1 / reference.lambda1; throws on a zero reference.
double consensus_speed_ratio(const OptimizationResult& candidate,
                             const OptimizationResult& reference);
double consensus_speed_ratio(double candidate, double reference);

/// Optimisation seeded by k-means communities instead of CDI.
OptimizationResult kmeans_seeded_opt(const Graph& g, RateEvaluator& rate, int k,
                                     const Eigen::VectorXd& v1,
                                     const KMeansOptions& kmeans = {},
                                     const OptimizerOptions& options = {});

}  // namespace cdi
