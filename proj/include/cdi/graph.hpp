#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace cdi {

using Vertex = int;
using Point = std::array<double, 3>;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct Edge {
  Vertex src;
  Vertex dst;
  double weight;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Directed weighted graph in compressed row form. Edge (i, j, w) is stored
/// in row i and corresponds to a_ij = w: vertex i listens to vertex j.
/// Immutable once built; every constructor validates the invariants
/// (positive weights, no self-loops, no duplicate ordered pairs, symmetry
/// when flagged undirected, uniform position dimensionality).
class Graph {
 public:
  Graph() = default;
  Graph(int vertex_count, std::vector<Edge> edges, bool undirected = false);

  int size() const noexcept { return vertex_count_; }
  std::size_t edge_count() const noexcept { return targets_.size(); }
  bool undirected() const noexcept { return undirected_; }

  std::span<const Vertex> out_neighbours(Vertex v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::span<const double> out_weights(Vertex v) const {
    return {weights_.data() + offsets_[v], weights_.data() + offsets_[v + 1]};
  }
  std::span<const Vertex> in_neighbours(Vertex v) const {
    return {sources_.data() + in_offsets_[v], sources_.data() + in_offsets_[v + 1]};
  }
  std::span<const double> in_weights(Vertex v) const {
    return {in_weights_.data() + in_offsets_[v], in_weights_.data() + in_offsets_[v + 1]};
  }

  /// Weighted outdegree (row sum of A).
  double out_degree(Vertex v) const;
  /// a_ij, or 0 when the edge is absent.
  double weight(Vertex i, Vertex j) const;
  bool has_edge(Vertex i, Vertex j) const { return weight(i, j) > 0.0; }

  /// Edges in row-major (src, dst) order.
  std::vector<Edge> edges() const;

  bool has_positions() const noexcept { return dims_ > 0; }
  int dims() const noexcept { return dims_; }
  const std::vector<Point>& positions() const noexcept { return positions_; }
  /// Copy of this graph carrying the given positions (dims is 2 or 3).
  Graph with_positions(std::vector<Point> positions, int dims) const;

  SparseMatrix adjacency() const;

  /// Relabel vertex v as perm[v]; positions follow their vertices.
  Graph permuted(std::span<const Vertex> perm) const;
  /// Subgraph on `vertices`; vertex vertices[t] becomes t.
  Graph induced(std::span<const Vertex> vertices) const;

 private:
  int vertex_count_ = 0;
  bool undirected_ = false;
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> targets_;
  std::vector<double> weights_;
  std::vector<std::size_t> in_offsets_{0};
  std::vector<Vertex> sources_;
  std::vector<double> in_weights_;
  int dims_ = 0;
  std::vector<Point> positions_;
};

/// L = D - A with D the diagonal outdegree matrix.
struct Laplacian {
  SparseMatrix matrix;
  Eigen::VectorXd row_sums;
};

Laplacian laplacian(const Graph& g);

/// Infinity norm (max absolute row sum).
double inf_norm(const SparseMatrix& m);

/// Strongly connected component id per vertex (Tarjan), ids in [0, count).
std::vector<int> strong_components(const Graph& g, int* count = nullptr);
bool strongly_connected(const Graph& g);

/// Number of strongly connected components with no edge leaving them. The
/// Laplacian's zero eigenvalue has this multiplicity, so v1 is unique only
/// when it is 1.
int closed_classes(const Graph& g);

/// Weakly connected component id per vertex, numbered by lowest member.
std::vector<int> weak_components(const Graph& g, int* count = nullptr);

/// Vertices reachable from `sources` walking edges backwards (dst -> src),
/// the direction in which influence propagates under a_ij = "i listens to j".
std::vector<bool> reach_against_edges(const Graph& g, std::span<const Vertex> sources);

}  // namespace cdi
