#pragma once

// Data-parallel inner loops. Each kernel has a plain serial reference
// (`*_serial`) and an OpenMP version (`*_omp`) that must produce identical
// output; the unit tests compare them and bench/ times them.

#include <cstddef>
#include <span>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "cdi/graph.hpp"

namespace cdi::kernels {

/// Neighbour lists: entry v holds the k[v] points nearest to v (excluding v),
/// ordered by (squared distance, index) so ties go to the lower index.
using NeighbourLists = std::vector<std::vector<Vertex>>;

NeighbourLists knn_serial(std::span<const Point> points, std::span<const int> k);
NeighbourLists knn_omp(std::span<const Point> points, std::span<const int> k);

/// y = M x.
void spmv_serial(const SparseMatrix& m, const Eigen::VectorXd& x, Eigen::VectorXd& y);
void spmv_omp(const SparseMatrix& m, const Eigen::VectorXd& x, Eigen::VectorXd& y);

/// Uniform-grid bucket index over a point set for fixed-radius queries.
class SpatialHash {
 public:
  SpatialHash(std::span<const Point> points, double cell);

  /// True when some indexed point lies within `radius` of q (radius <= cell).
  bool any_within(const Point& q, double radius) const;
  /// Squared distance to the nearest indexed point among the 27 cells
  /// around q, or +inf if those cells are empty.
  double nearest_sq_local(const Point& q) const;

  double cell() const noexcept { return cell_; }

 private:
  struct Key {
    long long x, y, z;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };
  Key key_of(const Point& p) const;

  double cell_;
  std::vector<Point> points_;
  std::unordered_map<Key, std::vector<std::size_t>, KeyHash> buckets_;
};

/// Number of points of `a` with some point of `b` within `radius`.
std::size_t count_within_serial(std::span<const Point> a, const SpatialHash& b, double radius);
std::size_t count_within_omp(std::span<const Point> a, const SpatialHash& b, double radius);

}  // namespace cdi::kernels
