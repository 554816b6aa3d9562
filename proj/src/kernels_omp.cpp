#include <algorithm>
#include <utility>

#include "cdi/kernels.hpp"

namespace cdi::kernels {

namespace detail {
std::vector<Vertex> nearest_of(std::span<const Point> points, Vertex v, int k,
                               std::vector<std::pair<double, Vertex>>& scratch);
}

NeighbourLists knn_omp(std::span<const Point> points, std::span<const int> k) {
  const auto n = static_cast<long long>(points.size());
  NeighbourLists out(points.size());
#pragma omp parallel
  {
    std::vector<std::pair<double, Vertex>> scratch;
#pragma omp for schedule(static)
    for (long long v = 0; v < n; ++v)
      out[v] = detail::nearest_of(points, static_cast<Vertex>(v), k[v], scratch);
  }
  return out;
}

void spmv_omp(const SparseMatrix& m, const Eigen::VectorXd& x, Eigen::VectorXd& y) {
  y.resize(m.rows());
  const Eigen::Index rows = m.outerSize();
#pragma omp parallel for schedule(static)
  for (Eigen::Index r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) acc += it.value() * x[it.col()];
    y[r] = acc;
  }
}

std::size_t count_within_omp(std::span<const Point> a, const SpatialHash& b, double radius) {
  const auto n = static_cast<long long>(a.size());
  long long hits = 0;
#pragma omp parallel for reduction(+ : hits) schedule(static)
  for (long long i = 0; i < n; ++i) hits += b.any_within(a[i], radius) ? 1 : 0;
  return static_cast<std::size_t>(hits);
}

}  // namespace cdi::kernels
