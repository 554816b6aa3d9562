#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "cdi/kernels.hpp"

namespace cdi::kernels {

namespace detail {

double dist_sq(const Point& a, const Point& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

std::vector<Vertex> nearest_of(std::span<const Point> points, Vertex v, int k,
                               std::vector<std::pair<double, Vertex>>& scratch) {
  scratch.clear();
  for (Vertex u = 0; u < static_cast<Vertex>(points.size()); ++u)
    if (u != v) scratch.emplace_back(dist_sq(points[v], points[u]), u);
  const auto kk = static_cast<std::ptrdiff_t>(k);
  std::partial_sort(scratch.begin(), scratch.begin() + kk, scratch.end());
  std::vector<Vertex> out;
  out.reserve(k);
  for (std::ptrdiff_t t = 0; t < kk; ++t) out.push_back(scratch[t].second);
  return out;
}

}  // namespace detail

NeighbourLists knn_serial(std::span<const Point> points, std::span<const int> k) {
  NeighbourLists out(points.size());
  std::vector<std::pair<double, Vertex>> scratch;
  for (Vertex v = 0; v < static_cast<Vertex>(points.size()); ++v)
    out[v] = detail::nearest_of(points, v, k[v], scratch);
  return out;
}

void spmv_serial(const SparseMatrix& m, const Eigen::VectorXd& x, Eigen::VectorXd& y) {
  y.resize(m.rows());
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    double acc = 0.0;
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) acc += it.value() * x[it.col()];
    y[r] = acc;
  }
}

std::size_t SpatialHash::KeyHash::operator()(const Key& k) const noexcept {
  auto h = static_cast<std::size_t>(k.x) * 73856093u;
  h ^= static_cast<std::size_t>(k.y) * 19349663u;
  h ^= static_cast<std::size_t>(k.z) * 83492791u;
  return h;
}

SpatialHash::Key SpatialHash::key_of(const Point& p) const {
  return {static_cast<long long>(std::floor(p[0] / cell_)),
          static_cast<long long>(std::floor(p[1] / cell_)),
          static_cast<long long>(std::floor(p[2] / cell_))};
}

SpatialHash::SpatialHash(std::span<const Point> points, double cell)
    : cell_(cell), points_(points.begin(), points.end()) {
  for (std::size_t i = 0; i < points_.size(); ++i) buckets_[key_of(points_[i])].push_back(i);
}

double SpatialHash::nearest_sq_local(const Point& q) const {
  const Key c = key_of(q);
  double best = std::numeric_limits<double>::infinity();
  for (long long dx = -1; dx <= 1; ++dx)
    for (long long dy = -1; dy <= 1; ++dy)
      for (long long dz = -1; dz <= 1; ++dz) {
        const auto it = buckets_.find({c.x + dx, c.y + dy, c.z + dz});
        if (it == buckets_.end()) continue;
        for (std::size_t i : it->second) best = std::min(best, detail::dist_sq(q, points_[i]));
      }
  return best;
}

bool SpatialHash::any_within(const Point& q, double radius) const {
  // tolerance absorbs the rounding of sqrt(3)^2 on exact grid offsets
  return nearest_sq_local(q) <= radius * radius * (1.0 + 1e-12);
}

std::size_t count_within_serial(std::span<const Point> a, const SpatialHash& b, double radius) {
  std::size_t hits = 0;
  for (const Point& p : a) hits += b.any_within(p, radius) ? 1 : 0;
  return hits;
}

}  // namespace cdi::kernels
