#include "cdi/generators.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "cdi/error.hpp"
#include "cdi/kernels.hpp"
#include "cdi/rng.hpp"

namespace cdi {

namespace {

std::vector<Point> uniform_points(int n, int dims, const Box& box, Rng& rng) {
  if (dims != 2 && dims != 3) throw ValidationError("dims must be 2 or 3");
  for (int d = 0; d < dims; ++d)
    if (!(box[d] > 0.0)) throw ValidationError("box sides must be positive");
  std::vector<Point> pts(n, Point{0.0, 0.0, 0.0});
  for (auto& p : pts)
    for (int d = 0; d < dims; ++d) p[d] = rng.uniform() * box[d];
  return pts;
}

void check_degree_range(int n, int k_min, int k_max) {
  if (k_min < 1 || k_min > k_max)
    throw ValidationError("outdegree range must satisfy 1 <= k_min <= k_max");
  if (k_max >= n)
    throw ValidationError("outdegree " + std::to_string(k_max) + " needs more than " +
                          std::to_string(n) + " vertices");
}

}  // namespace

Graph knn_graph(std::span<const Point> points, std::span<const int> k, int dims, double weight) {
  const auto lists = kernels::knn_omp(points, k);
  std::vector<Edge> edges;
  for (Vertex v = 0; v < static_cast<Vertex>(lists.size()); ++v)
    for (Vertex u : lists[v]) edges.push_back({v, u, weight});
  return Graph(static_cast<int>(points.size()), std::move(edges))
      .with_positions({points.begin(), points.end()}, dims);
}

Graph knn_graph_undirected(std::span<const Point> points, int k, int dims, double weight) {
  const std::vector<int> ks(points.size(), k);
  const auto lists = kernels::knn_omp(points, ks);
  std::vector<Edge> edges;
  for (Vertex v = 0; v < static_cast<Vertex>(lists.size()); ++v)
    for (Vertex u : lists[v]) {
      edges.push_back({v, u, weight});
      edges.push_back({u, v, weight});
    }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const Edge& a, const Edge& b) { return a.src == b.src && a.dst == b.dst; }),
              edges.end());
  return Graph(static_cast<int>(points.size()), std::move(edges), true)
      .with_positions({points.begin(), points.end()}, dims);
}

Graph generate_knnr(int n, int k, int dims, const Box& box, std::uint64_t seed, double weight) {
  check_degree_range(n, k, k);
  Rng rng(seed);
  const auto pts = uniform_points(n, dims, box, rng);
  const std::vector<int> ks(n, k);
  return knn_graph(pts, ks, dims, weight);
}

Graph generate_knnr_variable(int n, int k_min, int k_max, int dims, const Box& box,
                             std::uint64_t seed, double weight) {
  check_degree_range(n, k_min, k_max);
  Rng rng(seed);
  const auto pts = uniform_points(n, dims, box, rng);
  std::vector<int> ks(n);
  for (int& k : ks) k = rng.between(k_min, k_max);
  return knn_graph(pts, ks, dims, weight);
}

Graph generate_er_outdegree(int n, int k_min, int k_max, std::uint64_t seed, double weight) {
  check_degree_range(n, k_min, k_max);
  Rng rng(seed);
  std::vector<Edge> edges;
  std::vector<Vertex> others(n - 1);
  for (Vertex v = 0; v < n; ++v) {
    const int k = rng.between(k_min, k_max);
    std::iota(others.begin(), others.begin() + v, 0);
    std::iota(others.begin() + v, others.end(), v + 1);
    // partial Fisher-Yates: the first k slots become a uniform k-subset
    for (int t = 0; t < k; ++t) {
      const auto pick = t + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1 - t)));
      std::swap(others[t], others[pick]);
      edges.push_back({v, others[t], weight});
    }
  }
  return Graph(n, std::move(edges));
}

Graph generate_flock(int n, int k, double thickness, std::uint64_t seed, double weight) {
  if (!(thickness > 0.0) || thickness > 1.0)
    throw ValidationError("flock thickness must lie in (0, 1]");
  return generate_knnr(n, k, 3, Box{1.0, 1.0, thickness}, seed, weight);
}

}  // namespace cdi
