#include "cdi/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cdi/error.hpp"

namespace cdi {

namespace {

std::string edge_name(const Edge& e) {
  return "(" + std::to_string(e.src) + ", " + std::to_string(e.dst) + ")";
}

}  // namespace

Graph::Graph(int vertex_count, std::vector<Edge> edges, bool undirected)
    : vertex_count_(vertex_count), undirected_(undirected) {
  if (vertex_count < 0) throw ValidationError("negative vertex count");
  for (const Edge& e : edges) {
    if (e.src < 0 || e.src >= vertex_count || e.dst < 0 || e.dst >= vertex_count)
      throw ValidationError("edge " + edge_name(e) + " references a vertex outside [0, n)");
    if (e.src == e.dst) throw ValidationError("self-loop at vertex " + std::to_string(e.src));
    if (!(e.weight > 0.0) || !std::isfinite(e.weight))
      throw ValidationError("edge " + edge_name(e) + " has non-positive or non-finite weight");
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });
  for (std::size_t t = 1; t < edges.size(); ++t)
    if (edges[t].src == edges[t - 1].src && edges[t].dst == edges[t - 1].dst)
      throw ValidationError("duplicate edge " + edge_name(edges[t]));

  offsets_.assign(vertex_count + 1, 0);
  targets_.reserve(edges.size());
  weights_.reserve(edges.size());
  for (const Edge& e : edges) {
    ++offsets_[e.src + 1];
    targets_.push_back(e.dst);
    weights_.push_back(e.weight);
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());

  in_offsets_.assign(vertex_count + 1, 0);
  for (const Edge& e : edges) ++in_offsets_[e.dst + 1];
  std::partial_sum(in_offsets_.begin(), in_offsets_.end(), in_offsets_.begin());
  sources_.resize(edges.size());
  in_weights_.resize(edges.size());
  std::vector<std::size_t> cursor(in_offsets_.begin(), in_offsets_.end() - 1);
  for (const Edge& e : edges) {
    sources_[cursor[e.dst]] = e.src;
    in_weights_[cursor[e.dst]++] = e.weight;
  }

  if (undirected_) {
    for (const Edge& e : edges)
      if (weight(e.dst, e.src) != e.weight)
        throw ValidationError("undirected graph lacks the mirror of edge " + edge_name(e));
  }
}

double Graph::out_degree(Vertex v) const {
  const auto w = out_weights(v);
  return std::accumulate(w.begin(), w.end(), 0.0);
}

double Graph::weight(Vertex i, Vertex j) const {
  const auto nb = out_neighbours(i);
  const auto it = std::lower_bound(nb.begin(), nb.end(), j);
  if (it == nb.end() || *it != j) return 0.0;
  return weights_[offsets_[i] + static_cast<std::size_t>(it - nb.begin())];
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (Vertex i = 0; i < vertex_count_; ++i)
    for (std::size_t t = offsets_[i]; t < offsets_[i + 1]; ++t)
      out.push_back({i, targets_[t], weights_[t]});
  return out;
}

Graph Graph::with_positions(std::vector<Point> positions, int dims) const {
  if (dims != 2 && dims != 3) throw ValidationError("positions must be 2- or 3-dimensional");
  if (positions.size() != static_cast<std::size_t>(vertex_count_))
    throw ValidationError("expected " + std::to_string(vertex_count_) + " positions, got " +
                          std::to_string(positions.size()));
  Graph g = *this;
  if (dims == 2)
    for (auto& p : positions) p[2] = 0.0;
  g.positions_ = std::move(positions);
  g.dims_ = dims;
  return g;
}

SparseMatrix Graph::adjacency() const {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(edge_count());
  for (const Edge& e : edges()) triplets.emplace_back(e.src, e.dst, e.weight);
  SparseMatrix a(vertex_count_, vertex_count_);
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

Graph Graph::permuted(std::span<const Vertex> perm) const {
  if (perm.size() != static_cast<std::size_t>(vertex_count_))
    throw ValidationError("permutation length does not match vertex count");
  std::vector<Edge> moved;
  moved.reserve(edge_count());
  for (const Edge& e : edges()) moved.push_back({perm[e.src], perm[e.dst], e.weight});
  Graph g(vertex_count_, std::move(moved), undirected_);
  if (has_positions()) {
    std::vector<Point> p(vertex_count_);
    for (Vertex v = 0; v < vertex_count_; ++v) p[perm[v]] = positions_[v];
    g = g.with_positions(std::move(p), dims_);
  }
  return g;
}

Graph Graph::induced(std::span<const Vertex> vertices) const {
  std::vector<Vertex> local(vertex_count_, -1);
  for (std::size_t t = 0; t < vertices.size(); ++t) local[vertices[t]] = static_cast<Vertex>(t);
  std::vector<Edge> kept;
  for (Vertex v : vertices)
    for (std::size_t t = offsets_[v]; t < offsets_[v + 1]; ++t)
      if (local[targets_[t]] >= 0) kept.push_back({local[v], local[targets_[t]], weights_[t]});
  Graph g(static_cast<int>(vertices.size()), std::move(kept), undirected_);
  if (has_positions()) {
    std::vector<Point> p;
    p.reserve(vertices.size());
    for (Vertex v : vertices) p.push_back(positions_[v]);
    g = g.with_positions(std::move(p), dims_);
  }
  return g;
}

Laplacian laplacian(const Graph& g) {
  const int n = g.size();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(g.edge_count() + n);
  Eigen::VectorXd row_sums(n);
  for (Vertex i = 0; i < n; ++i) {
    const auto nb = g.out_neighbours(i);
    const auto w = g.out_weights(i);
    double degree = 0.0;
    for (std::size_t t = 0; t < nb.size(); ++t) {
      triplets.emplace_back(i, nb[t], -w[t]);
      degree += w[t];
    }
    triplets.emplace_back(i, i, degree);
    // the diagonal is the exact float sum of the off-diagonal magnitudes, so
    // the residual below is only the reassociation error of that sum
    double sum = degree;
    for (std::size_t t = 0; t < nb.size(); ++t) sum -= w[t];
    row_sums[i] = sum;
  }
  Laplacian lap;
  lap.matrix.resize(n, n);
  lap.matrix.setFromTriplets(triplets.begin(), triplets.end());
  lap.row_sums = std::move(row_sums);
  return lap;
}

double inf_norm(const SparseMatrix& m) {
  double best = 0.0;
  for (int r = 0; r < m.outerSize(); ++r) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

std::vector<int> strong_components(const Graph& g, int* count) {
  const int n = g.size();
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<Vertex> stack;
  std::vector<std::pair<Vertex, std::size_t>> call;
  int next_index = 0, components = 0;
  for (Vertex root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    call.emplace_back(root, 0);
    while (!call.empty()) {
      auto& [v, child] = call.back();
      if (child == 0 && index[v] < 0) {
        index[v] = low[v] = next_index++;
        stack.push_back(v);
        on_stack[v] = true;
      }
      const auto nb = g.out_neighbours(v);
      if (child < nb.size()) {
        const Vertex w = nb[child++];
        if (index[w] < 0) {
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        Vertex w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = components;
        } while (w != v);
        ++components;
      }
      const Vertex finished = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[finished]);
    }
  }
  if (count) *count = components;
  return comp;
}

bool strongly_connected(const Graph& g) {
  int count = 0;
  strong_components(g, &count);
  return count <= 1;
}

int closed_classes(const Graph& g) {
  int count = 0;
  const std::vector<int> comp = strong_components(g, &count);
  std::vector<bool> leaves(count, false);
  for (const Edge& e : g.edges())
    if (comp[e.src] != comp[e.dst]) leaves[comp[e.src]] = true;
  return static_cast<int>(std::count(leaves.begin(), leaves.end(), false));
}

std::vector<int> weak_components(const Graph& g, int* count) {
  std::vector<int> comp(g.size(), -1);
  std::vector<Vertex> frontier;
  int components = 0;
  for (Vertex root = 0; root < g.size(); ++root) {
    if (comp[root] >= 0) continue;
    comp[root] = components;
    frontier.assign(1, root);
    while (!frontier.empty()) {
      const Vertex v = frontier.back();
      frontier.pop_back();
      for (auto nb : {g.out_neighbours(v), g.in_neighbours(v)})
        for (Vertex w : nb)
          if (comp[w] < 0) {
            comp[w] = components;
            frontier.push_back(w);
          }
    }
    ++components;
  }
  if (count) *count = components;
  return comp;
}

std::vector<bool> reach_against_edges(const Graph& g, std::span<const Vertex> sources) {
  std::vector<bool> seen(g.size(), false);
  std::vector<Vertex> frontier;
  for (Vertex s : sources)
    if (!seen[s]) {
      seen[s] = true;
      frontier.push_back(s);
    }
  while (!frontier.empty()) {
    const Vertex v = frontier.back();
    frontier.pop_back();
    for (Vertex u : g.in_neighbours(v))
      if (!seen[u]) {
        seen[u] = true;
        frontier.push_back(u);
      }
  }
  return seen;
}

}  // namespace cdi
