#include "cdi/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "cdi/error.hpp"
#include "cdi/generators.hpp"
#include "cdi/rng.hpp"

namespace cdi {

Point VoxelGrid::centre(long long id) const noexcept {
  const long long x = id % nx;
  const long long y = (id / nx) % ny;
  const long long z = id / (1LL * nx * ny);
  return {static_cast<double>(x), static_cast<double>(y), static_cast<double>(z)};
}

namespace {

/// Voxel ids plus tract label per voxel (-1 for none).
struct VoxelSet {
  std::vector<long long> ids;
  std::vector<int> tract;
};

double segment_distance(const Point& p, const Point& a, const Point& b) {
  double ab2 = 0.0, t = 0.0;
  for (int d = 0; d < 3; ++d) {
    ab2 += (b[d] - a[d]) * (b[d] - a[d]);
    t += (p[d] - a[d]) * (b[d] - a[d]);
  }
  t = ab2 > 0.0 ? std::clamp(t / ab2, 0.0, 1.0) : 0.0;
  double d2 = 0.0;
  for (int d = 0; d < 3; ++d) {
    const double q = a[d] + t * (b[d] - a[d]) - p[d];
    d2 += q * q;
  }
  return std::sqrt(d2);
}

Scan build_scan(const VoxelSet& set, const SubjectPoolOptions& opt, std::string id) {
  const auto n = static_cast<int>(set.ids.size());
  std::vector<Point> pts(n);
  for (int i = 0; i < n; ++i) pts[i] = opt.grid.centre(set.ids[i]);
  const Graph plain = knn_graph_undirected(pts, opt.k, 3);
  std::vector<Edge> edges;
  edges.reserve(plain.edge_count());
  for (const auto& e : plain.edges()) {
    const int t = set.tract[e.src];
    const double w = t >= 0 && t == set.tract[e.dst] ? opt.tract_weights[t] : 1.0;
    edges.push_back({e.src, e.dst, w});
  }
  Scan scan;
  scan.id = std::move(id);
  scan.graph = Graph(n, std::move(edges), true).with_positions(std::move(pts), 3);
  scan.voxels = set.ids;
  return scan;
}

VoxelSet rescan(const VoxelSet& base, double dropout, const SubjectPoolOptions& opt, Rng& rng) {
  const auto& g = opt.grid;
  std::unordered_map<long long, int> occupied;
  for (std::size_t i = 0; i < base.ids.size(); ++i) occupied[base.ids[i]] = static_cast<int>(i);
  VoxelSet moved = base;
  for (std::size_t i = 0; i < moved.ids.size(); ++i) {
    if (rng.uniform() >= opt.jitter_fraction) continue;
    const Point c = g.centre(moved.ids[i]);
    std::vector<long long> free;
    for (int d = 0; d < 3; ++d)
      for (int s : {-1, 1}) {
        int q[3] = {static_cast<int>(c[0]), static_cast<int>(c[1]), static_cast<int>(c[2])};
        q[d] += s;
        if (q[0] < 0 || q[1] < 0 || q[2] < 0 || q[0] >= g.nx || q[1] >= g.ny || q[2] >= g.nz)
          continue;
        const long long nid = g.id(q[0], q[1], q[2]);
        if (!occupied.contains(nid)) free.push_back(nid);
      }
    if (free.empty()) continue;
    const long long target = free[rng.below(free.size())];
    occupied.erase(moved.ids[i]);
    occupied[target] = static_cast<int>(i);
    moved.ids[i] = target;
  }
  // drop an exact share, chosen by a partial shuffle
  const std::size_t n = moved.ids.size();
  const auto drop = static_cast<std::size_t>(std::llround(dropout * static_cast<double>(n)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = 0; i < drop; ++i) std::swap(order[i], order[i + rng.below(n - i)]);
  std::vector<char> gone(n, 0);
  for (std::size_t i = 0; i < drop; ++i) gone[order[i]] = 1;
  VoxelSet out;
  for (std::size_t i = 0; i < n; ++i) {
    if (gone[i]) continue;
    out.ids.push_back(moved.ids[i]);
    out.tract.push_back(moved.tract[i]);
  }
  return out;
}

}  // namespace

std::vector<Subject> synthetic_subjects(const SubjectPoolOptions& opt) {
  const auto cells = opt.grid.size();
  if (opt.subjects < 1 || opt.vertices < opt.k + 1 || opt.vertices > cells)
    throw ValidationError("subject pool does not fit the grid");
  if (!(opt.template_fraction >= 0.0 && opt.template_fraction <= 1.0) ||
      !(opt.dropout >= 0.0 && opt.dropout < 1.0) ||
      !(opt.heavy_dropout >= 0.0 && opt.heavy_dropout < 1.0))
    throw ValidationError("fractions must lie in [0, 1)");

  // shared template: a random subset of grid cells
  Rng trng(mix_seed(opt.seed, 0));
  std::vector<long long> all(cells);
  std::iota(all.begin(), all.end(), 0LL);
  const auto tsize = static_cast<std::size_t>(std::llround(opt.template_fraction * opt.vertices));
  for (std::size_t i = 0; i < tsize; ++i) std::swap(all[i], all[i + trng.below(cells - i)]);
  const std::vector<long long> templ(all.begin(), all.begin() + tsize);

  std::vector<Subject> out;
  for (int s = 0; s < opt.subjects; ++s) {
    Rng rng(mix_seed(opt.seed, 1 + static_cast<std::uint64_t>(s)));
    std::unordered_map<long long, int> label;  // voxel -> tract (-1 none)
    std::vector<long long> order;
    auto add = [&](long long id, int tract) {
      auto [it, fresh] = label.try_emplace(id, tract);
      if (fresh) order.push_back(id);
      else if (tract >= 0 && it->second < 0) it->second = tract;
    };
    // tracts: voxels within tract_radius of a random segment
    for (int t = 0; t < static_cast<int>(opt.tract_weights.size()); ++t) {
      Point a, b;
      const double ext[3] = {static_cast<double>(opt.grid.nx - 1), static_cast<double>(opt.grid.ny - 1),
                             static_cast<double>(opt.grid.nz - 1)};
      double dir[3], norm = 0.0;
      for (int d = 0; d < 3; ++d) {
        dir[d] = rng.uniform() * 2.0 - 1.0;
        norm += dir[d] * dir[d];
      }
      norm = std::sqrt(norm);
      for (int d = 0; d < 3; ++d) {
        a[d] = rng.uniform() * ext[d];
        b[d] = std::clamp(a[d] + opt.tract_length * dir[d] / norm, 0.0, ext[d]);
      }
      for (long long id = 0; id < cells; ++id)
        if (segment_distance(opt.grid.centre(id), a, b) <= opt.tract_radius) add(id, t);
    }
    for (long long id : templ) add(id, -1);
    if (static_cast<int>(order.size()) > opt.vertices)
      throw ValidationError("template and tracts exceed the vertex count");
    while (static_cast<int>(order.size()) < opt.vertices)
      add(static_cast<long long>(rng.below(cells)), -1);

    VoxelSet base;
    base.ids = order;
    for (long long id : order) base.tract.push_back(label[id]);
    const std::string name = "s" + std::to_string(s + 1);
    const double drop = s == opt.heavy_subject ? opt.heavy_dropout : opt.dropout;
    Subject subj;
    subj.first = build_scan(base, opt, name + "a");
    subj.second = build_scan(rescan(base, drop, opt, rng), opt, name + "b");
    out.push_back(std::move(subj));
  }
  return out;
}

Graph on_grid(const Scan& scan, const VoxelGrid& grid) {
  const auto cells = grid.size();
  std::vector<Edge> edges;
  edges.reserve(scan.graph.edge_count());
  for (const auto& e : scan.graph.edges())
    edges.push_back({static_cast<Vertex>(scan.voxels[e.src]), static_cast<Vertex>(scan.voxels[e.dst]),
                     e.weight});
  return Graph(static_cast<int>(cells), std::move(edges), scan.graph.undirected());
}

}  // namespace cdi
