#include "cdi/communities.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>

#include <json.hpp>

#include "cdi/error.hpp"

namespace cdi {

double tie_tolerance(const Eigen::VectorXd& s) {
  return s.size() == 0 ? 0.0 : 1e-9 * s.cwiseAbs().maxCoeff();
}

std::vector<Vertex> find_leaders(const Graph& g, const InfluenceCoordinates& coords,
                                 std::vector<Vertex>* elected) {
  const Eigen::VectorXd& s = coords.s;
  const double tol = tie_tolerance(s);
  int count = 0;
  const std::vector<int> comp = weak_components(g, &count);
  std::vector<bool> led(count, false);
  std::vector<Vertex> leaders;
  for (Vertex j = 0; j < g.size(); ++j) {
    double highest_followed = 0.0;
    for (Vertex t : g.out_neighbours(j)) highest_followed = std::max(highest_followed, s[t]);
    if (s[j] > highest_followed + tol) {
      leaders.push_back(j);
      led[comp[j]] = true;
    }
  }
  std::vector<double> top(count, -INFINITY);
  for (Vertex j = 0; j < g.size(); ++j)
    if (!led[comp[j]]) top[comp[j]] = std::max(top[comp[j]], s[j]);
  std::vector<Vertex> chosen;
  for (Vertex j = 0; j < g.size(); ++j)
    if (!led[comp[j]] && s[j] >= top[comp[j]] - tol) {
      led[comp[j]] = true;
      chosen.push_back(j);
    }
  leaders.insert(leaders.end(), chosen.begin(), chosen.end());
  std::sort(leaders.begin(), leaders.end());
  if (elected) *elected = std::move(chosen);
  return leaders;
}

std::vector<std::vector<Vertex>> assign_communities(const Graph& g,
                                                    const InfluenceCoordinates& coords,
                                                    const std::vector<Vertex>& leaders,
                                                    const std::vector<Vertex>& elected) {
  const Eigen::VectorXd& s = coords.s;
  const double tol = tie_tolerance(s);
  std::vector<std::vector<Vertex>> raw;
  raw.reserve(leaders.size());
  std::vector<int> mark(g.size(), -1);
  for (std::size_t h = 0; h < leaders.size(); ++h) {
    const bool strict = std::find(elected.begin(), elected.end(), leaders[h]) == elected.end();
    const double margin = strict ? tol : -tol;
    std::vector<Vertex> members{leaders[h]};
    mark[leaders[h]] = static_cast<int>(h);
    for (std::size_t head = 0; head < members.size(); ++head) {
      const Vertex w = members[head];
      // u -> w is an ascending hop when s_w - s_u exceeds the margin
      for (Vertex u : g.in_neighbours(w))
        if (mark[u] != static_cast<int>(h) && s[w] - s[u] > margin) {
          mark[u] = static_cast<int>(h);
          members.push_back(u);
        }
    }
    std::sort(members.begin(), members.end());
    raw.push_back(std::move(members));
  }
  return raw;
}

CDIResult resolve_overlaps(const std::vector<std::vector<Vertex>>& raw,
                           const std::vector<Vertex>& leaders, InfluenceCoordinates coords,
                           int vertex_count) {
  if (raw.size() != leaders.size()) throw ValidationError("one member list per leader expected");
  const Eigen::MatrixXd& e = coords.e;
  const Eigen::VectorXd& s = coords.s;
  const Eigen::VectorXd v1 = coords.v1();
  const double tol = tie_tolerance(s);

  std::vector<std::vector<int>> owners(vertex_count);
  for (std::size_t k = 0; k < raw.size(); ++k)
    for (Vertex v : raw[k]) owners[v].push_back(static_cast<int>(k));

  std::vector<std::vector<Vertex>> kept(raw.size());
  std::vector<Vertex> unassigned;
  for (Vertex j = 0; j < vertex_count; ++j) {
    const auto& candidates = owners[j];
    if (candidates.empty()) {
      unassigned.push_back(j);
      continue;
    }
    int best = candidates.front();
    double best_z = e.row(leaders[best]).dot(e.row(j)) / s[leaders[best]];
    for (int k : candidates) {
      const Vertex b = leaders[k];
      const double z = e.row(b).dot(e.row(j)) / s[b];
      const bool tied = std::abs(z - best_z) <= tol;
      const bool better = (!tied && z > best_z) ||
                          (tied && (v1[b] > v1[leaders[best]] ||
                                    (v1[b] == v1[leaders[best]] && b < leaders[best])));
      if (better) {
        best = k;
        best_z = z;
      }
    }
    kept[best].push_back(j);
  }

  std::vector<Community> communities;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    if (kept[k].empty()) continue;
    communities.push_back({leaders[k], std::move(kept[k]), 0});
  }
  auto peak = [&](const Community& c) {
    double m = -INFINITY;
    for (Vertex v : c.members) m = std::max(m, v1[v]);
    return m;
  };
  std::vector<double> peaks;
  std::vector<std::size_t> order(communities.size());
  for (std::size_t t = 0; t < communities.size(); ++t) {
    order[t] = t;
    peaks.push_back(peak(communities[t]));
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (peaks[a] != peaks[b]) return peaks[a] > peaks[b];
    return communities[a].leader < communities[b].leader;
  });

  CDIResult result;
  for (std::size_t r = 0; r < order.size(); ++r) {
    result.communities.push_back(std::move(communities[order[r]]));
    result.communities.back().rank = static_cast<int>(r) + 1;
  }
  result.unassigned = std::move(unassigned);
  result.coords = std::move(coords);
  return result;
}

CDIResult detect_communities(const Graph& g, const InfluenceCoordinates& coords) {
  if (g.size() == 0) throw ValidationError("graph has no vertices");
  std::vector<Vertex> elected;
  const auto leaders = find_leaders(g, coords, &elected);
  const auto raw = assign_communities(g, coords, leaders, elected);
  CDIResult result = resolve_overlaps(raw, leaders, coords, g.size());
  for (Community& c : result.communities)
    c.elected = std::find(elected.begin(), elected.end(), c.leader) != elected.end();
  result.fallback_leader = !elected.empty();
  return result;
}

CDIResult detect_communities(const Graph& g, int y, MatrixKind kind,
                             const SpectralOptions& options) {
  return detect_communities(g, influence_coordinates(g, y, kind, options));
}

std::vector<Vertex> ascent_witness(const Graph& g, const Eigen::VectorXd& s, Vertex v,
                                   Vertex leader, bool strict) {
  const double margin = strict ? tie_tolerance(s) : -tie_tolerance(s);
  std::vector<Vertex> parent(g.size(), -1);
  std::deque<Vertex> queue{v};
  parent[v] = v;
  while (!queue.empty()) {
    const Vertex u = queue.front();
    queue.pop_front();
    if (u == leader) break;
    for (Vertex w : g.out_neighbours(u))
      if (parent[w] < 0 && s[w] - s[u] > margin) {
        parent[w] = u;
        queue.push_back(w);
      }
  }
  if (parent[leader] < 0) return {};
  std::vector<Vertex> path{leader};
  while (path.back() != v) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

void write_cdi_json(const CDIResult& result, std::ostream& out) {
  nlohmann::json doc;
  doc["y"] = result.y();
  doc["matrix"] = result.coords.kind == MatrixKind::laplacian ? "laplacian" : "adjacency";
  doc["fallback_leader"] = result.fallback_leader;
  auto& list = doc["communities"] = nlohmann::json::array();
  for (const Community& c : result.communities) {
    std::vector<int> members;
    for (Vertex v : c.members) members.push_back(v + 1);
    list.push_back({{"rank", c.rank},
                    {"leader", c.leader + 1},
                    {"elected", c.elected},
                    {"members", members}});
  }
  std::vector<int> unassigned;
  for (Vertex v : result.unassigned) unassigned.push_back(v + 1);
  doc["unassigned"] = unassigned;
  out << doc.dump(2) << '\n';
}

}  // namespace cdi
