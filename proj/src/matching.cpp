#include "cdi/matching.hpp"

#include <algorithm>
#include <ostream>
#include <tuple>

#include <json.hpp>

#include "cdi/error.hpp"
#include "cdi/kernels.hpp"

namespace cdi {

VoxelCommunity reduce_community(const Graph& g, const CDIResult& cdi, const Community& community,
                                double threshold, const std::string& scan_id) {
  if (!g.has_positions()) throw ValidationError("community reduction needs vertex positions");
  if (cdi.coords.n() != g.size()) throw ValidationError("CDI result belongs to another graph");
  VoxelCommunity out;
  out.source_rank = community.rank;
  out.scan_id = scan_id;
  const auto& e = cdi.coords.e;
  const auto pos = g.positions();
  for (Vertex v : community.members) {
    bool keep = threshold <= 0.0;
    for (Eigen::Index t = 0; t < e.cols() && !keep; ++t) keep = e(v, t) > threshold;
    if (keep) out.points.push_back(pos[v]);
  }
  return out;
}

std::vector<VoxelCommunity> reduce_scan(const Graph& g, const CDIResult& cdi, double threshold,
                                        const std::string& scan_id, std::vector<int>* excluded) {
  std::vector<VoxelCommunity> out;
  for (const auto& c : cdi.communities) {
    auto vc = reduce_community(g, cdi, c, threshold, scan_id);
    if (vc.points.empty()) {
      if (excluded) excluded->push_back(c.rank);
      continue;
    }
    out.push_back(std::move(vc));
  }
  return out;
}

double overlap_percentage(const VoxelCommunity& a, const VoxelCommunity& b) {
  if (a.points.empty() || b.points.empty()) throw ValidationError("overlap of an empty community");
  const kernels::SpatialHash hash(b.points, kOverlapCell);
  const auto hits = kernels::count_within_omp(a.points, hash, kOverlapRadius);
  return 100.0 * static_cast<double>(hits) / static_cast<double>(a.points.size());
}

double pair_score(const VoxelCommunity& a, const VoxelCommunity& b) {
  return std::max(overlap_percentage(a, b), overlap_percentage(b, a));
}

MatchReport mean_matching_communities(const std::vector<VoxelCommunity>& a,
                                      const std::vector<VoxelCommunity>& b) {
  std::vector<std::tuple<double, int, int>> scored;
  for (int i = 0; i < static_cast<int>(a.size()); ++i)
    for (int j = 0; j < static_cast<int>(b.size()); ++j) {
      const double s = pair_score(a[i], b[j]);
      if (s >= kMatchThresholds.front()) scored.emplace_back(s, i, j);
    }
  std::sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) {
    if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) > std::get<0>(y);
    return std::tie(std::get<1>(x), std::get<2>(x)) < std::tie(std::get<1>(y), std::get<2>(y));
  });
  std::vector<char> used_a(a.size(), 0), used_b(b.size(), 0);
  MatchReport out;
  for (const auto& [s, i, j] : scored) {
    if (used_a[i] || used_b[j]) continue;
    used_a[i] = used_b[j] = 1;
    out.pairs.push_back({{i, j}, s});
    for (std::size_t t = 0; t < kMatchThresholds.size(); ++t)
      if (s >= kMatchThresholds[t]) ++out.per_threshold[t];
  }
  double sum = 0.0;
  for (int c : out.per_threshold) sum += c;
  out.mean_matches = sum / static_cast<double>(kMatchThresholds.size());
  return out;
}

void write_match_json(const MatchReport& report, std::ostream& out) {
  nlohmann::json j;
  j["pairs"] = nlohmann::json::array();
  for (const auto& [ij, s] : report.pairs)
    j["pairs"].push_back({{"a", ij.first + 1}, {"b", ij.second + 1}, {"score", s}});
  j["perThreshold"] = report.per_threshold;
  j["meanMatches"] = report.mean_matches;
  out << j.dump(2) << '\n';
}

}  // namespace cdi
