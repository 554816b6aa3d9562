#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cdi/communities.hpp"
#include "cdi/graph.hpp"

namespace cdi {

/// Positions of the strongly weighted members of one community.
struct VoxelCommunity {
  std::vector<Point> points;
  int source_rank = 0;
  std::string scan_id;
};

/// Members whose entry in any coordinate eigenvector exceeds `threshold`.
/// May come back empty. Throws ValidationError if g has no positions.
VoxelCommunity reduce_community(const Graph& g, const CDIResult& cdi, const Community& community,
                                double threshold = 0.01, const std::string& scan_id = {});

/// Reduces every community of a scan, dropping those left empty; their
/// ranks go to `excluded` when given.
std::vector<VoxelCommunity> reduce_scan(const Graph& g, const CDIResult& cdi,
                                        double threshold = 0.01, const std::string& scan_id = {},
                                        std::vector<int>* excluded = nullptr);

/// Voxels lie on a 1 mm grid; two voxels overlap within sqrt(3) mm.
inline constexpr double kOverlapRadius = 1.7320508075688772;
inline constexpr double kOverlapCell = 2.0;

/// Percentage of a's points with a point of b within kOverlapRadius.
double overlap_percentage(const VoxelCommunity& a, const VoxelCommunity& b);

/// max(overlap(a, b), overlap(b, a)).
double pair_score(const VoxelCommunity& a, const VoxelCommunity& b);

inline constexpr std::array<double, 5> kMatchThresholds{50, 60, 70, 80, 90};

struct MatchReport {
  /// matches counted at each of kMatchThresholds
  std::array<int, 5> per_threshold{};
  double mean_matches = 0.0;
  /// (index in a, index in b, score) for greedy pairs scoring at least 50
  std::vector<std::pair<std::pair<int, int>, double>> pairs;
};

/// Greedy one-to-one pairing by descending pair score; ties go to the
/// lower index in a, then in b.
MatchReport mean_matching_communities(const std::vector<VoxelCommunity>& a,
                                      const std::vector<VoxelCommunity>& b);

/// {"pairs": [{a, b, score}], "perThreshold": [...], "meanMatches"}.
void write_match_json(const MatchReport& report, std::ostream& out);

}  // namespace cdi
