#pragma once

#include <iosfwd>
#include <vector>

#include "cdi/graph.hpp"
#include "cdi/spectra.hpp"

namespace cdi {

struct Community {
  Vertex leader = 0;
  /// sorted ascending; contains the leader
  std::vector<Vertex> members;
  /// 1-based influence rank
  int rank = 0;
  /// leader chosen by the fallback rule; members joined by non-strict ascent
  bool elected = false;
};

/// Communities of dynamical influence, rank order (rank 1 first).
struct CDIResult {
  std::vector<Community> communities;
  InfluenceCoordinates coords;
  std::vector<Vertex> unassigned;
  /// some weak component had no strict leader and one was elected
  bool fallback_leader = false;

  int y() const noexcept { return coords.y(); }
};

/// Differences in s no larger than this are ties. Eigenvector entries
/// carry rounding noise, so exact comparisons would split symmetric cases.
double tie_tolerance(const Eigen::VectorXd& s);

/// Vertex j leads when s_j exceeds s over all its out-neighbours (0 for a
/// vertex with none) by more than the tie tolerance. A weak component with
/// no such vertex gets its lowest-index argmax of s, also listed in
/// `elected`.
std::vector<Vertex> find_leaders(const Graph& g, const InfluenceCoordinates& coords,
                                 std::vector<Vertex>* elected = nullptr);

/// For each leader, the vertices with a directed path to it along which s
/// strictly increases at every hop (found by reverse search from the
/// leader). For elected leaders the hops only need to not decrease. Lists
/// are sorted and may overlap.
std::vector<std::vector<Vertex>> assign_communities(const Graph& g,
                                                    const InfluenceCoordinates& coords,
                                                    const std::vector<Vertex>& leaders,
                                                    const std::vector<Vertex>& elected = {});

/// Keeps each shared vertex j only in the community maximising
/// (e_leader . e_j) / s_leader (ties, up to the tie tolerance, to the
/// leader with larger v1), then ranks communities by their largest v1 entry.
CDIResult resolve_overlaps(const std::vector<std::vector<Vertex>>& raw,
                           const std::vector<Vertex>& leaders, InfluenceCoordinates coords,
                           int vertex_count);

CDIResult detect_communities(const Graph& g, const InfluenceCoordinates& coords);
CDIResult detect_communities(const Graph& g, int y, MatrixKind kind,
                             const SpectralOptions& options = {});

/// An ascending-s path from v to the leader (inclusive), or empty if none
/// exists. Strict unless `strict` is false, with the tie tolerance either
/// way. Independent breadth-first search used for checking.
std::vector<Vertex> ascent_witness(const Graph& g, const Eigen::VectorXd& s, Vertex v,
                                   Vertex leader, bool strict = true);

/// {"y", "matrix", "communities": [{rank, leader, members}], "unassigned"},
/// vertices 1-based as in the file formats.
void write_cdi_json(const CDIResult& result, std::ostream& out);

}  // namespace cdi
