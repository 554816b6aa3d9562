#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cdi/graph.hpp"

namespace cdi {

/// Integer voxel grid with 1 mm spacing; voxel ids are x + nx (y + ny z).
struct VoxelGrid {
  int nx = 20, ny = 20, nz = 20;

  long long size() const noexcept { return 1LL * nx * ny * nz; }
  long long id(int x, int y, int z) const noexcept { return x + 1LL * nx * (y + 1LL * ny * z); }
  Point centre(long long id) const noexcept;
};

/// One scan: an undirected k-NN graph over occupied voxels, with positions.
struct Scan {
  std::string id;
  Graph graph{0, {}};
  /// grid id of each vertex
  std::vector<long long> voxels;
};

struct Subject {
  Scan first;
  Scan second;
};

struct SubjectPoolOptions {
  int subjects = 10;
  int vertices = 2000;
  int k = 10;
  VoxelGrid grid{};
  /// share of every scan drawn from one template common to all subjects
  double template_fraction = 0.9;
  /// weights of the subject's tracts; edges inside tract t carry weights[t]
  std::vector<double> tract_weights{10.0, 7.0, 5.0, 3.5};
  double tract_length = 10.0;
  double tract_radius = 1.0;
  /// rescan: share of voxels moved by 1 mm to a free neighbouring voxel
  double jitter_fraction = 0.1;
  double dropout = 0.05;
  /// subject whose rescan loses heavy_dropout of its voxels (-1 for none)
  int heavy_subject = 0;
  double heavy_dropout = 0.25;
  std::uint64_t seed = 1;
};

/// Subjects whose scans share a template voxel set but carry their own
/// heavily weighted tracts. The second scan of each subject is the first
/// with on-grid jitter and dropout applied.
std::vector<Subject> synthetic_subjects(const SubjectPoolOptions& options);

/// The scan's graph re-indexed onto all grid voxels (unoccupied voxels are
/// isolated), so that scans can be compared edge by edge.
Graph on_grid(const Scan& scan, const VoxelGrid& grid);

}  // namespace cdi
