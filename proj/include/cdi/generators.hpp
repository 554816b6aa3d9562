#pragma once

#include <array>
#include <cstdint>

#include "cdi/graph.hpp"

namespace cdi {

/// Side lengths of the sampling box; z is ignored in 2-D.
using Box = std::array<double, 3>;

inline constexpr Box unit_box{1.0, 1.0, 1.0};

/// Uniform points in the box, each vertex pointing at its k nearest
/// neighbours (ties to the lower index). Positions are drawn first, vertex
/// by vertex, so the same seed gives the same point set for any k.
Graph generate_knnr(int n, int k, int dims, const Box& box, std::uint64_t seed,
                    double weight = 1.0);

/// As generate_knnr, but every vertex draws its own k uniformly from
/// [k_min, k_max] after all positions are drawn.
Graph generate_knnr_variable(int n, int k_min, int k_max, int dims, const Box& box,
                             std::uint64_t seed, double weight = 1.0);

/// Directed Erdos-Renyi-style graph with prescribed outdegree: each vertex
/// picks k in [k_min, k_max] and then k distinct targets other than itself.
Graph generate_er_outdegree(int n, int k_min, int k_max, std::uint64_t seed, double weight = 1.0);

/// Flock model: uniform points in a (1, 1, thickness) prism with k-NN
/// edges in 3-D.
Graph generate_flock(int n, int k, double thickness, std::uint64_t seed, double weight = 1.0);

/// Directed k-NN graph over given points.
Graph knn_graph(std::span<const Point> points, std::span<const int> k, int dims,
                double weight = 1.0);

/// Undirected k-NN graph: i ~ j when either is among the other's k nearest.
Graph knn_graph_undirected(std::span<const Point> points, int k, int dims, double weight = 1.0);

}  // namespace cdi
