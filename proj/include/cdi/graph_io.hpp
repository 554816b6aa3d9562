#pragma once

#include <iosfwd>
#include <string>

#include "cdi/graph.hpp"

namespace cdi {

// Edge list: one "src dst weight" per line, 1-based, '#' starts a comment.
// Two comment directives are understood: "# vertices: N" fixes the vertex
// count (otherwise the largest index seen) and "# undirected" marks a
// symmetric graph whose file lists both directions.
//
// Positions sidecar: "vertex x y [z]" per line, same indexing.

Graph read_edge_list(std::istream& in);
void write_edge_list(const Graph& g, std::ostream& out);

Graph load_graph(const std::string& path);
void save_graph(const Graph& g, const std::string& path);

/// Attach positions read from a sidecar. `expected_dims` of 2 or 3 rejects
/// files of the other dimensionality; 0 accepts either.
Graph read_positions(const Graph& g, std::istream& in, int expected_dims = 0);
Graph load_positions(const Graph& g, const std::string& path, int expected_dims = 0);
void write_positions(const Graph& g, std::ostream& out);
void save_positions(const Graph& g, const std::string& path);

/// Shortest decimal text that reads back bit-identical (17 significant digits max).
std::string format_real(double x);

}  // namespace cdi
