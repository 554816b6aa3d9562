#include "cdi/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "cdi/error.hpp"

namespace cdi {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

long long parse_index(std::string_view s, std::size_t line) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError("bad vertex index '" + std::string(s) + "'", line);
  if (v < 1) throw ParseError("vertex indices are 1-based", line);
  return v;
}

double parse_real(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError("bad number '" + std::string(s) + "'", line);
  return v;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  return out;
}

}  // namespace

std::string format_real(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

Graph read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::optional<long long> declared;
  long long largest = 0;
  bool undirected = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      const auto comment = split_fields(view.substr(hash + 1));
      if (comment.size() == 2 && comment[0] == "vertices:")
        declared = parse_index(comment[1], lineno);
      else if (comment.size() == 1 && comment[0] == "undirected")
        undirected = true;
      view = view.substr(0, hash);
    }
    const auto fields = split_fields(view);
    if (fields.empty()) continue;
    if (fields.size() != 3)
      throw ParseError("expected 'src dst weight', got " + std::to_string(fields.size()) + " fields",
                       lineno);
    const long long src = parse_index(fields[0], lineno);
    const long long dst = parse_index(fields[1], lineno);
    const double w = parse_real(fields[2], lineno);
    if (src == dst) throw ParseError("self-loop at vertex " + std::to_string(src), lineno);
    largest = std::max({largest, src, dst});
    edges.push_back({static_cast<Vertex>(src - 1), static_cast<Vertex>(dst - 1), w});
  }
  if (declared && *declared < largest)
    throw ValidationError("edge references vertex " + std::to_string(largest) + " but only " +
                          std::to_string(*declared) + " declared");
  return Graph(static_cast<int>(declared.value_or(largest)), std::move(edges), undirected);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  out << "# vertices: " << g.size() << '\n';
  if (g.undirected()) out << "# undirected\n";
  for (const Edge& e : g.edges())
    out << e.src + 1 << ' ' << e.dst + 1 << ' ' << format_real(e.weight) << '\n';
}

Graph load_graph(const std::string& path) {
  auto in = open_in(path);
  return read_edge_list(in);
}

void save_graph(const Graph& g, const std::string& path) {
  auto out = open_out(path);
  write_edge_list(g, out);
}

Graph read_positions(const Graph& g, std::istream& in, int expected_dims) {
  std::vector<Point> pts(g.size(), Point{0.0, 0.0, 0.0});
  std::vector<bool> seen(g.size(), false);
  int dims = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    const auto fields = split_fields(view);
    if (fields.empty()) continue;
    const int here = static_cast<int>(fields.size()) - 1;
    if (here != 2 && here != 3) throw ParseError("expected 'vertex x y [z]'", lineno);
    if (dims == 0) dims = here;
    if (here != dims) throw ParseError("mixed 2-D and 3-D coordinates", lineno);
    if (expected_dims != 0 && here != expected_dims)
      throw ValidationError("dimension mismatch: graph is " + std::to_string(expected_dims) +
                            "-D but line " + std::to_string(lineno) + " has " +
                            std::to_string(here) + " coordinates");
    const long long v = parse_index(fields[0], lineno);
    if (v > g.size()) throw ParseError("vertex " + std::to_string(v) + " out of range", lineno);
    if (seen[v - 1]) throw ParseError("duplicate position for vertex " + std::to_string(v), lineno);
    seen[v - 1] = true;
    for (int d = 0; d < dims; ++d) pts[v - 1][d] = parse_real(fields[d + 1], lineno);
  }
  for (std::size_t v = 0; v < seen.size(); ++v)
    if (!seen[v]) throw ValidationError("no position for vertex " + std::to_string(v + 1));
  return g.with_positions(std::move(pts), dims);
}

Graph load_positions(const Graph& g, const std::string& path, int expected_dims) {
  auto in = open_in(path);
  return read_positions(g, in, expected_dims);
}

void write_positions(const Graph& g, std::ostream& out) {
  if (!g.has_positions()) throw ValidationError("graph has no positions");
  for (Vertex v = 0; v < g.size(); ++v) {
    out << v + 1;
    for (int d = 0; d < g.dims(); ++d) out << ' ' << format_real(g.positions()[v][d]);
    out << '\n';
  }
}

void save_positions(const Graph& g, const std::string& path) {
  auto out = open_out(path);
  write_positions(g, out);
}

}  // namespace cdi
