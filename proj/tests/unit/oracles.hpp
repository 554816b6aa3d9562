#pragma once

// Independent reference computations for the tests: dense matrices built
// straight from edge lists, full eigendecompositions, brute-force searches.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <queue>
#include <vector>

#include <Eigen/Dense>

#include "cdi/graph.hpp"

namespace oracle {

inline Eigen::MatrixXd dense_adjacency(const cdi::Graph& g) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.size(), g.size());
  for (const auto& e : g.edges()) a(e.src, e.dst) = e.weight;
  return a;
}

inline Eigen::MatrixXd dense_laplacian(const cdi::Graph& g) {
  const Eigen::MatrixXd a = dense_adjacency(g);
  Eigen::MatrixXd l = -a;
  for (int i = 0; i < g.size(); ++i) l(i, i) += a.row(i).sum();
  return l;
}

/// All eigenvalues of m.
inline Eigen::VectorXcd eigenvalues(const Eigen::MatrixXd& m) {
  return Eigen::EigenSolver<Eigen::MatrixXd>(m, false).eigenvalues();
}

/// Left null vector of a Laplacian with a one-dimensional kernel, scaled to
/// unit 2-norm and nonnegative sum.
inline Eigen::VectorXd left_null_vector(const Eigen::MatrixXd& l) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(l.transpose());
  Eigen::MatrixXd k = lu.kernel();
  Eigen::VectorXd v = k.col(0);
  v /= v.norm();
  if (v.sum() < 0) v = -v;
  return v;
}

/// Leftmost real part of the spectrum of L + diag(c).
inline double rate(const cdi::Graph& g, const std::vector<double>& c) {
  Eigen::MatrixXd m = dense_laplacian(g);
  for (int i = 0; i < g.size(); ++i) m(i, i) += c[i];
  const Eigen::VectorXcd ev = eigenvalues(m);
  double lo = ev[0].real();
  for (Eigen::Index i = 1; i < ev.size(); ++i) lo = std::min(lo, ev[i].real());
  return std::max(lo, 0.0);
}

/// reach[i][j]: a directed path i -> ... -> j exists (i == j included).
inline std::vector<std::vector<bool>> transitive_closure(const cdi::Graph& g) {
  const int n = g.size();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) r[i][i] = true;
  for (const auto& e : g.edges()) r[e.src][e.dst] = true;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (r[i][k])
        for (int j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = true;
  return r;
}

/// Indices of the k nearest points to v by full sort on (distance, index).
inline std::vector<int> nearest(const std::vector<cdi::Point>& pts, int v, int k) {
  std::vector<int> idx;
  for (int u = 0; u < static_cast<int>(pts.size()); ++u)
    if (u != v) idx.push_back(u);
  auto d2 = [&](int u) {
    double s = 0;
    for (int t = 0; t < 3; ++t) s += (pts[u][t] - pts[v][t]) * (pts[u][t] - pts[v][t]);
    return s;
  };
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    const double da = d2(a), db = d2(b);
    return da != db ? da < db : a < b;
  });
  idx.resize(k);
  return idx;
}

/// True when path is a directed path in g with strictly increasing s.
// Every hop follows an edge and raises s by more than `margin`; a negative
// margin allows level or slightly falling hops.
inline bool ascending_path(const cdi::Graph& g, const Eigen::VectorXd& s, const std::vector<int>& path,
                           double margin = 0.0) {
  for (std::size_t t = 0; t + 1 < path.size(); ++t) {
    if (!g.has_edge(path[t], path[t + 1])) return false;
    if (!(s[path[t + 1]] - s[path[t]] > margin)) return false;
  }
  return !path.empty();
}

inline cdi::Graph mutual_pair() { return cdi::Graph(2, {{0, 1, 1.0}, {1, 0, 1.0}}); }

inline cdi::Graph chain3() { return cdi::Graph(3, {{0, 1, 1.0}, {1, 2, 1.0}}); }

inline cdi::Graph cycle3() { return cdi::Graph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}}); }

/// Leaves 1..3 point at hub 0.
inline cdi::Graph inward_star() { return cdi::Graph(4, {{1, 0, 1.0}, {2, 0, 1.0}, {3, 0, 1.0}}); }

inline cdi::Graph two_mutual_pairs() {
  return cdi::Graph(4, {{0, 1, 1.0}, {1, 0, 1.0}, {2, 3, 1.0}, {3, 2, 1.0}});
}

}  // namespace oracle
