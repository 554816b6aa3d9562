#include "cdi/baselines.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "cdi/error.hpp"
#include "cdi/rng.hpp"

namespace cdi {

std::vector<int> PartitionResult::labels(int n) const {
  std::vector<int> out(n, -1);
  for (std::size_t c = 0; c < communities.size(); ++c)
    for (Vertex v : communities[c]) out[v] = static_cast<int>(c);
  return out;
}

namespace {

Eigen::MatrixXd symmetrised(const Graph& g) {
  const int n = g.size();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Vertex i = 0; i < n; ++i) {
    auto nb = g.out_neighbours(i);
    auto wt = g.out_weights(i);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      w(i, nb[k]) += 0.5 * wt[k];
      w(nb[k], i) += 0.5 * wt[k];
    }
  }
  return w;
}

struct Clustering {
  std::vector<int> labels;
  double inertia = std::numeric_limits<double>::infinity();
};

Clustering lloyd(const Eigen::MatrixXd& x, int k, Rng& rng, int max_iterations) {
  const int n = static_cast<int>(x.rows());
  Eigen::MatrixXd centres(k, x.cols());
  // k-means++ seeding
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  int first = static_cast<int>(rng.below(n));
  centres.row(0) = x.row(first);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], (x.row(i) - centres.row(c - 1)).squaredNorm());
      total += d2[i];
    }
    int pick = n - 1;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      for (int i = 0; i < n; ++i) {
        target -= d2[i];
        if (target < 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<int>(rng.below(n));
    }
    centres.row(c) = x.row(pick);
  }

  Clustering out;
  out.labels.assign(n, -1);
  for (int it = 0; it < max_iterations; ++it) {
    bool changed = false;
    double inertia = 0.0;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = (x.row(i) - centres.row(c)).squaredNorm();
        if (d < bd) {
          bd = d;
          best = c;
        }
      }
      inertia += bd;
      if (out.labels[i] != best) {
        out.labels[i] = best;
        changed = true;
      }
    }
    out.inertia = inertia;
    if (!changed) break;
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, x.cols());
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      sums.row(out.labels[i]) += x.row(i);
      ++counts[out.labels[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centres.row(c) = sums.row(c) / counts[c];
        continue;
      }
      // empty cluster: move it to the point farthest from its centre
      int far = 0;
      double fd = -1.0;
      for (int i = 0; i < n; ++i) {
        const double d = (x.row(i) - centres.row(out.labels[i])).squaredNorm();
        if (d > fd) {
          fd = d;
          far = i;
        }
      }
      centres.row(c) = x.row(far);
    }
  }
  return out;
}

std::vector<std::vector<Vertex>> groups_from_labels(const std::vector<int>& labels, int k) {
  std::vector<std::vector<Vertex>> out(k);
  for (Vertex v = 0; v < static_cast<Vertex>(labels.size()); ++v) out[labels[v]].push_back(v);
  std::erase_if(out, [](const auto& c) { return c.empty(); });
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

/// Weakly connected components of a symmetric weight matrix.
std::vector<std::vector<Vertex>> components(const Eigen::MatrixXd& w) {
  const int n = static_cast<int>(w.rows());
  std::vector<int> seen(n, -1);
  std::vector<std::vector<Vertex>> out;
  for (int s = 0; s < n; ++s) {
    if (seen[s] >= 0) continue;
    std::vector<Vertex> comp{s};
    seen[s] = static_cast<int>(out.size());
    for (std::size_t q = 0; q < comp.size(); ++q)
      for (int j = 0; j < n; ++j)
        if (w(comp[q], j) != 0.0 && seen[j] < 0) {
          seen[j] = seen[s];
          comp.push_back(j);
        }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

struct Split {
  std::vector<Vertex> first, second;
  bool ok = false;
};

Split split_part(const Eigen::MatrixXd& w_full, const std::vector<Vertex>& part, bool last,
                 const BisectionOptions& opt) {
  const int m = static_cast<int>(part.size());
  Split out;
  if (m < 2) return out;
  Eigen::MatrixXd w(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) w(a, b) = w_full(part[a], part[b]);

  const auto comps = components(w);
  if (comps.size() > 1) {
    // largest component (lowest first vertex on ties) against the rest
    std::size_t big = 0;
    for (std::size_t c = 1; c < comps.size(); ++c)
      if (comps[c].size() > comps[big].size()) big = c;
    std::vector<char> in(m, 0);
    for (Vertex v : comps[big]) in[v] = 1;
    for (int a = 0; a < m; ++a) (in[a] ? out.first : out.second).push_back(part[a]);
    out.ok = true;
    return out;
  }

  Eigen::MatrixXd mat = w;
  if (opt.kind == MatrixKind::laplacian) {
    mat = -w;
    for (int a = 0; a < m; ++a) mat(a, a) += w.row(a).sum();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat);
  if (es.info() != Eigen::Success) throw SpectralError("symmetric eigensolver failed", 0.0);
  // eigenvalues ascend; adjacency wants the largest first
  auto column = [&](int idx) -> Eigen::VectorXd {
    return opt.kind == MatrixKind::laplacian ? es.eigenvectors().col(idx)
                                             : es.eigenvectors().col(m - 1 - idx);
  };
  for (int idx = 1; idx < m; ++idx) {
    Eigen::VectorXd v = column(idx);
    Split trial;
    double peak_first = 0.0, peak_second = 0.0;
    for (int a = 0; a < m; ++a) {
      if (v[a] >= 0.0) {
        trial.first.push_back(part[a]);
        peak_first = std::max(peak_first, std::abs(v[a]));
      } else {
        trial.second.push_back(part[a]);
        peak_second = std::max(peak_second, std::abs(v[a]));
      }
    }
    if (trial.first.empty() || trial.second.empty()) continue;
    if (last && !(peak_first > opt.threshold && peak_second > opt.threshold)) continue;
    trial.ok = true;
    return trial;
  }
  return out;
}

}  // namespace

PartitionResult spectral_kmeans(const Graph& g, int k, const KMeansOptions& options) {
  const int n = g.size();
  if (k < 1 || k > n) throw ValidationError("cluster count must lie in [1, n]");
  if (options.restarts < 1 || options.restarts > 100)
    throw ValidationError("k-means restarts must lie in [1, 100]");
  PartitionResult out;
  out.method = "kmeans";
  if (k == 1) {
    out.communities.emplace_back(n);
    std::iota(out.communities[0].begin(), out.communities[0].end(), 0);
    return out;
  }
  const Eigen::MatrixXd w = symmetrised(g);
  Eigen::VectorXd dinv = w.rowwise().sum();
  for (int i = 0; i < n; ++i) dinv[i] = dinv[i] > 0.0 ? 1.0 / std::sqrt(dinv[i]) : 0.0;
  const Eigen::MatrixXd m = dinv.asDiagonal() * w * dinv.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw SpectralError("symmetric eigensolver failed", 0.0);
  Eigen::MatrixXd x = es.eigenvectors().rightCols(k);
  for (int i = 0; i < n; ++i) {
    const double norm = x.row(i).norm();
    if (norm > 0.0) x.row(i) /= norm;
  }
  Rng rng(options.seed);
  Clustering best;
  for (int r = 0; r < options.restarts; ++r) {
    auto c = lloyd(x, k, rng, options.max_iterations);
    if (c.inertia < best.inertia) best = std::move(c);
  }
  out.communities = groups_from_labels(best.labels, k);
  return out;
}

PartitionResult spectral_bisection(const Graph& g, const BisectionOptions& options) {
  const int n = g.size();
  if (options.target < 1 || !std::has_single_bit(static_cast<unsigned>(options.target)))
    throw ValidationError("bisection target must be a power of two");
  if (n < options.target) throw ValidationError("fewer vertices than target communities");
  const Eigen::MatrixXd w = symmetrised(g);
  const int levels = std::countr_zero(static_cast<unsigned>(options.target));

  PartitionResult out;
  out.method = "bisection";
  std::vector<std::vector<Vertex>> parts(1, std::vector<Vertex>(n));
  std::iota(parts[0].begin(), parts[0].end(), 0);
  for (int level = 0; level < levels; ++level) {
    const bool last = level + 1 == levels;
    std::vector<std::vector<Vertex>> next;
    for (const auto& part : parts) {
      auto s = split_part(w, part, last, options);
      if (!s.ok) {
        out.flagged = true;
        out.note = "a part of " + std::to_string(part.size()) + " vertices could not be split at level " +
                   std::to_string(level + 1);
        next.push_back(part);
        continue;
      }
      next.push_back(std::move(s.first));
      next.push_back(std::move(s.second));
    }
    parts = std::move(next);
  }
  out.communities = std::move(parts);
  return out;
}

double frobenius_distance(const Graph& a, const Graph& b) {
  if (a.size() != b.size()) throw ValidationError("graphs differ in vertex count");
  double sum = 0.0;
  for (Vertex i = 0; i < a.size(); ++i) {
    auto na = a.out_neighbours(i), nb = b.out_neighbours(i);
    auto wa = a.out_weights(i), wb = b.out_weights(i);
    std::size_t p = 0, q = 0;
    while (p < na.size() || q < nb.size()) {
      if (q == nb.size() || (p < na.size() && na[p] < nb[q])) {
        sum += wa[p] * wa[p];
        ++p;
      } else if (p == na.size() || nb[q] < na[p]) {
        sum += wb[q] * wb[q];
        ++q;
      } else {
        const double d = wa[p] - wb[q];
        sum += d * d;
        ++p;
        ++q;
      }
    }
  }
  return std::sqrt(sum);
}

long long edge_edit_distance(const Graph& a, const Graph& b) {
  if (a.size() != b.size()) throw ValidationError("graphs differ in vertex count");
  long long count = 0;
  for (Vertex i = 0; i < a.size(); ++i) {
    auto na = a.out_neighbours(i), nb = b.out_neighbours(i);
    std::vector<Vertex> diff;
    std::set_symmetric_difference(na.begin(), na.end(), nb.begin(), nb.end(),
                                  std::back_inserter(diff));
    count += static_cast<long long>(diff.size());
  }
  return count;
}

double consensus_speed_ratio(double candidate, double reference) {
  if (!(reference > 0.0)) throw ValidationError("reference rate is zero");
  return candidate / reference;
}

double consensus_speed_ratio(const OptimizationResult& candidate,
                             const OptimizationResult& reference) {
  return consensus_speed_ratio(candidate.lambda1, reference.lambda1);
}

OptimizationResult kmeans_seeded_opt(const Graph& g, RateEvaluator& rate, int k,
                                     const Eigen::VectorXd& v1, const KMeansOptions& kmeans,
                                     const OptimizerOptions& options) {
  const auto part = spectral_kmeans(g, k, kmeans);
  const auto labels = part.labels(g.size());
  return optimise_communities(rate, communities_from_labels(labels, v1), v1, options);
}

}  // namespace cdi
