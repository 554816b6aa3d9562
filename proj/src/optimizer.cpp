#include "cdi/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cdi/error.hpp"
#include "cdi/rng.hpp"

namespace cdi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_allocation(std::span<const double> c) {
  double sum = 0.0;
  for (double v : c) {
    if (!(v >= 0.0)) throw OptimizerError("allocation has a negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw OptimizerError("allocation lost its unit budget");
}

/// c = max(x, 0) / sum placed on `slots`; false if nothing is positive.
bool scatter(std::span<const double> x, const std::vector<Vertex>& slots, std::vector<double>& c) {
  double sum = 0.0;
  for (double v : x) sum += std::max(v, 0.0);
  std::fill(c.begin(), c.end(), 0.0);
  if (!(sum > 0.0)) return false;
  for (std::size_t i = 0; i < slots.size(); ++i) c[slots[i]] += std::max(x[i], 0.0) / sum;
  return true;
}

/// Rate at the allocation scattered from z. The rate only sees ratios of z,
/// so a quadratic pull of the clipped sum towards 1 stops the simplex from
/// drifting along the scale direction.
double share_objective(RateEvaluator& rate, std::span<const double> z,
                       const std::vector<Vertex>& slots, std::vector<double>& c, double pull) {
  if (!scatter(z, slots, c)) return 0.0;
  double sum = 0.0;
  for (double v : z) sum += std::max(v, 0.0);
  return rate(c) - pull * (sum - 1.0) * (sum - 1.0);
}

Vertex top_v1(const std::vector<Vertex>& members, const Eigen::VectorXd& v1) {
  Vertex best = members.front();
  for (Vertex v : members)
    if (v1[v] > v1[best]) best = v;
  return best;
}

MaximizeOptions bounded(std::size_t evaluations, std::vector<double> lower,
                        std::vector<double> upper, double step) {
  MaximizeOptions m;
  m.max_evaluations = evaluations;
  m.step.assign(lower.size(), step);
  m.lower = std::move(lower);
  m.upper = std::move(upper);
  return m;
}

}  // namespace

std::vector<double> power_transform(std::span<const double> omega, double eta) {
  double top = 0.0;
  for (double w : omega) {
    if (!(w >= 0.0)) throw ValidationError("power transform needs nonnegative weights");
    top = std::max(top, w);
  }
  if (!(top > 0.0)) throw ValidationError("power transform of an all-zero vector");
  std::vector<double> p(omega.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = omega[i] > 0.0 ? std::pow(omega[i] / top, eta) : 0.0;
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

std::vector<double> combine(const std::vector<std::vector<double>>& p, std::span<const double> r) {
  if (p.empty()) throw ValidationError("nothing to combine");
  if (p.size() != r.size()) throw ValidationError("one ratio per vector is required");
  std::vector<double> out(p.front().size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].size() != out.size()) throw ValidationError("vectors differ in length");
    if (!(r[i] > 0.0)) throw ValidationError("ratios must be positive");
    if (std::isinf(r[i])) continue;
    const double w = 1.0 / r[i];
    total += w;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += w * p[i][k];
  }
  if (!(total > 0.0)) throw ValidationError("every vector was dropped");
  for (double& v : out) v /= total;
  return out;
}

std::vector<Community> communities_from_labels(std::span<const int> labels,
                                               const Eigen::VectorXd& v1) {
  if (static_cast<Eigen::Index>(labels.size()) != v1.size())
    throw ValidationError("label count does not match vertex count");
  int k = 0;
  for (int l : labels) {
    if (l < 0) throw ValidationError("negative label");
    k = std::max(k, l + 1);
  }
  std::vector<Community> out(k);
  for (Vertex v = 0; v < static_cast<Vertex>(labels.size()); ++v)
    out[labels[v]].members.push_back(v);
  std::erase_if(out, [](const Community& c) { return c.members.empty(); });
  for (auto& c : out) c.leader = top_v1(c.members, v1);
  std::stable_sort(out.begin(), out.end(), [&](const Community& a, const Community& b) {
    return v1[a.leader] > v1[b.leader];
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<int>(i) + 1;
  return out;
}

LeaderAllocation leader_opt(RateEvaluator& rate, const std::vector<Community>& ranked,
                            const Eigen::VectorXd& v1, const OptimizerOptions& options) {
  if (ranked.empty()) throw OptimizerError("no communities to allocate over");
  const int n = rate.size();
  if (v1.size() != n) throw ValidationError("v1 length does not match the graph");
  const std::size_t start_evals = rate.evaluations();

  LeaderAllocation out;
  out.communities = ranked;
  for (const auto& c : ranked) out.leaders.push_back(top_v1(c.members, v1));
  std::vector<double> x(ranked.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = 1.0 / static_cast<double>(i + 1);
  const double s0 = std::accumulate(x.begin(), x.end(), 0.0);
  for (double& v : x) v /= s0;

  std::vector<double> c(n);
  const std::size_t max_rounds = ranked.size();
  for (std::size_t round = 0; round < max_rounds; ++round) {
    ++out.rounds;
    scatter(x, out.leaders, c);
    const double pull = std::max(rate(c), 1e-12);
    auto objective = [&](std::span<const double> z) {
      return share_objective(rate, z, out.leaders, c, pull);
    };
    MaximizeOptions m;
    m.max_evaluations = options.evaluations_per_phase;
    auto res = numeric_maximize(objective, x, m);
    out.budget_exhausted |= !res.converged;
    x = res.x;

    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] > 0.0) keep.push_back(i);
    if (keep.size() == x.size()) break;
    if (keep.empty()) {
      // every share collapsed; fall back to the top-ranked leader alone
      keep.push_back(0);
      x[0] = 1.0;
    }
    std::vector<Community> cs;
    std::vector<Vertex> ls;
    std::vector<double> xs;
    for (std::size_t i : keep) {
      cs.push_back(out.communities[i]);
      ls.push_back(out.leaders[i]);
      xs.push_back(x[i]);
    }
    out.communities = std::move(cs);
    out.leaders = std::move(ls);
    x = std::move(xs);
  }

  if (!scatter(x, out.leaders, c)) throw OptimizerError("leader allocation vanished");
  out.lambda1 = rate(c);
  out.c = c;
  out.evaluations = rate.evaluations() - start_evals;
  if (options.check_invariants) check_allocation(out.c);
  return out;
}

namespace {

/// State of the community-spreading search: one weight vector per active
/// community with exponent eta_i and ratio r_i.
class Spreader {
 public:
  Spreader(RateEvaluator& rate, const OptimizerOptions& opt) : rate_(rate), opt_(opt) {}

  std::vector<std::vector<double>> omega;
  std::vector<int> ranks;
  std::vector<double> eta;
  std::vector<double> r;
  bool exhausted = false;

  std::vector<double> allocation() const {
    std::vector<std::vector<double>> p;
    p.reserve(omega.size());
    for (std::size_t i = 0; i < omega.size(); ++i) p.push_back(power_transform(omega[i], eta[i]));
    return combine(p, r);
  }

  double value() { return rate_(allocation()); }

  /// Maximise over the chosen log-parameters; `pick` maps the search vector
  /// onto (eta, r) and is applied to the state before returning.
  template <class Apply>
  double optimise(std::vector<double> x0, std::vector<double> lo, std::vector<double> hi,
                  Apply apply) {
    const auto saved_eta = eta;
    const auto saved_r = r;
    auto objective = [&](std::span<const double> z) {
      apply(z);
      const double v = value();
      eta = saved_eta;
      r = saved_r;
      return v;
    };
    auto res = numeric_maximize(objective, std::move(x0),
                                bounded(opt_.evaluations_per_phase, std::move(lo), std::move(hi), 0.5));
    exhausted |= !res.converged;
    apply(res.x);
    return res.value;
  }

  double optimise_eta_shared() {
    return optimise({std::log(eta.back())}, {opt_.log_eta_min}, {opt_.log_eta_max},
                    [&](std::span<const double> z) {
                      std::fill(eta.begin(), eta.end(), std::exp(z[0]));
                    });
  }

  double optimise_last_r() {
    return optimise({std::log(r.back())}, {opt_.log_r_min}, {opt_.log_r_max},
                    [&](std::span<const double> z) { r.back() = std::exp(z[0]); });
  }

  double optimise_joint() {
    const std::size_t q = eta.size();
    std::vector<double> x0, lo, hi;
    for (std::size_t i = 0; i < q; ++i) {
      x0.push_back(std::log(r[i]));
      lo.push_back(opt_.log_r_min);
      hi.push_back(opt_.log_r_max);
    }
    for (std::size_t i = 0; i < q; ++i) {
      x0.push_back(std::log(eta[i]));
      lo.push_back(opt_.log_eta_min);
      hi.push_back(opt_.log_eta_max);
    }
    return optimise(std::move(x0), std::move(lo), std::move(hi), [&, q](std::span<const double> z) {
      for (std::size_t i = 0; i < q; ++i) {
        r[i] = std::exp(z[i]);
        eta[i] = std::exp(z[q + i]);
      }
    });
  }

  void compact() {
    std::size_t w = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (std::isinf(r[i])) continue;
      if (w != i) omega[w] = std::move(omega[i]);
      ranks[w] = ranks[i];
      eta[w] = eta[i];
      r[w] = r[i];
      ++w;
    }
    omega.resize(w);
    ranks.resize(w);
    eta.resize(w);
    r.resize(w);
  }

 private:
  RateEvaluator& rate_;
  const OptimizerOptions& opt_;
};

}  // namespace

OptimizationResult cdi_perturbation_opt(RateEvaluator& rate, const LeaderAllocation& leaders,
                                 const Eigen::VectorXd& v1, const OptimizerOptions& options) {
  const int n = rate.size();
  if (v1.size() != n) throw ValidationError("v1 length does not match the graph");
  const std::size_t start_evals = rate.evaluations();

  // community weights: v1 restricted to members; communities on which v1
  // vanishes cannot be spread over and are skipped
  std::vector<std::vector<double>> weights;
  std::vector<int> ranks;
  for (const auto& com : leaders.communities) {
    std::vector<double> w(n, 0.0);
    bool any = false;
    for (Vertex v : com.members) {
      w[v] = std::max(v1[v], 0.0);
      any |= w[v] > 0.0;
    }
    if (!any) continue;
    weights.push_back(std::move(w));
    ranks.push_back(com.rank);
  }
  if (weights.empty()) throw OptimizerError("v1 vanishes on every community");

  OptimizationResult out;
  Spreader sp(rate, options);
  auto accept = [&](double v) {
    if (options.check_invariants && !out.trace.empty() &&
        v * options.acceptance < out.trace.back() * (1.0 - 1e-12))
      throw OptimizerError("accepted step lost more than the acceptance margin");
    out.trace.push_back(v);
    return v;
  };

  sp.omega.push_back(weights[0]);
  sp.ranks.push_back(ranks[0]);
  sp.eta.push_back(1.0);
  sp.r.push_back(1.0);
  double best = accept(sp.optimise_eta_shared());

  for (std::size_t j = 1; j < weights.size(); ++j) {
    sp.omega.push_back(weights[j]);
    sp.ranks.push_back(ranks[j]);
    sp.eta.push_back(sp.eta.back());
    sp.r.push_back(sp.r.back());
    const double with = sp.optimise_last_r();
    if (with * options.acceptance < best) {
      sp.omega.pop_back();
      sp.ranks.pop_back();
      sp.eta.pop_back();
      sp.r.pop_back();
      continue;
    }
    best = accept(sp.optimise_eta_shared());
  }

  best = accept(sp.optimise_joint());

  for (std::size_t i = 0; i < sp.r.size(); ++i) {
    const std::size_t finite = std::count_if(sp.r.begin(), sp.r.end(),
                                             [](double x) { return std::isfinite(x); });
    if (finite <= 1) break;
    const double saved = sp.r[i];
    sp.r[i] = kInf;
    const double without = sp.value();
    if (without * options.acceptance < best) {
      sp.r[i] = saved;
    } else {
      best = accept(without);
    }
  }
  sp.compact();
  best = accept(sp.optimise_joint());

  out.c = sp.allocation();
  out.lambda1 = rate(out.c);
  out.active_ranks = sp.ranks;
  out.eta = sp.eta;
  out.r = sp.r;
  out.evaluations = rate.evaluations() - start_evals;
  out.budget_exhausted = sp.exhausted;

  if (options.check_invariants) {
    check_allocation(out.c);
    std::vector<char> allowed(n, 0);
    for (const auto& w : sp.omega)
      for (int v = 0; v < n; ++v) allowed[v] |= w[v] > 0.0;
    for (int v = 0; v < n; ++v)
      if (out.c[v] > 0.0 && !allowed[v])
        throw OptimizerError("input placed outside the retained communities");
  }
  return out;
}

OptimizationResult optimise_communities(RateEvaluator& rate, const std::vector<Community>& ranked,
                                        const Eigen::VectorXd& v1,
                                        const OptimizerOptions& options) {
  const std::size_t start_evals = rate.evaluations();
  const auto leaders = leader_opt(rate, ranked, v1, options);
  auto out = cdi_perturbation_opt(rate, leaders, v1, options);
  out.budget_exhausted |= leaders.budget_exhausted;
  out.evaluations = rate.evaluations() - start_evals;
  return out;
}

OptimizationResult direct_baseline_opt(RateEvaluator& rate, const DirectOptions& options) {
  const int n = rate.size();
  if (options.starts < 1) throw OptimizerError("at least one start is required");
  const std::size_t start_evals = rate.evaluations();
  std::vector<Vertex> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::vector<double> c(n, 1.0 / n);
  const double pull = std::max(rate(c), 1e-12);
  auto objective = [&](std::span<const double> z) {
    return share_objective(rate, z, all, c, pull);
  };

  OptimizationResult out;
  std::vector<double> best_x;
  Rng rng(options.seed);
  for (int s = 0; s < options.starts; ++s) {
    std::vector<double> x0(n, 1.0 / n);
    if (s > 0) {
      double sum = 0.0;
      for (double& v : x0) sum += (v = rng.uniform());
      for (double& v : x0) v /= sum;
    }
    MaximizeOptions m;
    m.max_evaluations = options.evaluations_per_start;
    m.step.assign(n, options.relative_step / n);
    auto res = numeric_maximize(objective, std::move(x0), m);
    out.budget_exhausted |= !res.converged;
    if (best_x.empty() || res.value > out.lambda1) {
      out.lambda1 = res.value;
      best_x = std::move(res.x);
    }
  }
  scatter(best_x, all, c);
  out.c = c;
  out.lambda1 = rate(out.c);
  out.evaluations = rate.evaluations() - start_evals;
  return out;
}

}  // namespace cdi
