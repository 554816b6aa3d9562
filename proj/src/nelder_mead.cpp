#include "cdi/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cdi/error.hpp"

namespace cdi {

namespace {

struct BudgetSpent {};

class Search {
 public:
  Search(const Objective& f, const MaximizeOptions& opt, std::size_t dim)
      : f_(f), opt_(opt), dim_(dim) {}

  void project(std::vector<double>& x) const {
    if (!opt_.lower.empty())
      for (std::size_t i = 0; i < dim_; ++i) x[i] = std::max(x[i], opt_.lower[i]);
    if (!opt_.upper.empty())
      for (std::size_t i = 0; i < dim_; ++i) x[i] = std::min(x[i], opt_.upper[i]);
  }

  // minimise -f internally
  // throws BudgetSpent instead of exceeding the evaluation cap
  double cost(const std::vector<double>& x) {
    if (!budget_left()) throw BudgetSpent{};
    ++evaluations_;
    const double v = f_(x);
    if (!std::isfinite(v)) throw OptimizerError("objective returned a non-finite value");
    return -v;
  }

  bool budget_left() const { return evaluations_ < opt_.max_evaluations; }
  std::size_t evaluations() const { return evaluations_; }

  /// One Nelder-Mead run from `best`; returns true on tolerance convergence.
  bool run(std::vector<double>& best, double& best_cost) {
    std::vector<std::vector<double>> pts{best};
    std::vector<double> costs{best_cost};
    try {
      return iterate(pts, costs, best, best_cost);
    } catch (const BudgetSpent&) {
    }
    const auto top = std::min_element(costs.begin(), costs.end());
    if (*top < best_cost) {
      best = pts[top - costs.begin()];
      best_cost = *top;
    }
    return false;
  }

 private:
  bool iterate(std::vector<std::vector<double>>& pts, std::vector<double>& costs,
               std::vector<double>& best, double& best_cost) {
    for (std::size_t i = 0; i < dim_; ++i) {
      std::vector<double> p = best;
      double h = opt_.step.empty() ? (best[i] != 0.0 ? 0.05 * std::abs(best[i]) : 0.00025)
                                   : opt_.step[i];
      p[i] += h;
      project(p);
      if (p[i] == best[i]) {  // pinned against the upper bound
        p[i] = best[i] - h;
        project(p);
      }
      costs.push_back(cost(p));
      pts.push_back(std::move(p));
    }

    std::vector<std::size_t> order(dim_ + 1);
    std::vector<double> centroid(dim_), trial(dim_), trial2(dim_);
    auto along = [&](double t, std::vector<double>& out, const std::vector<double>& worst) {
      for (std::size_t i = 0; i < dim_; ++i) out[i] = centroid[i] + t * (worst[i] - centroid[i]);
      project(out);
    };

    while (true) {
      std::iota(order.begin(), order.end(), 0);
      // stable: among equal costs the earlier vertex (incumbent first) stays best
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return costs[a] < costs[b]; });
      std::vector<std::vector<double>> sp;
      std::vector<double> sc;
      for (std::size_t k : order) {
        sp.push_back(std::move(pts[k]));
        sc.push_back(costs[k]);
      }
      pts = std::move(sp);
      costs = std::move(sc);

      double spread_x = 0.0;
      for (std::size_t k = 1; k <= dim_; ++k)
        for (std::size_t i = 0; i < dim_; ++i)
          spread_x = std::max(spread_x, std::abs(pts[k][i] - pts[0][i]));
      const double spread_f = costs[dim_] - costs[0];
      if (spread_x <= opt_.x_tol ||
          spread_f <= opt_.f_tol * std::max(std::abs(costs[0]), 1e-300)) {
        best = pts[0];
        best_cost = costs[0];
        return true;
      }

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t k = 0; k < dim_; ++k)
        for (std::size_t i = 0; i < dim_; ++i) centroid[i] += pts[k][i] / static_cast<double>(dim_);
      const auto& worst = pts[dim_];

      along(-1.0, trial, worst);
      const double fr = cost(trial);
      if (fr < costs[0]) {
        along(-2.0, trial2, worst);
        const double fe = cost(trial2);
        if (fe < fr) {
          pts[dim_] = trial2;
          costs[dim_] = fe;
        } else {
          pts[dim_] = trial;
          costs[dim_] = fr;
        }
        continue;
      }
      if (fr < costs[dim_ - 1]) {
        pts[dim_] = trial;
        costs[dim_] = fr;
        continue;
      }
      const bool outside = fr < costs[dim_];
      along(outside ? -0.5 : 0.5, trial2, worst);
      const double fc = cost(trial2);
      if (fc < (outside ? fr : costs[dim_])) {
        pts[dim_] = trial2;
        costs[dim_] = fc;
        continue;
      }
      for (std::size_t k = 1; k <= dim_; ++k) {
        for (std::size_t i = 0; i < dim_; ++i) trial[i] = pts[0][i] + 0.5 * (pts[k][i] - pts[0][i]);
        project(trial);
        costs[k] = cost(trial);
        pts[k] = trial;
      }
    }
  }

  const Objective& f_;
  const MaximizeOptions& opt_;
  std::size_t dim_;
  std::size_t evaluations_ = 0;
};

}  // namespace

MaximizeResult numeric_maximize(const Objective& f, std::vector<double> x0,
                                const MaximizeOptions& options) {
  const std::size_t dim = x0.size();
  if (dim == 0) throw OptimizerError("nothing to optimise");
  if (options.max_evaluations == 0) throw OptimizerError("evaluation budget is zero");
  if ((!options.lower.empty() && options.lower.size() != dim) ||
      (!options.upper.empty() && options.upper.size() != dim) ||
      (!options.step.empty() && options.step.size() != dim))
    throw OptimizerError("bound/step length does not match the start point");

  Search search(f, options, dim);
  search.project(x0);
  MaximizeResult result;
  double best_cost = search.cost(x0);
  bool converged = search.run(x0, best_cost);
  for (int r = 0; r < options.restarts && converged && search.budget_left(); ++r) {
    const double before = best_cost;
    converged = search.run(x0, best_cost);
    if (!(best_cost < before - options.f_tol * std::max(std::abs(before), 1e-300))) break;
  }
  result.x = std::move(x0);
  result.value = -best_cost;
  result.evaluations = search.evaluations();
  result.converged = converged;
  return result;
}

}  // namespace cdi
