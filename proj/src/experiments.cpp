#include "cdi/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include <omp.h>

#include "cdi/baselines.hpp"
#include "cdi/communities.hpp"
#include "cdi/error.hpp"
#include "cdi/generators.hpp"
#include "cdi/graph_io.hpp"
#include "cdi/optimizer.hpp"
#include "cdi/rng.hpp"

namespace cdi {

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ValidationError("x and y differ in length");
  if (x.size() < 3) throw ValidationError("a power-law fit needs at least 3 points");
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ValidationError("power-law fit needs positive values");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double den = m * sxx - sx * sx;
  if (!(den > 0.0)) throw ValidationError("power-law fit needs at least two distinct x values");
  PowerLawFit fit;
  fit.b = (m * sxy - sx * sy) / den;
  const double log_a = (sy - fit.b * sx) / m;
  fit.a = std::exp(log_a);
  const double mean = sy / m;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = ly[i] - (log_a + fit.b * lx[i]);
    ss_res += r * r;
    ss_tot += (ly[i] - mean) * (ly[i] - mean);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

namespace {

int to_int(std::string_view s) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ValidationError("not an integer: '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::string_view rest(text);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto dots = item.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(to_int(item));
      continue;
    }
    const int lo = to_int(item.substr(0, dots));
    auto tail = item.substr(dots + 2);
    int step = 100;
    if (const auto colon = tail.find(':'); colon != std::string_view::npos) {
      step = to_int(tail.substr(colon + 1));
      tail = tail.substr(0, colon);
    }
    const int hi = to_int(tail);
    if (step <= 0 || hi < lo) throw ValidationError("bad range '" + std::string(item) + "'");
    for (int v = lo; v <= hi; v += step) out.push_back(v);
  }
  if (out.empty()) throw ValidationError("empty list");
  return out;
}

Family parse_family(const std::string& name) {
  if (name == "knnr") return Family::knnr;
  if (name == "knnr-var") return Family::knnr_variable;
  if (name == "er") return Family::er;
  throw ValidationError("unknown graph family '" + name + "' (knnr, knnr-var, er)");
}

std::string family_name(Family f) {
  switch (f) {
    case Family::knnr: return "knnr";
    case Family::knnr_variable: return "knnr-var";
    case Family::er: return "er";
  }
  return "?";
}

std::vector<CompareRow> run_compare(const CompareConfig& cfg) {
  for (const auto& m : cfg.methods)
    if (m != "cdi" && m != "kmeans" && m != "direct")
      throw ValidationError("unknown method '" + m + "' (cdi, kmeans, direct)");
  struct Item {
    int n, replicate;
  };
  std::vector<Item> items;
  for (int n : cfg.sizes)
    for (int r = 0; r < cfg.per_size; ++r) items.push_back({n, r});
  std::vector<std::vector<CompareRow>> results(items.size());
  const std::string k_label = cfg.family == Family::knnr
                                  ? std::to_string(cfg.k)
                                  : std::to_string(cfg.k_min) + "-" + std::to_string(cfg.k_max);

  std::string failure;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < items.size(); ++i) {
    try {
      const auto [n, rep] = items[i];
      const std::uint64_t seed = mix_seed(cfg.seed, i);
      Graph g = cfg.family == Family::knnr
                    ? generate_knnr(n, cfg.k, cfg.dims, unit_box, seed)
                : cfg.family == Family::knnr_variable
                    ? generate_knnr_variable(n, cfg.k_min, cfg.k_max, cfg.dims, unit_box, seed)
                    : generate_er_outdegree(n, cfg.k_min, cfg.k_max, seed);
      RateEvaluator rate(laplacian(g).matrix);
      const auto cdi = detect_communities(g, cfg.vectors, MatrixKind::laplacian);
      const Eigen::VectorXd v1 = cdi.coords.v1();
      DirectOptions dopt;
      dopt.starts = cfg.direct_starts;
      dopt.evaluations_per_start = cfg.direct_evaluations;
      dopt.seed = mix_seed(seed, 1);
      const auto direct = direct_baseline_opt(rate, dopt);
      const int m = static_cast<int>(cdi.communities.size());
      for (const auto& method : cfg.methods) {
        CompareRow row{n, k_label, rep, method, 0.0, 0.0, m, 0};
        OptimizationResult res;
        if (method == "cdi") {
          res = optimise_communities(rate, cdi.communities, v1);
        } else if (method == "kmeans") {
          KMeansOptions ko;
          ko.seed = mix_seed(seed, 2);
          res = kmeans_seeded_opt(g, rate, m, v1, ko);
        } else {
          res = direct;
        }
        row.lambda1 = res.lambda1;
        row.ratio = consensus_speed_ratio(res, direct);
        row.evaluations = res.evaluations;
        results[i].push_back(row);
      }
    } catch (const std::exception& e) {
#pragma omp critical
      if (failure.empty()) failure = e.what();
    }
  }
  if (!failure.empty()) throw Error(failure);
  std::vector<CompareRow> rows;
  for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

void write_compare_csv(const std::vector<CompareRow>& rows, std::ostream& out) {
  out << "n,k,method,lambda1,ratio,replicate,communities,evaluations\n";
  for (const auto& r : rows)
    out << r.n << ',' << r.k << ',' << r.method << ',' << format_real(r.lambda1) << ','
        << format_real(r.ratio) << ',' << r.replicate << ',' << r.communities << ','
        << r.evaluations << '\n';
}

std::vector<FlockRow> run_flock(const FlockConfig& cfg) {
  std::vector<FlockRow> rows(cfg.ks.size());
  SpectralOptions so;
  so.solver = cfg.solver;
  std::string failure;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < cfg.ks.size(); ++i) {
    try {
      // the same seed gives the same positions for every k
      const Graph g = generate_flock(cfg.n, cfg.ks[i], cfg.thickness, cfg.seed);
      const auto cdi = detect_communities(g, cfg.vectors, MatrixKind::laplacian, so);
      RateEvaluator rate(laplacian(g).matrix);
      const auto res = optimise_communities(rate, cdi.communities, cdi.coords.v1());
      rows[i] = {cfg.ks[i], res.lambda1, static_cast<int>(cdi.communities.size()), res.evaluations,
                 res.budget_exhausted};
    } catch (const std::exception& e) {
#pragma omp critical
      if (failure.empty()) failure = e.what();
    }
  }
  if (!failure.empty()) throw Error(failure);
  return rows;
}

}  // namespace cdi
