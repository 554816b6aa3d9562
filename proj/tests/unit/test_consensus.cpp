#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "cdi/consensus.hpp"
#include "cdi/error.hpp"
#include "cdi/generators.hpp"
#include "cdi/rng.hpp"
#include "oracles.hpp"

using namespace cdi;

namespace {

std::vector<double> random_allocation(int n, Rng& rng, double density) {
  std::vector<double> c(n, 0.0);
  double total = 0;
  for (double& x : c)
    if (rng.uniform() < density) total += (x = rng.uniform());
  if (total == 0) total = c[0] = 1.0;
  for (double& x : c) x /= total;
  return c;
}

// Least-squares slope of log max|x - u| over samples with error in (lo, hi).
double decay_slope(const ConsensusTrajectory& t, double lo, double hi) {
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < t.times.size(); ++k) {
    double err = 0;
    for (double x : t.states[k]) err = std::max(err, std::abs(x - t.target));
    if (err < hi && err > lo) {
      xs.push_back(t.times[k]);
      ys.push_back(std::log(err));
    }
  }
  REQUIRE(xs.size() >= 5);
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

TEST_SUITE("consensus") {

TEST_CASE("perturbation vector invariants") {
  CHECK_NOTHROW(PerturbationVector({0.25, 0.75}));
  CHECK_THROWS_AS(PerturbationVector({0.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(PerturbationVector({-0.1, 1.1}), ValidationError);
  CHECK_THROWS_AS(PerturbationVector({0.5, 0.5 + 1e-8}), ValidationError);
  CHECK_NOTHROW(PerturbationVector({0.5, 0.5 + 1e-10}));
  const auto p = PerturbationVector::normalised({1.0, 3.0});
  CHECK(p[0] == 0.25);
  CHECK(p[1] == 0.75);
  CHECK_THROWS_AS(PerturbationVector::normalised({0.0, 0.0}), ValidationError);
}

TEST_CASE("rate examples") {
  CHECK(convergence_rate(laplacian(Graph(1, {})).matrix, PerturbationVector({1.0})) == doctest::Approx(1.0));
  CHECK(convergence_rate(laplacian(Graph(2, {})).matrix, PerturbationVector({1.0, 0.0})) == 0.0);
  CHECK(convergence_rate(laplacian(oracle::mutual_pair()).matrix, PerturbationVector({0.5, 0.5})) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("reachability follows influence direction") {
  const Graph chain = oracle::chain3();
  CHECK(reachable_from_support(chain, std::vector<double>{0, 0, 1}));
  CHECK_FALSE(reachable_from_support(chain, std::vector<double>{1, 0, 0}));
  const Graph g = generate_knnr(60, 8, 2, unit_box, 4);
  if (strongly_connected(g)) {
    std::vector<double> c(60, 0.0);
    c[17] = 1.0;
    CHECK(reachable_from_support(g, c));
  }
}

TEST_CASE("reachability agrees with simulation on the chain") {
  const Graph chain = oracle::chain3();
  const std::vector<double> x0{0, 0, 0};
  const auto from_sink = simulate(chain, PerturbationVector({0, 0, 1}), 1.0, x0, 1.0, 60.0);
  for (double x : from_sink.states.back()) CHECK(x == doctest::Approx(1.0).epsilon(1e-6));
  const auto from_head = simulate(chain, PerturbationVector({1, 0, 0}), 1.0, x0, 1.0, 60.0);
  CHECK(from_head.states.back()[2] == 0.0);
}

TEST_CASE("evaluator matches the dense oracle") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    Rng rng(seed);
    const Graph graphs[] = {generate_knnr(60, 5, 2, unit_box, seed), generate_er_outdegree(60, 1, 3, seed),
                            generate_knnr_variable(400, 3, 10, 2, unit_box, seed)};
    for (const auto& g : graphs) {
      RateEvaluator rate(laplacian(g).matrix);
      for (int t = 0; t < 5; ++t) {
        const auto c = random_allocation(g.size(), rng, t == 0 ? 1.0 : 0.1);
        const double want = g.size() <= 60 ? oracle::rate(g, c)
                                           : convergence_rate_dense(laplacian(g).matrix, c);
        CHECK(std::abs(rate(c) - want) <= 1e-9 * std::max(1.0, want));
      }
    }
  }
}

TEST_CASE("evaluator on reducible graphs and sparse support") {
  // two closed strongly connected classes feeding a tail
  const Graph g(6, {{0, 1, 1.0}, {1, 0, 2.0}, {2, 3, 1.0}, {3, 2, 1.0}, {4, 0, 1.0}, {4, 2, 0.5}, {5, 4, 3.0}});
  RateEvaluator rate(laplacian(g).matrix);
  const std::vector<std::vector<double>> cases{
      {0.5, 0, 0.5, 0, 0, 0}, {0.3, 0.2, 0.1, 0.1, 0.2, 0.1}, {1.0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0.5, 0.5}};
  for (const auto& c : cases) CHECK(rate(c) == doctest::Approx(oracle::rate(g, c)).epsilon(1e-10));
  CHECK(rate(cases[2]) == 0.0);
  CHECK(rate(cases[3]) == 0.0);
}

TEST_CASE("rate is invariant under relabelling") {
  const Graph g = generate_er_outdegree(40, 2, 5, 3);
  Rng rng(8);
  std::vector<Vertex> perm(40);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = 39; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
  const auto c = random_allocation(40, rng, 0.3);
  std::vector<double> pc(40);
  for (int v = 0; v < 40; ++v) pc[perm[v]] = c[v];
  RateEvaluator a(laplacian(g).matrix), b(laplacian(g.permuted(perm)).matrix);
  CHECK(a(c) == doctest::Approx(b(pc)).epsilon(1e-11));
}

TEST_CASE("scaling the allocation down never speeds consensus") {
  const Graph g = generate_knnr(50, 5, 2, unit_box, 6);
  RateEvaluator rate(laplacian(g).matrix);
  Rng rng(2);
  for (int t = 0; t < 5; ++t) {
    const auto c = random_allocation(50, rng, 0.2);
    double prev = rate(c);
    for (double alpha : {0.8, 0.5, 0.2, 0.05}) {
      std::vector<double> scaled = c;
      for (double& x : scaled) x *= alpha;
      const double now = rate(scaled);
      CHECK(now <= prev * (1 + 1e-12));
      prev = now;
    }
  }
}

TEST_CASE("scalar closed form") {
  const std::vector<double> x0{0.0};
  const auto t = simulate(Graph(1, {}), PerturbationVector({1.0}), 5.0, x0, 0.5, 1.0);
  CHECK(t.times.back() == doctest::Approx(1.0));
  CHECK(t.states.back()[0] == doctest::Approx(5.0 * (1.0 - std::exp(-1.0))).epsilon(1e-8));
  CHECK(t.states.back()[0] == doctest::Approx(3.1606).epsilon(1e-4));
  CHECK(t.target == 5.0);
  for (std::size_t k = 1; k < t.times.size(); ++k) CHECK(t.times[k] > t.times[k - 1]);
}

TEST_CASE("mutual pair stays symmetric and decays at rate one half") {
  const std::vector<double> x0{0.0, 0.0};
  const auto t = simulate(oracle::mutual_pair(), PerturbationVector({0.5, 0.5}), 1.0, x0, 0.5, 20.0);
  for (std::size_t k = 0; k < t.times.size(); ++k) {
    CHECK(t.states[k][0] == doctest::Approx(t.states[k][1]).epsilon(1e-12));
    CHECK(t.states[k][0] == doctest::Approx(1.0 - std::exp(-0.5 * t.times[k])).epsilon(1e-8));
  }
}

TEST_CASE("log-error slope matches the rate") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const Graph g = generate_knnr(30, 4, 2, unit_box, seed);
    Rng rng(seed);
    const auto c = PerturbationVector(random_allocation(30, rng, 0.3));
    const double lambda = convergence_rate(laplacian(g).matrix, c);
    if (lambda == 0) continue;
    std::vector<double> x0(30);
    for (double& x : x0) x = rng.uniform();
    const double horizon = std::log(1e9) / lambda;
    const auto t = simulate(g, c, 2.0, x0, horizon / 400, horizon);
    CHECK(decay_slope(t, 1e-8, 1e-7) == doctest::Approx(-lambda).epsilon(0.1));
  }
}

TEST_CASE("simulation guards") {
  const std::vector<double> x0{0.0, 0.0};
  const auto c = PerturbationVector({0.5, 0.5});
  CHECK_THROWS_AS(simulate(oracle::mutual_pair(), c, 1.0, x0, 0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(simulate(oracle::mutual_pair(), c, 1.0, x0, 2.0, 1.0), ValidationError);
  CHECK_THROWS_AS(simulate(oracle::mutual_pair(), c, 1.0, std::vector<double>{0.0}, 0.1, 1.0), ValidationError);
}

TEST_CASE("trajectory csv") {
  const std::vector<double> x0{0.0, 1.0};
  const auto t = simulate(oracle::mutual_pair(), PerturbationVector({0.5, 0.5}), 1.0, x0, 1.0, 2.0);
  std::ostringstream out;
  write_trajectory_csv(t, out);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,x0,x1");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == static_cast<int>(t.times.size()));
}

}
