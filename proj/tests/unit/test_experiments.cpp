#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cdi/error.hpp"
#include "cdi/experiments.hpp"

using namespace cdi;

TEST_SUITE("experiments") {

TEST_CASE("exact power law") {
  std::vector<double> x{1, 2, 5, 10, 40}, y;
  for (double v : x) y.push_back(2.0 * std::pow(v, -0.5));
  const auto f = fit_power_law(x, y);
  CHECK(f.a == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.b == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("constant points give a flat law") {
  const auto f = fit_power_law({5, 7, 15}, {0.3, 0.3, 0.3});
  CHECK(std::abs(f.b) <= 1e-12);
  CHECK(f.a == doctest::Approx(0.3));
}

TEST_CASE("noisy fit matches a hand log-log regression") {
  const std::vector<double> x{5, 7, 15, 25, 50}, y{0.0023, 0.0020, 0.0019, 0.0017, 0.0015};
  double mx = 0, my = 0;
  for (int i = 0; i < 5; ++i) {
    mx += std::log(x[i]) / 5;
    my += std::log(y[i]) / 5;
  }
  double sxy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < 5; ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    syy += (std::log(y[i]) - my) * (std::log(y[i]) - my);
  }
  const auto f = fit_power_law(x, y);
  CHECK(f.b == doctest::Approx(sxy / sxx));
  CHECK(f.a == doctest::Approx(std::exp(my - sxy / sxx * mx)));
  CHECK(f.r2 == doctest::Approx(sxy * sxy / (sxx * syy)));
}

TEST_CASE("power law preconditions") {
  CHECK_THROWS_AS(fit_power_law({1, 2}, {1, 2}), ValidationError);
  CHECK_THROWS_AS(fit_power_law({1, 2, 3}, {1, 0, 2}), ValidationError);
  CHECK_THROWS_AS(fit_power_law({1, -2, 3}, {1, 1, 2}), ValidationError);
  CHECK_THROWS_AS(fit_power_law({1, 2, 3}, {1, 2}), ValidationError);
}

TEST_CASE("integer lists") {
  CHECK(parse_int_list("5,7,15") == std::vector<int>{5, 7, 15});
  CHECK(parse_int_list("100..500") == std::vector<int>{100, 200, 300, 400, 500});
  CHECK(parse_int_list("100..200:50") == std::vector<int>{100, 150, 200});
  CHECK(parse_int_list("3") == std::vector<int>{3});
  CHECK_THROWS(parse_int_list(""));
  CHECK_THROWS(parse_int_list("a,b"));
  CHECK_THROWS(parse_int_list("5..1"));
}

TEST_CASE("families") {
  CHECK(parse_family("knnr") == Family::knnr);
  CHECK(parse_family("knnr-var") == Family::knnr_variable);
  CHECK(parse_family("er") == Family::er);
  CHECK(family_name(Family::knnr_variable) == "knnr-var");
  CHECK_THROWS(parse_family("grid"));
}

TEST_CASE("compare sweep is deterministic and ordered by configuration") {
  CompareConfig c;
  c.sizes = {30, 40};
  c.per_size = 2;
  c.direct_evaluations = 1500;
  c.direct_starts = 1;
  const auto a = run_compare(c);
  const auto b = run_compare(c);
  REQUIRE(a.size() == 2 * 2 * 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].lambda1 == b[i].lambda1);
    CHECK(a[i].n == c.sizes[i / 6]);
    CHECK(a[i].replicate == static_cast<int>(i / 3) % 2);
  }
  for (const auto& r : a) {
    CHECK(r.lambda1 > 0);
    if (r.method == "direct") CHECK(r.ratio == 1.0);
  }
  std::ostringstream out;
  write_compare_csv(a, out);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "n,k,method,lambda1,ratio,replicate,communities,evaluations");
}

}
