#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cdi/spectra.hpp"

namespace cdi {

struct PowerLawFit {
  double a = 0.0;
  double b = 0.0;
  double r2 = 0.0;
};

/// Least squares of log y = log a + b log x. Needs at least 3 points, all
/// positive. R^2 is 1 when log y is constant and fitted exactly.
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

/// "5,7,15", "100..1000" (step 100) or "100..1000:50"; ranges and items
/// can be mixed, separated by commas.
std::vector<int> parse_int_list(const std::string& text);

enum class Family { knnr, knnr_variable, er };

Family parse_family(const std::string& name);
std::string family_name(Family f);

struct CompareConfig {
  Family family = Family::knnr;
  std::vector<int> sizes{100, 200, 300, 400, 500, 600, 700, 800, 900, 1000};
  int k = 10;
  int k_min = 3;
  int k_max = 10;
  int dims = 2;
  int per_size = 10;
  std::vector<std::string> methods{"cdi", "kmeans", "direct"};
  int vectors = 3;
  int direct_starts = 3;
  std::size_t direct_evaluations = 20000;
  std::uint64_t seed = 1;
};

struct CompareRow {
  int n = 0;
  std::string k;
  int replicate = 0;
  std::string method;
  double lambda1 = 0.0;
  /// against the direct optimiser on the same graph
  double ratio = 0.0;
  int communities = 0;
  std::size_t evaluations = 0;
};

/// Every (size, replicate) graph is built from its own derived seed and
/// scored by each method; the direct optimiser always runs as the
/// reference. Items run in parallel; rows keep config order.
std::vector<CompareRow> run_compare(const CompareConfig& config);

void write_compare_csv(const std::vector<CompareRow>& rows, std::ostream& out);

struct FlockConfig {
  int n = 1200;
  double thickness = 0.2;
  std::vector<int> ks{5, 7, 15, 25, 50};
  int vectors = 3;
  std::uint64_t seed = 1;
  SolverChoice solver = SolverChoice::automatic;
};

struct FlockRow {
  int k = 0;
  double lambda1 = 0.0;
  int communities = 0;
  std::size_t evaluations = 0;
  bool budget_exhausted = false;
};

/// One point set, a CDI-seeded optimisation per k.
std::vector<FlockRow> run_flock(const FlockConfig& config);

}  // namespace cdi
