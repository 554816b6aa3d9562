// Command-line front end: generate graphs, detect communities, optimise
// and simulate consensus, run comparison sweeps, match and bisect scans.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "cdi/baselines.hpp"
#include "cdi/communities.hpp"
#include "cdi/consensus.hpp"
#include "cdi/error.hpp"
#include "cdi/experiments.hpp"
#include "cdi/generators.hpp"
#include "cdi/graph_io.hpp"
#include "cdi/matching.hpp"
#include "cdi/optimizer.hpp"
#include "cdi/rng.hpp"
#include "cdi/synthetic.hpp"

namespace {

// saved configs carry unset paths as "", which must replay cleanly
const CLI::Validator kOptionalFile(
    [](std::string& path) { return path.empty() ? std::string{} : CLI::ExistingFile(path); },
    "FILE");

using nlohmann::json;

std::string g_config;  // effective configuration, filled after parsing

/// Output stream for a path, "-" meaning stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path == "-") return;
    file_.open(path);
    if (!file_) throw cdi::Error("cannot write '" + path + "'");
  }
  std::ostream& operator*() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void comment_header(std::ostream& out) {
  std::istringstream lines(g_config);
  for (std::string line; std::getline(lines, line);)
    if (!line.empty()) out << "# " << line << '\n';
}

json config_json() {
  json lines = json::array();
  std::istringstream in(g_config);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) lines.push_back(line);
  return lines;
}

cdi::MatrixKind parse_kind(const std::string& s) {
  if (s == "laplacian") return cdi::MatrixKind::laplacian;
  if (s == "adjacency") return cdi::MatrixKind::adjacency;
  throw cdi::ValidationError("matrix must be laplacian or adjacency");
}

cdi::SolverChoice parse_solver(const std::string& s) {
  if (s == "auto") return cdi::SolverChoice::automatic;
  if (s == "dense") return cdi::SolverChoice::dense;
  if (s == "iterative") return cdi::SolverChoice::iterative;
  throw cdi::ValidationError("solver must be auto, dense or iterative");
}

cdi::Graph load_with_positions(const std::string& edges, const std::string& positions) {
  cdi::Graph g = cdi::load_graph(edges);
  if (!positions.empty()) g = cdi::load_positions(g, positions);
  return g;
}

json result_json(const cdi::OptimizationResult& r) {
  json j;
  j["lambda1"] = r.lambda1;
  j["c"] = r.c;
  j["activeCommunities"] = r.active_ranks;
  j["evaluations"] = r.evaluations;
  j["budgetExhausted"] = r.budget_exhausted;
  return j;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string family = "knnr";
  int n = 100;
  int k = 10;
  int k_min = 3;
  int k_max = 10;
  int dims = 2;
  double thickness = 0.2;
  double weight = 1.0;
  std::uint64_t seed = 1;
  std::string out;
  std::string positions;
};

void run_generate(const GenerateArgs& a) {
  cdi::Graph g{0, {}};
  if (a.family == "knnr") g = cdi::generate_knnr(a.n, a.k, a.dims, cdi::unit_box, a.seed, a.weight);
  else if (a.family == "knnr-var")
    g = cdi::generate_knnr_variable(a.n, a.k_min, a.k_max, a.dims, cdi::unit_box, a.seed, a.weight);
  else if (a.family == "er") g = cdi::generate_er_outdegree(a.n, a.k_min, a.k_max, a.seed, a.weight);
  else if (a.family == "flock") g = cdi::generate_flock(a.n, a.k, a.thickness, a.seed, a.weight);
  else throw cdi::ValidationError("unknown family '" + a.family + "' (knnr, knnr-var, er, flock)");
  Output out(a.out);
  comment_header(*out);
  cdi::write_edge_list(g, *out);
  if (!a.positions.empty()) {
    if (!g.has_positions()) throw cdi::ValidationError("this family has no positions");
    Output pos(a.positions);
    comment_header(*pos);
    cdi::write_positions(g, *pos);
  }
}

// --------------------------------------------------------------------- cdi

struct CdiArgs {
  std::string in;
  std::string positions;
  int vectors = 3;
  std::string matrix = "laplacian";
  std::string solver = "auto";
  std::string out = "-";
};

void run_cdi(const CdiArgs& a) {
  const cdi::Graph g = load_with_positions(a.in, a.positions);
  cdi::SpectralOptions so;
  so.solver = parse_solver(a.solver);
  const auto result = cdi::detect_communities(g, a.vectors, parse_kind(a.matrix), so);
  std::ostringstream buf;
  cdi::write_cdi_json(result, buf);
  json doc = json::parse(buf.str());
  doc["config"] = config_json();
  Output out(a.out);
  *out << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------- optimize

struct OptimizeArgs {
  std::string in;
  int vectors = 3;
  std::string method = "cdi";
  int starts = 3;
  std::size_t direct_evaluations = 20000;
  std::size_t phase_evaluations = 5000;
  std::uint64_t seed = 1;
  int flock = 0;
  double thickness = 0.2;
  std::string ks = "5,7,15,25,50";
  std::string fit;
  std::string solver = "auto";
  std::string out = "-";
};

cdi::OptimizationResult optimise_graph(const cdi::Graph& g, const std::string& method, int vectors,
                                       const OptimizeArgs& a) {
  cdi::RateEvaluator rate(cdi::laplacian(g).matrix);
  cdi::OptimizerOptions oo;
  oo.evaluations_per_phase = a.phase_evaluations;
  if (method == "direct") {
    cdi::DirectOptions d;
    d.starts = a.starts;
    d.evaluations_per_start = a.direct_evaluations;
    d.seed = a.seed;
    return cdi::direct_baseline_opt(rate, d);
  }
  const auto found = cdi::detect_communities(g, vectors, cdi::MatrixKind::laplacian);
  const Eigen::VectorXd v1 = found.coords.v1();
  if (method == "cdi") return cdi::optimise_communities(rate, found.communities, v1, oo);
  if (method == "kmeans") {
    cdi::KMeansOptions ko;
    ko.seed = a.seed;
    return cdi::kmeans_seeded_opt(g, rate, static_cast<int>(found.communities.size()), v1, ko, oo);
  }
  throw cdi::ValidationError("method must be cdi, kmeans or direct");
}

void run_optimize(const OptimizeArgs& a) {
  Output out(a.out);
  if (a.flock > 0) {
    cdi::FlockConfig fc;
    fc.n = a.flock;
    fc.thickness = a.thickness;
    fc.ks = cdi::parse_int_list(a.ks);
    fc.vectors = a.vectors;
    fc.seed = a.seed;
    fc.solver = parse_solver(a.solver);
    const auto rows = cdi::run_flock(fc);
    comment_header(*out);
    *out << "k,lambda1,communities,evaluations,budget_exhausted\n";
    std::vector<double> x, y;
    for (const auto& r : rows) {
      *out << r.k << ',' << cdi::format_real(r.lambda1) << ',' << r.communities << ','
           << r.evaluations << ',' << (r.budget_exhausted ? 1 : 0) << '\n';
      x.push_back(r.k);
      y.push_back(r.lambda1);
    }
    if (a.fit == "powerlaw") {
      const auto f = cdi::fit_power_law(x, y);
      *out << "# fit: lambda1 = a * k^b\n# a = " << cdi::format_real(f.a)
           << "\n# b = " << cdi::format_real(f.b) << "\n# r2 = " << cdi::format_real(f.r2) << '\n';
    } else if (!a.fit.empty()) {
      throw cdi::ValidationError("only --fit powerlaw is supported");
    }
    return;
  }
  if (a.in.empty()) throw cdi::ValidationError("give --in GRAPH or --flock N");
  const cdi::Graph g = cdi::load_graph(a.in);
  if (const int closed = cdi::closed_classes(g); closed > 1)
    std::cerr << "warning: " << closed
              << " closed classes, so v1 is not unique and some may receive no input\n";
  json doc = result_json(optimise_graph(g, a.method, a.vectors, a));
  doc["config"] = config_json();
  *out << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string in;
  std::string perturbation;
  int vectors = 3;
  double u = 1.0;
  std::string x0 = "random";
  std::uint64_t seed = 1;
  double dt = 0.1;
  double t_end = 100.0;
  std::string out = "-";
};

void run_simulate(const SimulateArgs& a) {
  const cdi::Graph g = cdi::load_graph(a.in);
  std::vector<double> c;
  if (!a.perturbation.empty()) {
    std::ifstream in(a.perturbation);
    if (!in) throw cdi::Error("cannot read '" + a.perturbation + "'");
    c = json::parse(in).at("c").get<std::vector<double>>();
  } else {
    cdi::RateEvaluator rate(cdi::laplacian(g).matrix);
    const auto found = cdi::detect_communities(g, a.vectors, cdi::MatrixKind::laplacian);
    c = cdi::optimise_communities(rate, found.communities, found.coords.v1()).c;
  }
  const auto pv = cdi::PerturbationVector::normalised(c);
  std::vector<double> x0(g.size());
  if (a.x0 == "random") {
    cdi::Rng rng(a.seed);
    for (double& v : x0) v = rng.uniform();
  } else {
    std::fill(x0.begin(), x0.end(), std::stod(a.x0));
  }
  const auto traj = cdi::simulate(g, pv, a.u, x0, a.dt, a.t_end);
  Output out(a.out);
  comment_header(*out);
  *out << "# lambda1 = " << cdi::format_real(cdi::convergence_rate(cdi::laplacian(g).matrix, pv)) << '\n';
  cdi::write_trajectory_csv(traj, *out);
}

// ----------------------------------------------------------------- compare

struct CompareArgs {
  std::string family = "knnr";
  std::string sizes = "100..1000";
  int k = 10;
  int k_min = 3;
  int k_max = 10;
  int dims = 2;
  int per_size = 10;
  std::string methods = "cdi,kmeans,direct";
  int vectors = 3;
  int direct_starts = 3;
  std::size_t direct_evaluations = 20000;
  std::uint64_t seed = 1;
  std::string out = "-";
};

void run_compare_cmd(const CompareArgs& a) {
  cdi::CompareConfig cfg;
  cfg.family = cdi::parse_family(a.family);
  cfg.sizes = cdi::parse_int_list(a.sizes);
  cfg.k = a.k;
  cfg.k_min = a.k_min;
  cfg.k_max = a.k_max;
  cfg.dims = a.dims;
  cfg.per_size = a.per_size;
  cfg.methods.clear();
  std::stringstream ms(a.methods);
  for (std::string m; std::getline(ms, m, ',');) cfg.methods.push_back(m);
  cfg.vectors = a.vectors;
  cfg.direct_starts = a.direct_starts;
  cfg.direct_evaluations = a.direct_evaluations;
  cfg.seed = a.seed;
  const auto rows = cdi::run_compare(cfg);
  Output out(a.out);
  comment_header(*out);
  cdi::write_compare_csv(rows, *out);
}

// ------------------------------------------------------------------- match

struct MatchArgs {
  std::vector<std::string> scans;
  bool synthetic = false;
  int subjects = 10;
  std::uint64_t seed = 1;
  int vectors = 4;
  std::string matrix = "adjacency";
  double threshold = 0.01;
  std::string out = "-";
  std::string report;
  std::string edit_out;
  std::string write_scans;
};

void write_matrix_csv(std::ostream& out, const std::vector<std::string>& rows,
                      const std::vector<std::string>& cols,
                      const std::vector<std::vector<double>>& values) {
  comment_header(out);
  out << "scan";
  for (const auto& c : cols) out << ',' << c;
  out << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << rows[i];
    for (double v : values[i]) out << ',' << cdi::format_real(v);
    out << '\n';
  }
}

void run_match(const MatchArgs& a) {
  std::vector<cdi::Scan> first, second;
  cdi::VoxelGrid grid;
  if (a.synthetic) {
    cdi::SubjectPoolOptions po;
    po.subjects = a.subjects;
    po.seed = a.seed;
    grid = po.grid;
    for (auto& s : cdi::synthetic_subjects(po)) {
      first.push_back(std::move(s.first));
      second.push_back(std::move(s.second));
    }
    if (!a.write_scans.empty()) {
      std::filesystem::create_directories(a.write_scans);
      for (const auto* set : {&first, &second})
        for (const auto& s : *set) {
          const auto base = std::filesystem::path(a.write_scans) / s.id;
          cdi::save_graph(s.graph, base.string() + ".edges");
          cdi::save_positions(s.graph, base.string() + ".pos");
        }
    }
  } else {
    if (a.scans.size() < 2) throw cdi::ValidationError("give at least two --scan prefixes or --synthetic");
    for (const auto& p : a.scans) {
      cdi::Scan s;
      s.id = std::filesystem::path(p).filename().string();
      s.graph = cdi::load_positions(cdi::load_graph(p + ".edges"), p + ".pos", 3);
      first.push_back(s);
    }
    second = first;
  }

  cdi::SpectralOptions so;
  so.solver = cdi::SolverChoice::iterative;
  const auto kind = parse_kind(a.matrix);
  auto reduce = [&](const std::vector<cdi::Scan>& scans) {
    std::vector<std::vector<cdi::VoxelCommunity>> out(scans.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < scans.size(); ++i) {
      const auto found = cdi::detect_communities(scans[i].graph, a.vectors, kind, so);
      out[i] = cdi::reduce_scan(scans[i].graph, found, a.threshold, scans[i].id);
    }
    return out;
  };
  const auto ra = reduce(first);
  const auto rb = a.synthetic ? reduce(second) : ra;

  std::vector<std::string> rows, cols;
  for (const auto& s : first) rows.push_back(s.id);
  for (const auto& s : second) cols.push_back(s.id);
  std::vector<std::vector<double>> m(ra.size(), std::vector<double>(rb.size()));
#pragma omp parallel for collapse(2) schedule(dynamic)
  for (std::size_t i = 0; i < ra.size(); ++i)
    for (std::size_t j = 0; j < rb.size(); ++j)
      m[i][j] = cdi::mean_matching_communities(ra[i], rb[j]).mean_matches;
  Output out(a.out);
  write_matrix_csv(*out, rows, cols, m);

  if (!a.report.empty()) {
    Output rep(a.report);
    cdi::write_match_json(cdi::mean_matching_communities(ra[0], rb[a.synthetic ? 0 : 1]), *rep);
  }
  if (!a.edit_out.empty()) {
    std::vector<std::vector<double>> d(first.size(), std::vector<double>(second.size()));
    for (std::size_t i = 0; i < first.size(); ++i)
      for (std::size_t j = 0; j < second.size(); ++j)
        d[i][j] = static_cast<double>(
            a.synthetic ? cdi::edge_edit_distance(cdi::on_grid(first[i], grid), cdi::on_grid(second[j], grid))
                        : cdi::edge_edit_distance(first[i].graph, second[j].graph));
    Output eo(a.edit_out);
    write_matrix_csv(*eo, rows, cols, d);
  }
}

// ------------------------------------------------------------------ bisect

struct BisectArgs {
  std::string in;
  int target = 8;
  double threshold = 0.01;
  std::string matrix = "adjacency";
  std::string out = "-";
};

void run_bisect(const BisectArgs& a) {
  const cdi::Graph g = cdi::load_graph(a.in);
  cdi::BisectionOptions bo;
  bo.target = a.target;
  bo.threshold = a.threshold;
  bo.kind = parse_kind(a.matrix);
  const auto part = cdi::spectral_bisection(g, bo);
  json doc;
  doc["communities"] = json::array();
  for (const auto& c : part.communities) {
    json members = json::array();
    for (auto v : c) members.push_back(v + 1);
    doc["communities"].push_back(members);
  }
  doc["flagged"] = part.flagged;
  doc["note"] = part.note;
  doc["config"] = config_json();
  Output out(a.out);
  *out << doc.dump(2) << '\n';
  if (part.flagged) std::cerr << "warning: " << part.note << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Communities of dynamical influence: detection, consensus optimisation, matching"};
  app.set_config("--config", "", "Read options from a TOML file (as written by --save-config)");
  std::string save_config;
  app.add_option("--save-config", save_config, "Write the effective options to this file");
  app.require_subcommand(1, 1);
  app.fallthrough();

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Write a random graph as an edge list");
  gen->add_option("--family", ga.family, "knnr, knnr-var, er or flock")->capture_default_str();
  gen->add_option("--n", ga.n, "Vertex count")->capture_default_str();
  gen->add_option("--k", ga.k, "Outdegree (knnr, flock)")->capture_default_str();
  gen->add_option("--kmin", ga.k_min, "Smallest outdegree (knnr-var, er)")->capture_default_str();
  gen->add_option("--kmax", ga.k_max, "Largest outdegree (knnr-var, er)")->capture_default_str();
  gen->add_option("--dims", ga.dims, "2 or 3 (knnr, knnr-var)")->capture_default_str();
  gen->add_option("--thickness", ga.thickness, "Flock depth in (0, 1]")->capture_default_str();
  gen->add_option("--weight", ga.weight, "Edge weight")->capture_default_str();
  gen->add_option("--seed", ga.seed, "Random seed")->capture_default_str();
  gen->add_option("--out", ga.out, "Edge list path ('-' for stdout)")->required();
  gen->add_option("--positions", ga.positions, "Also write vertex positions here");

  CdiArgs ca;
  auto* cdi_cmd = app.add_subcommand("cdi", "Detect communities of dynamical influence");
  cdi_cmd->add_option("--in", ca.in, "Edge list")->required()->check(CLI::ExistingFile);
  cdi_cmd->add_option("--positions", ca.positions, "Positions sidecar")->check(kOptionalFile);
  cdi_cmd->add_option("--vectors", ca.vectors, "Eigenvectors in the coordinate system")->capture_default_str();
  cdi_cmd->add_option("--matrix", ca.matrix, "laplacian or adjacency")->capture_default_str();
  cdi_cmd->add_option("--solver", ca.solver, "auto, dense or iterative")->capture_default_str();
  cdi_cmd->add_option("--out", ca.out, "JSON output")->capture_default_str();

  OptimizeArgs oa;
  auto* opt = app.add_subcommand("optimize", "Maximise the consensus rate under a unit input budget");
  opt->add_option("--in", oa.in, "Edge list")->check(kOptionalFile);
  opt->add_option("--method", oa.method, "cdi, kmeans or direct")->capture_default_str();
  opt->add_option("--vectors", oa.vectors, "Eigenvectors for community detection")->capture_default_str();
  opt->add_option("--starts", oa.starts, "Direct optimiser starts")->capture_default_str();
  opt->add_option("--direct-evals", oa.direct_evaluations, "Direct optimiser budget per start")->capture_default_str();
  opt->add_option("--phase-evals", oa.phase_evaluations, "Objective budget per optimisation phase")->capture_default_str();
  opt->add_option("--seed", oa.seed, "Random seed")->capture_default_str();
  opt->add_option("--flock", oa.flock, "Sweep k on a flock of this many vertices instead of --in");
  opt->add_option("--thickness", oa.thickness, "Flock depth")->capture_default_str();
  opt->add_option("--k", oa.ks, "Outdegrees for the flock sweep")->capture_default_str();
  opt->add_option("--fit", oa.fit, "Fit 'powerlaw' to the sweep");
  opt->add_option("--solver", oa.solver, "Eigen solver for the sweep")->capture_default_str();
  opt->add_option("--out", oa.out, "JSON (graph) or CSV (sweep) output")->capture_default_str();

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Integrate the perturbed consensus dynamics");
  sim->add_option("--in", sa.in, "Edge list")->required()->check(CLI::ExistingFile);
  sim->add_option("--perturbation", sa.perturbation, "JSON with a 'c' array (from optimize)")->check(kOptionalFile);
  sim->add_option("--vectors", sa.vectors, "Eigenvectors when optimising inline")->capture_default_str();
  sim->add_option("--u", sa.u, "Target value")->capture_default_str();
  sim->add_option("--x0", sa.x0, "'random' or a constant initial state")->capture_default_str();
  sim->add_option("--seed", sa.seed, "Seed for a random initial state")->capture_default_str();
  sim->add_option("--dt", sa.dt, "Sampling interval")->capture_default_str();
  sim->add_option("--t-end", sa.t_end, "End time")->capture_default_str();
  sim->add_option("--out", sa.out, "CSV output")->capture_default_str();

  CompareArgs cp;
  auto* cmp = app.add_subcommand("compare", "Speed ratios of CDI, k-means and direct optimisation");
  cmp->add_option("--family", cp.family, "knnr, knnr-var or er")->capture_default_str();
  cmp->add_option("--sizes", cp.sizes, "Vertex counts, e.g. 100..1000 or 100,200")->capture_default_str();
  cmp->add_option("--k", cp.k, "Outdegree (knnr)")->capture_default_str();
  cmp->add_option("--kmin", cp.k_min, "Smallest outdegree (knnr-var, er)")->capture_default_str();
  cmp->add_option("--kmax", cp.k_max, "Largest outdegree (knnr-var, er)")->capture_default_str();
  cmp->add_option("--dims", cp.dims, "Point dimension")->capture_default_str();
  cmp->add_option("--per-size", cp.per_size, "Graphs per size")->capture_default_str();
  cmp->add_option("--methods", cp.methods, "Comma-separated methods")->capture_default_str();
  cmp->add_option("--vectors", cp.vectors, "Eigenvectors for CDI")->capture_default_str();
  cmp->add_option("--direct-starts", cp.direct_starts, "Direct optimiser starts")->capture_default_str();
  cmp->add_option("--direct-evals", cp.direct_evaluations, "Direct optimiser budget per start")->capture_default_str();
  cmp->add_option("--seed", cp.seed, "Base seed")->capture_default_str();
  cmp->add_option("--out", cp.out, "CSV output")->capture_default_str();

  MatchArgs ma;
  auto* mat = app.add_subcommand("match", "Mean number of matching communities between scans");
  mat->add_option("--scan", ma.scans, "Scan prefix (reads PREFIX.edges and PREFIX.pos)");
  mat->add_flag("--synthetic", ma.synthetic, "Use a generated subject pool (first vs second scans)");
  mat->add_option("--subjects", ma.subjects, "Synthetic subjects")->capture_default_str();
  mat->add_option("--seed", ma.seed, "Synthetic pool seed")->capture_default_str();
  mat->add_option("--vectors", ma.vectors, "Eigenvectors for CDI")->capture_default_str();
  mat->add_option("--matrix", ma.matrix, "laplacian or adjacency")->capture_default_str();
  mat->add_option("--threshold", ma.threshold, "Eigenvector entry threshold")->capture_default_str();
  mat->add_option("--out", ma.out, "Similarity matrix CSV")->capture_default_str();
  mat->add_option("--report", ma.report, "Pairing JSON for the first pair");
  mat->add_option("--edit-out", ma.edit_out, "Edge edit distance matrix CSV");
  mat->add_option("--write-scans", ma.write_scans, "Directory to export synthetic scans to");

  BisectArgs ba;
  auto* bis = app.add_subcommand("bisect", "Recursive spectral bisection");
  bis->add_option("--in", ba.in, "Edge list")->required()->check(CLI::ExistingFile);
  bis->add_option("--target", ba.target, "Number of communities (power of two)")->capture_default_str();
  bis->add_option("--threshold", ba.threshold, "Entry threshold at the last level")->capture_default_str();
  bis->add_option("--matrix", ba.matrix, "laplacian or adjacency")->capture_default_str();
  bis->add_option("--out", ba.out, "JSON output")->capture_default_str();

  for (auto* sub : app.get_subcommands({})) sub->configurable();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (const char* w = std::getenv("CDI_WORKERS")) {
    const int workers = std::atoi(w);
    if (workers < 1) {
      std::cerr << "error: CDI_WORKERS must be a positive integer\n";
      return 2;
    }
    omp_set_num_threads(workers);
  }

  for (const auto* sub : app.get_subcommands())
    g_config = "[" + sub->get_name() + "]\n" + sub->config_to_str(true, false);
  try {
    if (!save_config.empty()) {
      std::ofstream cfg(save_config);
      if (!cfg) throw cdi::Error("cannot write '" + save_config + "'");
      cfg << g_config;
    }
    if (*gen) run_generate(ga);
    else if (*cdi_cmd) run_cdi(ca);
    else if (*opt) run_optimize(oa);
    else if (*sim) run_simulate(sa);
    else if (*cmp) run_compare_cmd(cp);
    else if (*mat) run_match(ma);
    else if (*bis) run_bisect(ba);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
