#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "cdi/graph.hpp"

namespace cdi {

enum class MatrixKind { laplacian, adjacency };

enum class SolverChoice { automatic, dense, iterative };

struct SpectralOptions {
  SolverChoice solver = SolverChoice::automatic;
  /// automatic uses the dense decomposition up to this many vertices
  int dense_limit = 2000;
  int max_iterations = 5000;
  /// bound on ||vM - lambda v||_inf / ||M||_inf for unit-norm v
  double tolerance = 1e-8;
  std::uint64_t seed = 0x5eedULL;
};

/// Left eigenpairs in kind order: laplacian by ascending real part,
/// adjacency by descending magnitude (conjugate partners adjacent, positive
/// imaginary part first). Vectors have unit 2-norm and a fixed phase (their
/// largest-modulus entry is real positive); real_parts[i] is Re(vectors[i])
/// with its largest-magnitude entry made positive.
struct SpectralBasis {
  MatrixKind kind = MatrixKind::laplacian;
  std::vector<std::complex<double>> eigenvalues;
  std::vector<Eigen::VectorXcd> vectors;
  std::vector<Eigen::VectorXd> real_parts;
  std::vector<double> residuals;

  int size() const noexcept { return static_cast<int>(eigenvalues.size()); }
};

SparseMatrix spectral_matrix(const Graph& g, MatrixKind kind);

/// The `count` most dominant left eigenpairs of m. Throws SpectralError when
/// an eigenpair misses the backward-error bound.
SpectralBasis left_eigs(const SparseMatrix& m, int count, MatrixKind kind,
                        const SpectralOptions& options = {});

/// Eigenvector coordinate system: column t of e is the real part of the
/// t-th selected eigenvector, s the Euclidean norm of each row.
struct InfluenceCoordinates {
  MatrixKind kind = MatrixKind::laplacian;
  Eigen::MatrixXd e;
  Eigen::VectorXd s;
  /// basis index each column was taken from
  std::vector<int> source;
  std::vector<std::complex<double>> eigenvalues;

  int y() const noexcept { return static_cast<int>(e.cols()); }
  int n() const noexcept { return static_cast<int>(e.rows()); }
  Eigen::VectorXd v1() const { return e.col(0); }
};

/// Take y columns from the basis, skipping any whose real part repeats an
/// earlier column (the partner of a complex conjugate pair).
InfluenceCoordinates select_input_vectors(const SpectralBasis& basis, int y);

/// left_eigs + select_input_vectors, asking for enough eigenpairs that y
/// distinct real parts always exist when the spectrum has them.
InfluenceCoordinates influence_coordinates(const Graph& g, int y, MatrixKind kind,
                                           const SpectralOptions& options = {});

/// Smallest real part over the full spectrum (dense reference).
double min_real_eigenvalue_dense(const Eigen::MatrixXd& m);

}  // namespace cdi
