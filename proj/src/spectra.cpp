#include "cdi/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include "cdi/error.hpp"
#include "cdi/kernels.hpp"
#include "cdi/rng.hpp"

namespace cdi {

namespace {

using cd = std::complex<double>;

bool precedes(MatrixKind kind, cd a, cd b) {
  if (kind == MatrixKind::laplacian) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() > b.imag();
  }
  const double ma = std::abs(a), mb = std::abs(b);
  if (ma != mb) return ma > mb;
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

std::vector<int> kind_order(MatrixKind kind, const Eigen::VectorXcd& values) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return precedes(kind, values[a], values[b]); });
  return order;
}

Eigen::Index largest_entry(const Eigen::VectorXcd& v) {
  Eigen::Index best = 0;
  double top = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (const double m = std::abs(v[i]); m > top) {
      top = m;
      best = i;
    }
  return best;
}

/// Unit 2-norm with the largest-modulus entry rotated onto the positive reals.
Eigen::VectorXcd fix_phase(Eigen::VectorXcd v) {
  v.normalize();
  const cd pivot = v[largest_entry(v)];
  if (std::abs(pivot) > 0.0) v *= std::conj(pivot) / std::abs(pivot);
  return v;
}

Eigen::VectorXd signed_real_part(const Eigen::VectorXcd& v) {
  Eigen::VectorXd r = v.real();
  Eigen::Index best = 0;
  r.cwiseAbs().maxCoeff(&best);
  if (r[best] < 0.0) r = -r;
  return r;
}

/// ||v M - lambda v||_inf / ||M||_inf, using mt = M^T.
double backward_error(const SparseMatrix& mt, double norm, cd lambda, const Eigen::VectorXcd& v) {
  const Eigen::VectorXd re = mt * v.real();
  const Eigen::VectorXd im = mt * v.imag();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    worst = std::max(worst, std::abs(cd(re[i], im[i]) - lambda * v[i]));
  return worst / std::max(norm, 1e-300);
}

/// Inverse iteration polish for an eigenpair of mt that misses the bound.
void refine(const SparseMatrix& mt, cd& lambda, Eigen::VectorXcd& v) {
  const Eigen::Index n = mt.rows();
  const double scale = std::max(1.0, std::abs(lambda));
  Eigen::MatrixXcd shifted = Eigen::MatrixXd(mt).cast<cd>();
  shifted.diagonal().array() -= lambda + cd(1e-10 * scale, 1e-10 * scale);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(shifted);
  for (int it = 0; it < 3; ++it) {
    v = lu.solve(v);
    v.normalize();
  }
  const Eigen::VectorXcd mv = Eigen::MatrixXd(mt).cast<cd>() * v;
  lambda = v.dot(mv) / v.squaredNorm();
  (void)n;
}

bool is_symmetric(const SparseMatrix& m) {
  const SparseMatrix t = m.transpose();
  return (m - t).norm() == 0.0;
}

struct RawPairs {
  Eigen::VectorXcd values;
  std::vector<Eigen::VectorXcd> vectors;
};

RawPairs dense_pairs(const SparseMatrix& m, int count, MatrixKind kind) {
  const Eigen::MatrixXd dense(m);
  RawPairs raw;
  if (is_symmetric(m)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    if (es.info() != Eigen::Success) throw SpectralError("symmetric eigensolver failed", INFINITY);
    const Eigen::VectorXcd values = es.eigenvalues().cast<cd>();
    const auto order = kind_order(kind, values);
    raw.values.resize(count);
    for (int t = 0; t < count; ++t) {
      raw.values[t] = values[order[t]];
      raw.vectors.push_back(es.eigenvectors().col(order[t]).cast<cd>());
    }
    return raw;
  }
  // right eigenvectors of M^T are the left eigenvectors of M
  Eigen::EigenSolver<Eigen::MatrixXd> es(dense.transpose());
  if (es.info() != Eigen::Success) throw SpectralError("dense eigensolver failed", INFINITY);
  const Eigen::VectorXcd values = es.eigenvalues();
  const auto order = kind_order(kind, values);
  const Eigen::MatrixXcd vecs = es.eigenvectors();
  raw.values.resize(count);
  for (int t = 0; t < count; ++t) {
    raw.values[t] = values[order[t]];
    raw.vectors.push_back(vecs.col(order[t]));
  }
  return raw;
}

Eigen::MatrixXd orthonormal(const Eigen::MatrixXd& z) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
  return qr.householderQ() * Eigen::MatrixXd::Identity(z.rows(), z.cols());
}

/// Block subspace iteration with Rayleigh-Ritz on M^T. The operator is
/// shift-invert about a small negative shift for the laplacian end and
/// M^T itself for the adjacency end.
RawPairs iterative_pairs(const SparseMatrix& m, int count, MatrixKind kind,
                         const SpectralOptions& opt) {
  const int n = static_cast<int>(m.rows());
  const int block = std::min(n, std::max(count + 8, 2 * count));
  const SparseMatrix mt = m.transpose();
  const double norm = inf_norm(m);

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  if (kind == MatrixKind::laplacian) {
    Eigen::SparseMatrix<double> shifted = mt;
    const double sigma = -1e-3 * std::max(1.0, norm);
    for (int i = 0; i < n; ++i) shifted.coeffRef(i, i) -= sigma;
    shifted.makeCompressed();
    lu.analyzePattern(shifted);
    lu.factorize(shifted);
    if (lu.info() != Eigen::Success) throw SpectralError("shift-invert factorisation failed", INFINITY);
  }

  Rng rng(opt.seed);
  Eigen::MatrixXd q(n, block);
  for (int j = 0; j < block; ++j)
    for (int i = 0; i < n; ++i) q(i, j) = rng.uniform() - 0.5;
  q = orthonormal(q);

  double worst = INFINITY;
  Eigen::MatrixXd z(n, block);
  Eigen::VectorXd col(n);
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (kind == MatrixKind::laplacian) {
      z = lu.solve(q);
    } else {
      for (int j = 0; j < block; ++j) {
        kernels::spmv_omp(mt, q.col(j), col);
        z.col(j) = col;
      }
    }
    q = orthonormal(z);

    Eigen::MatrixXd mq(n, block);
    for (int j = 0; j < block; ++j) {
      kernels::spmv_omp(mt, q.col(j), col);
      mq.col(j) = col;
    }
    const Eigen::MatrixXd h = q.transpose() * mq;
    Eigen::EigenSolver<Eigen::MatrixXd> es(h);
    if (es.info() != Eigen::Success) continue;
    const Eigen::VectorXcd ritz = es.eigenvalues();
    const auto order = kind_order(kind, ritz);
    RawPairs raw;
    raw.values.resize(count);
    worst = 0.0;
    for (int t = 0; t < count; ++t) {
      raw.values[t] = ritz[order[t]];
      Eigen::VectorXcd v = q.cast<cd>() * es.eigenvectors().col(order[t]);
      v.normalize();
      worst = std::max(worst, backward_error(mt, norm, raw.values[t], v));
      raw.vectors.push_back(std::move(v));
    }
    if (worst <= opt.tolerance) return raw;
  }
  throw SpectralError("subspace iteration did not converge in " +
                          std::to_string(opt.max_iterations) + " iterations",
                      worst);
}

}  // namespace

SparseMatrix spectral_matrix(const Graph& g, MatrixKind kind) {
  return kind == MatrixKind::laplacian ? laplacian(g).matrix : g.adjacency();
}

SpectralBasis left_eigs(const SparseMatrix& m, int count, MatrixKind kind,
                        const SpectralOptions& options) {
  const int n = static_cast<int>(m.rows());
  if (count < 1 || count > n)
    throw ValidationError("eigenpair count must lie in [1, " + std::to_string(n) + "]");
  const bool dense = options.solver == SolverChoice::dense ||
                     (options.solver == SolverChoice::automatic && n <= options.dense_limit);
  RawPairs raw = dense ? dense_pairs(m, count, kind) : iterative_pairs(m, count, kind, options);

  const SparseMatrix mt = m.transpose();
  const double norm = inf_norm(m);
  SpectralBasis basis;
  basis.kind = kind;
  for (int t = 0; t < count; ++t) {
    cd lambda = raw.values[t];
    Eigen::VectorXcd v = fix_phase(raw.vectors[t]);
    double residual = backward_error(mt, norm, lambda, v);
    if (residual > options.tolerance) {
      refine(mt, lambda, v);
      v = fix_phase(v);
      residual = backward_error(mt, norm, lambda, v);
      if (residual > options.tolerance)
        throw SpectralError("eigenpair " + std::to_string(t) + " misses the backward-error bound",
                            residual);
    }
    basis.eigenvalues.push_back(lambda);
    basis.real_parts.push_back(signed_real_part(v));
    basis.vectors.push_back(std::move(v));
    basis.residuals.push_back(residual);
  }
  return basis;
}

InfluenceCoordinates select_input_vectors(const SpectralBasis& basis, int y) {
  if (y < 1) throw ValidationError("at least one input eigenvector is required");
  InfluenceCoordinates out;
  out.kind = basis.kind;
  std::vector<const Eigen::VectorXd*> chosen;
  for (int j = 0; j < basis.size() && static_cast<int>(chosen.size()) < y; ++j) {
    const Eigen::VectorXd& cand = basis.real_parts[j];
    const bool repeat = std::any_of(chosen.begin(), chosen.end(), [&](const Eigen::VectorXd* v) {
      const double same = (cand - *v).cwiseAbs().maxCoeff();
      const double flipped = (cand + *v).cwiseAbs().maxCoeff();
      return std::min(same, flipped) <= 1e-10;
    });
    if (repeat) continue;
    chosen.push_back(&cand);
    out.source.push_back(j);
    out.eigenvalues.push_back(basis.eigenvalues[j]);
  }
  if (static_cast<int>(chosen.size()) < y)
    throw SpectralError("only " + std::to_string(chosen.size()) +
                            " distinct real eigenvector parts available, " + std::to_string(y) +
                            " requested",
                        0.0);
  const Eigen::Index n = chosen.front()->size();
  out.e.resize(n, y);
  for (int t = 0; t < y; ++t) out.e.col(t) = *chosen[t];
  out.s = out.e.rowwise().norm();
  return out;
}

InfluenceCoordinates influence_coordinates(const Graph& g, int y, MatrixKind kind,
                                           const SpectralOptions& options) {
  if (y < 1 || y > g.size())
    throw ValidationError("input eigenvector count must lie in [1, n]");
  // each skipped vector is the partner of a kept one, so 2y - 1 always suffice
  const int count = std::min(g.size(), 2 * y - 1);
  return select_input_vectors(left_eigs(spectral_matrix(g, kind), count, kind, options), y);
}

double min_real_eigenvalue_dense(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) throw SpectralError("dense eigensolver failed", INFINITY);
  return es.eigenvalues().real().minCoeff();
}

}  // namespace cdi
