#include "collapse/observable.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace collapse {

namespace {

void check_resolution(const HermitianOperator& op,
                      const std::vector<double>& ev,
                      const std::vector<ComplexMatrix>& pr,
                      const std::vector<int>& deg) {
  const Eigen::Index n = op.dim();
  const double tol = 1e-10;
  ComplexMatrix sum_p = ComplexMatrix::Zero(n, n);
  ComplexMatrix recon = ComplexMatrix::Zero(n, n);
  for (std::size_t k = 0; k < pr.size(); ++k) {
    const ComplexMatrix& p = pr[k];
    if ((p - p.adjoint()).cwiseAbs().maxCoeff() > tol ||
        (p * p - p).cwiseAbs().maxCoeff() > tol) {
      throw NumericalError("Observable: projection not idempotent-Hermitian");
    }
    for (std::size_t j = 0; j < k; ++j) {
      if ((pr[j] * p).cwiseAbs().maxCoeff() > tol) {
        throw NumericalError("Observable: projections not mutually orthogonal");
      }
    }
    const double rank = p.trace().real();
    if (std::abs(rank - deg[k]) > tol) {
      throw NumericalError("Observable: projection rank != degeneracy");
    }
    sum_p += p;
    recon += ev[k] * p;
  }
  if ((sum_p - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > tol) {
    throw NumericalError("Observable: projections incomplete");
  }
  const double scale = std::max(1.0, op.matrix().norm());
  if ((recon - op.matrix()).norm() > 1e-10 * scale) {
    throw NumericalError("Observable: spectral reconstruction off");
  }
}

}  // namespace

Observable::Observable(HermitianOperator op, std::vector<double> ev,
                       std::vector<ComplexMatrix> pr, std::vector<int> deg)
    : op_(std::move(op)),
      eigenvalues_(std::move(ev)),
      projections_(std::move(pr)),
      degeneracies_(std::move(deg)) {
  check_resolution(op_, eigenvalues_, projections_, degeneracies_);
}

Observable Observable::spectral_decompose(const HermitianOperator& h,
                                          double degeneracy_tol) {
  if (!(degeneracy_tol > 0)) {
    throw ValidationError("spectral_decompose: degeneracy_tol must be > 0");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.matrix());
  if (es.info() != Eigen::Success) {
    throw NumericalError("spectral_decompose: eigensolver failed");
  }
  const Eigen::VectorXd& lam = es.eigenvalues();  // ascending
  const ComplexMatrix& vec = es.eigenvectors();
  const Eigen::Index n = h.dim();

  // merge threshold relative to the spectral radius, floored at the
  // absolute tolerance for near-zero operators
  const double radius = std::max(std::abs(lam(0)), std::abs(lam(n - 1)));
  const double gap = degeneracy_tol * std::max(radius, 1.0);

  std::vector<double> ev;
  std::vector<ComplexMatrix> pr;
  std::vector<int> deg;
  Eigen::Index k = 0;
  while (k < n) {
    Eigen::Index j = k + 1;
    while (j < n && lam(j) - lam(j - 1) <= gap) ++j;
    ComplexMatrix p = ComplexMatrix::Zero(n, n);
    double mean = 0.0;
    for (Eigen::Index i = k; i < j; ++i) {
      p += vec.col(i) * vec.col(i).adjoint();
      mean += lam(i);
    }
    ev.push_back(mean / static_cast<double>(j - k));
    pr.push_back(hermitian_part(p));
    deg.push_back(static_cast<int>(j - k));
    k = j;
  }
  return Observable(h, std::move(ev), std::move(pr), std::move(deg));
}

Observable Observable::from_diagonal(const std::vector<double>& d) {
  if (d.empty()) throw ValidationError("Observable::from_diagonal: empty diagonal");
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()),
                                        static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
  }
  return spectral_decompose(HermitianOperator(m));
}

}  // namespace collapse
