#include "collapse/algebra.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

namespace collapse {

AlgebraBasis::AlgebraBasis(Eigen::Index n, std::vector<ComplexMatrix> elements)
    : n_(n), elements_(std::move(elements)) {
  for (const auto& e : elements_) {
    if (e.rows() != n_ || e.cols() != n_) {
      throw ValidationError("AlgebraBasis: element dimension mismatch");
    }
  }
}

ComplexMatrix AlgebraBasis::project(const ComplexMatrix& x) const {
  ComplexMatrix out = ComplexMatrix::Zero(n_, n_);
  for (const auto& b : elements_) out += trace_dot(b, x) * b;
  return out;
}

double AlgebraBasis::residual(const ComplexMatrix& x) const {
  return (x - project(x)).norm();
}

double AlgebraBasis::orthonormality_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const Complex g = trace_dot(elements_[i], elements_[j]);
      const double target = (i == j) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(g - target));
    }
  }
  return worst;
}

double AlgebraBasis::adjoint_closure_defect() const {
  double worst = 0.0;
  for (const auto& b : elements_) {
    worst = std::max(worst, residual(b.adjoint()));
  }
  return worst;
}

namespace {

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index n) {
  // column-major vec, matching Eigen's default storage
  return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
}

}  // namespace

AlgebraBasis commutant(const std::vector<ComplexMatrix>& gens, double rel_tol) {
  if (gens.empty()) throw ValidationError("commutant: empty generator list");
  const Eigen::Index n = gens.front().rows();
  for (const auto& g : gens) {
    if (g.rows() != n || g.cols() != n) {
      throw ValidationError("commutant: generator dimension mismatch");
    }
  }
  const Eigen::Index n2 = n * n;
  // [X, G] = 0 in column-major vec form: (G^T (x) 1 - 1 (x) G) vec X = 0,
  // stacked over gens and their adjoints so the nullspace is *-closed.
  ComplexMatrix stacked(2 * static_cast<Eigen::Index>(gens.size()) * n2, n2);
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  Eigen::Index row = 0;
  for (const auto& g : gens) {
    for (const ComplexMatrix& gg : {g, ComplexMatrix(g.adjoint())}) {
      stacked.block(row, 0, n2, n2) =
          Eigen::kroneckerProduct(gg.transpose(), id) -
          Eigen::kroneckerProduct(id, gg);
      row += n2;
    }
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(stacked, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  // sigma_max == 0 means every generator is scalar; the commutant is all of M_n
  const double cut = rel_tol * sigma_max;
  std::vector<ComplexMatrix> basis;
  for (Eigen::Index k = 0; k < n2; ++k) {
    const double s = k < sv.size() ? sv(k) : 0.0;
    if (s <= cut) basis.push_back(unvec(svd.matrixV().col(k), n));
  }
  return AlgebraBasis(n, std::move(basis));
}

AlgebraBasis double_commutant(const std::vector<ComplexMatrix>& gens,
                              double rel_tol) {
  AlgebraBasis first = commutant(gens, rel_tol);
  return commutant(first.elements(), rel_tol);
}

bool algebra_equal(const AlgebraBasis& a, const AlgebraBasis& b, double tol) {
  if (a.space_dim() != b.space_dim()) {
    throw ValidationError("algebra_equal: matrix dimension mismatch");
  }
  if (a.dim() != b.dim()) return false;
  for (const auto& x : a.elements()) {
    if (b.residual(x) > tol) return false;
  }
  for (const auto& x : b.elements()) {
    if (a.residual(x) > tol) return false;
  }
  return true;
}

AlgebraBasis spectral_algebra(const Observable& a) {
  std::vector<ComplexMatrix> basis;
  basis.reserve(a.projections().size());
  for (std::size_t k = 0; k < a.projections().size(); ++k) {
    basis.push_back(a.projections()[k] /
                    std::sqrt(static_cast<double>(a.degeneracies()[k])));
  }
  return AlgebraBasis(a.dim(), std::move(basis));
}

}  // namespace collapse
