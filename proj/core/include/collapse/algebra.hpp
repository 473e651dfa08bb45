#pragma once

#include <vector>

#include "collapse/matrix.hpp"
#include "collapse/observable.hpp"

namespace collapse {

// Orthonormal basis (trace inner product <X,Y> = Tr(X^dag Y)) of a
// *-closed linear subspace of M_n.
class AlgebraBasis {
 public:
  AlgebraBasis(Eigen::Index n, std::vector<ComplexMatrix> elements);

  int dim() const { return static_cast<int>(elements_.size()); }
  Eigen::Index space_dim() const { return n_; }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }

  ComplexMatrix project(const ComplexMatrix& x) const;
  double residual(const ComplexMatrix& x) const;  // ||x - project(x)||_F

  // invariant checks, used by tests
  double orthonormality_defect() const;           // max |<b_i,b_j> - delta_ij|
  double adjoint_closure_defect() const;          // max_k residual(b_k^dag)

 private:
  Eigen::Index n_;
  std::vector<ComplexMatrix> elements_;
};

// {X : [X, G] = 0 for all G in gens and gens^dag}, as the numerical
// nullspace of the stacked commutation superoperator. Singular values below
// 1e-9 * sigma_max count as zero.
AlgebraBasis commutant(const std::vector<ComplexMatrix>& gens,
                       double rel_tol = 1e-9);

// the unital *-algebra generated by gens
AlgebraBasis double_commutant(const std::vector<ComplexMatrix>& gens,
                              double rel_tol = 1e-9);

bool algebra_equal(const AlgebraBasis& a, const AlgebraBasis& b,
                   double tol = 1e-8);

// <A> = span{P_1, ..., P_m}, orthonormalized directly from the spectral
// projections (P_k / sqrt(d_k) are already trace-orthonormal)
AlgebraBasis spectral_algebra(const Observable& a);

}  // namespace collapse
