#pragma once

#include <vector>

#include "collapse/matrix.hpp"

namespace collapse {

// A Hermitian operator together with its spectral resolution
// A = sum_k a_k P_k, a_1 < ... < a_m. Spectral points are ordered by
// ascending eigenvalue everywhere; simplex coordinate k always refers to
// projection k in this order.
class Observable {
 public:
  // Eigenvalues closer than degeneracy_tol * max(spectral radius, 1) are
  // merged into one spectral point.
  static Observable spectral_decompose(const HermitianOperator& h,
                                       double degeneracy_tol = 1e-8);

  // diag(d) on C^n, decomposed with the default tolerance
  static Observable from_diagonal(const std::vector<double>& d);

  const HermitianOperator& op() const { return op_; }
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  const std::vector<ComplexMatrix>& projections() const { return projections_; }
  const std::vector<int>& degeneracies() const { return degeneracies_; }

  int points() const { return static_cast<int>(eigenvalues_.size()); }  // m
  Eigen::Index dim() const { return op_.dim(); }                        // n
  bool nondegenerate() const { return points() == static_cast<int>(dim()); }

 private:
  Observable(HermitianOperator op, std::vector<double> ev,
             std::vector<ComplexMatrix> pr, std::vector<int> deg);

  HermitianOperator op_;
  std::vector<double> eigenvalues_;
  std::vector<ComplexMatrix> projections_;
  std::vector<int> degeneracies_;
};

}  // namespace collapse
