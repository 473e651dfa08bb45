#pragma once

#include <Eigen/Dense>
#include <complex>

#include "collapse/errors.hpp"

namespace collapse {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  return 0.5 * (m + m.adjoint());
}

// max |M - M^dag| over entries
double hermiticity_drift(const ComplexMatrix& m);

// Tr(a^dag b), the trace inner product
Complex trace_dot(const ComplexMatrix& a, const ComplexMatrix& b);

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);

// Hermitian within drift_tol at construction; stored form is exactly
// (M + M^dag)/2.
class HermitianOperator {
 public:
  explicit HermitianOperator(const ComplexMatrix& m, double drift_tol = 1e-12);

  const ComplexMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

// Unit trace and positive semidefinite within tolerance. psd_tol is the
// allowed eigenvalue floor magnitude: type default 1e-10; integrators
// validate stored trajectory states at 1e-8 (their positivity guarantee).
class DensityMatrix {
 public:
  static DensityMatrix validated(const ComplexMatrix& m, double psd_tol = 1e-10,
                                 double trace_tol = 1e-10);

  const ComplexMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

// E_ij, the standard trace-orthonormal basis of M_n
ComplexMatrix matrix_unit(Eigen::Index n, Eigen::Index i, Eigen::Index j);

DensityMatrix maximally_mixed(Eigen::Index n);
// rank-one projector onto (1,...,1)/sqrt(n)
DensityMatrix uniform_superposition(Eigen::Index n);

}  // namespace collapse
