#include "collapse/matrix.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace collapse {

double hermiticity_drift(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Complex trace_dot(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.adjoint() * b).trace();
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).norm();
}

HermitianOperator::HermitianOperator(const ComplexMatrix& m, double drift_tol) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw ValidationError("HermitianOperator: matrix must be square, n >= 1");
  }
  const double drift = hermiticity_drift(m);
  if (!(drift <= drift_tol)) {
    std::ostringstream os;
    os << "HermitianOperator: hermiticity drift " << drift << " exceeds " << drift_tol;
    throw ValidationError(os.str());
  }
  m_ = hermitian_part(m);
}

DensityMatrix DensityMatrix::validated(const ComplexMatrix& m, double psd_tol,
                                       double trace_tol) {
  HermitianOperator h(m);  // square + hermiticity drift <= 1e-12
  const double tr = h.matrix().trace().real();
  if (!(std::abs(tr - 1.0) <= trace_tol)) {
    std::ostringstream os;
    os << "DensityMatrix: |Tr - 1| = " << std::abs(tr - 1.0) << " exceeds " << trace_tol;
    throw ValidationError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.matrix(),
                                                  Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (!(min_eig >= -psd_tol)) {
    std::ostringstream os;
    os << "DensityMatrix: min eigenvalue " << min_eig << " below -" << psd_tol;
    throw ValidationError(os.str());
  }
  return DensityMatrix(h.matrix());
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix matrix_unit(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

DensityMatrix maximally_mixed(Eigen::Index n) {
  return DensityMatrix::validated(ComplexMatrix::Identity(n, n) /
                                  static_cast<double>(n));
}

DensityMatrix uniform_superposition(Eigen::Index n) {
  ComplexMatrix m =
      ComplexMatrix::Constant(n, n, Complex(1.0 / static_cast<double>(n), 0.0));
  return DensityMatrix::validated(m);
}

}  // namespace collapse
