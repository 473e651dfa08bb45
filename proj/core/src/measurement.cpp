#include "collapse/measurement.hpp"

#include <cmath>
#include <sstream>

namespace collapse {

double outcome_probability(const DensityMatrix& rho, const Observable& a, int k) {
  if (k < 0 || k >= a.points()) {
    throw ValidationError("outcome_probability: spectral index out of range");
  }
  if (rho.dim() != a.dim()) {
    throw ValidationError("outcome_probability: dimension mismatch");
  }
  return (rho.matrix() * a.projections()[static_cast<std::size_t>(k)])
      .trace()
      .real();
}

DensityMatrix selective_map(const DensityMatrix& rho, const Observable& a, int k) {
  const double p = outcome_probability(rho, a, k);
  if (p <= 1e-12) {
    std::ostringstream os;
    os << "selective_map: zero-probability outcome k=" << k << " (p=" << p << ")";
    throw ValidationError(os.str());
  }
  const ComplexMatrix& pk = a.projections()[static_cast<std::size_t>(k)];
  return DensityMatrix::validated(hermitian_part(pk * rho.matrix() * pk) / p);
}

ComplexMatrix pinch(const ComplexMatrix& x, const Observable& a) {
  if (x.rows() != a.dim() || x.cols() != a.dim()) {
    throw ValidationError("pinch: dimension mismatch");
  }
  ComplexMatrix out = ComplexMatrix::Zero(a.dim(), a.dim());
  for (const auto& p : a.projections()) out += p * x * p;
  return out;
}

DensityMatrix conditional_expectation(const DensityMatrix& rho,
                                      const Observable& a) {
  return DensityMatrix::validated(hermitian_part(pinch(rho.matrix(), a)));
}

SimplexPoint restrict_to_algebra(const DensityMatrix& rho, const Observable& a) {
  std::vector<double> r(static_cast<std::size_t>(a.points()));
  for (int k = 0; k < a.points(); ++k) {
    double v = outcome_probability(rho, a, k);
    if (v < 0.0 && v >= -1e-10) v = 0.0;
    r[static_cast<std::size_t>(k)] = v;
  }
  return SimplexPoint(std::move(r));
}

ComplexMatrix partial_trace_2(const ComplexMatrix& m, Eigen::Index n1,
                              Eigen::Index n2) {
  if (n1 < 1 || n2 < 1 || m.rows() != n1 * n2 || m.cols() != n1 * n2) {
    throw ValidationError("partial_trace_2: dimension not factorable as (n1, n2)");
  }
  ComplexMatrix out = ComplexMatrix::Zero(n1, n1);
  for (Eigen::Index i = 0; i < n1; ++i) {
    for (Eigen::Index j = 0; j < n1; ++j) {
      Complex s = 0.0;
      for (Eigen::Index b = 0; b < n2; ++b) s += m(i * n2 + b, j * n2 + b);
      out(i, j) = s;
    }
  }
  return out;
}

CpRestriction cp_restriction_demo(const ComplexMatrix& u,
                                  const DensityMatrix& rho12_a,
                                  const DensityMatrix& rho12_b,
                                  Eigen::Index n1, Eigen::Index n2) {
  const Eigen::Index n = n1 * n2;
  if (u.rows() != n || u.cols() != n || rho12_a.dim() != n || rho12_b.dim() != n) {
    throw ValidationError("cp_restriction_demo: dimension mismatch");
  }
  const double unitarity =
      (u.adjoint() * u - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (unitarity > 1e-10) {
    throw ValidationError("cp_restriction_demo: U not unitary");
  }
  const double ext_gap = frobenius_distance(
      partial_trace_2(rho12_a.matrix(), n1, n2),
      partial_trace_2(rho12_b.matrix(), n1, n2));
  if (ext_gap > 1e-10) {
    throw ValidationError(
        "cp_restriction_demo: inputs are not extensions of the same state");
  }
  auto evolve_restrict = [&](const DensityMatrix& r) {
    return DensityMatrix::validated(hermitian_part(
        partial_trace_2(u * r.matrix() * u.adjoint(), n1, n2)));
  };
  DensityMatrix out1 = evolve_restrict(rho12_a);
  DensityMatrix out2 = evolve_restrict(rho12_b);
  const double d = frobenius_distance(out1.matrix(), out2.matrix());
  return CpRestriction{std::move(out1), std::move(out2), d};
}

}  // namespace collapse
