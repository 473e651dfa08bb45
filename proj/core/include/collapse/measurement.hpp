#pragma once

#include "collapse/matrix.hpp"
#include "collapse/observable.hpp"
#include "collapse/simplex.hpp"

namespace collapse {

double outcome_probability(const DensityMatrix& rho, const Observable& a, int k);

// P_k rho P_k / Tr(rho P_k); throws ValidationError when the outcome
// probability is <= 1e-12
DensityMatrix selective_map(const DensityMatrix& rho, const Observable& a, int k);

// the pinching sum_k P_k x P_k, defined on arbitrary matrices
ComplexMatrix pinch(const ComplexMatrix& x, const Observable& a);

// pinching of a state; trace preserved exactly, idempotent
DensityMatrix conditional_expectation(const DensityMatrix& rho, const Observable& a);

// r_k = Tr(rho P_k), clamped at -1e-10, in ascending-eigenvalue order
SimplexPoint restrict_to_algebra(const DensityMatrix& rho, const Observable& a);

// trace over the second tensor factor of a matrix on H1 (x) H2
ComplexMatrix partial_trace_2(const ComplexMatrix& m, Eigen::Index n1,
                              Eigen::Index n2);

// Restricting rho12 -> Tr_2[U rho12 U^dag] to the first factor is only
// well-defined per extension: two extensions of the same reduced state can
// give different outputs when U is entangling. This op exists to make that
// failure observable.
struct CpRestriction {
  DensityMatrix out1;
  DensityMatrix out2;
  double distance;  // ||out1 - out2||_F
};
CpRestriction cp_restriction_demo(const ComplexMatrix& u,
                                  const DensityMatrix& rho12_a,
                                  const DensityMatrix& rho12_b,
                                  Eigen::Index n1, Eigen::Index n2);

}  // namespace collapse
