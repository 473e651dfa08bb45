#pragma once

#include <cstdint>
#include <vector>

#include "collapse/algebra.hpp"
#include "collapse/matrix.hpp"
#include "collapse/observable.hpp"

namespace collapse {

// Operator family {H, V_k} of the master equation
//   drho/dt = -i[H, rho] + sum_k (V_k rho V_k^dag - 1/2 {V_k^dag V_k, rho}).
struct LindbladSpec {
  HermitianOperator h;
  std::vector<ComplexMatrix> jump_ops;

  LindbladSpec(HermitianOperator h_in, std::vector<ComplexMatrix> jumps);
  Eigen::Index dim() const { return h.dim(); }
};

// V_k = sqrt(gamma_k) P_k with H = 0. Zero rates are kept as zero jump
// operators so the gamma vector maps one-to-one onto spectral points.
LindbladSpec dephasing(const Observable& a, const std::vector<double>& gamma);
LindbladSpec dephasing(const Observable& a, double gamma);

// Schroedinger picture: generator applied to a state
ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const LindbladSpec& spec);

// Heisenberg picture: i[H,b] + sum_k (V_k^dag b V_k - 1/2 {V_k^dag V_k, b}).
// Not a user-facing evolution mode; exists for the trace-pairing adjoint
// identity Tr(x * schroedinger(y)) = Tr(heisenberg(x) * y) in tests.
ComplexMatrix heisenberg_rhs(const ComplexMatrix& b, const LindbladSpec& spec);

// max_k ||V_k||_2^2 (squared operator norm), the fastest jump rate scale;
// falls back to ||H||_2 and then to 1 for trivial specs
double rate_scale(const LindbladSpec& spec);

struct TrajectoryPoint {
  double t;
  DensityMatrix state;
};
using Trajectory = std::vector<TrajectoryPoint>;

// Fixed-step RK4. Every stored state is re-symmetrized and trace-
// renormalized; per-step trace drift above 1e-9 rejects the step and halves
// dt (at most 20 times, then NumericalError). dt <= 0 selects the default
// 0.01 / rate_scale. Records every `stride` accepted steps plus the final
// state.
Trajectory integrate_lindblad(const DensityMatrix& rho0, const LindbladSpec& spec,
                              double t_final, double dt = 0.0, int stride = 1);

struct DecoherenceReport {
  bool generated_algebra_matches = false;  // {H, V_k, V_k^dag}'' == <A>
  bool all_initial_converge = false;       // {H, V_k, V_k^dag}'' == {V_k, V_k^dag}''
  int generated_dim = 0;
  int jump_generated_dim = 0;
  int observable_dim = 0;
};

// Algebraic decoherence criteria, decided purely by commutant computations
// at tolerance tol.
DecoherenceReport check_decoherence(const LindbladSpec& spec, const Observable& a,
                                    double tol = 1e-8);

// matrix of the Schroedinger generator in the matrix-unit basis E_ij
// (trace-orthonormal), acting on column-major vec(rho)
ComplexMatrix superoperator_matrix(const LindbladSpec& spec);

struct SuperoperatorSpectrum {
  std::vector<Complex> eigenvalues;  // sorted by (Re desc, Im asc)
  int zero_subspace_dim = 0;         // |Re| <= tol and |Im| <= tol
  int zero_real_dim = 0;             // |Re| <= tol
  double max_re = 0.0;
  double tol = 0.0;
};

SuperoperatorSpectrum superoperator_spectrum(const LindbladSpec& spec,
                                             double tol = 1e-9);

// slowest strictly-decaying rate min{|Re lambda| : Re lambda < -tol};
// NumericalError when nothing decays
double slowest_decay_rate(const LindbladSpec& spec, double tol = 1e-9);

// Integrates until ||rhs||_F < eps * slowest_decay_rate, then checks the
// limit against the pinching of rho0 (within 10*eps). t_cap <= 0 selects
// 50 / slowest_decay_rate. Throws NonConvergenceError at t_cap.
DensityMatrix asymptotic_state(const DensityMatrix& rho0, const LindbladSpec& spec,
                               const Observable& a, double eps = 1e-7,
                               double t_cap = 0.0);

}  // namespace collapse
