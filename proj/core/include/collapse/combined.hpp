#pragma once

#include <cstdint>
#include <vector>

#include "collapse/born.hpp"
#include "collapse/lindblad.hpp"
#include "collapse/matrix.hpp"
#include "collapse/observable.hpp"
#include "collapse/simplex.hpp"

namespace collapse {

// Largest kappa in [0,1] with mu_ext - kappa*rho still positive
// semidefinite: min(1, 1/lambda_max(W rho W)) with W the inverse square
// root of mu_ext on its support (eigenvalues <= support_tol treated as
// zero). Returns 0 when rho carries weight (> support_tol) outside the
// support of mu_ext, since no positive kappa is then admissible. For
// commuting diagonal arguments this reduces exactly to the simplex
// lambda_max on the diagonal vectors.
double lambda_max_matrix(const DensityMatrix& rho, const DensityMatrix& mu_ext,
                         double support_tol = 1e-10);

// Single-equation dynamics on density matrices: the Lindblad generator plus
// the trace-corrected nonlinear term
//   f(rho) = a * (lambda * rho^2 - sqrt(mu_ext) rho sqrt(mu_ext)),
// with mu_ext a fixed decohered state of the observable. a = 0 is allowed
// and decouples the nonlinear term exactly (the a > 0 regime is the one of
// interest; a = 0 serves as the Lindblad-consistency oracle).
class CombinedSpec {
 public:
  // Throws ValidationError unless the Lindblad part decoheres onto the
  // observable from every initial state (both algebraic criteria).
  CombinedSpec(LindbladSpec lindblad, Observable observable, SimplexPoint mu_ext,
               double a);

  const LindbladSpec& lindblad() const { return lindblad_; }
  const Observable& observable() const { return observable_; }
  const SimplexPoint& mu_ext() const { return mu_ext_; }
  double a() const { return a_; }
  Eigen::Index dim() const { return observable_.dim(); }

  // sum_k (s_k / d_k) P_k and its coordinate-wise square root
  const DensityMatrix& mu_ext_matrix() const { return mu_ext_matrix_; }
  const ComplexMatrix& sqrt_mu_ext() const { return sqrt_mu_ext_; }

  double slowest_rate() const { return slowest_rate_; }  // Lindblad gamma_min
  double fast_scale() const { return fast_scale_; }      // rate_scale(lindblad)

 private:
  LindbladSpec lindblad_;
  Observable observable_;
  SimplexPoint mu_ext_;
  double a_;
  DensityMatrix mu_ext_matrix_;
  ComplexMatrix sqrt_mu_ext_;
  ComplexMatrix w_;  // pseudo-inverse square root of mu_ext_matrix_
  ComplexMatrix escape_projector_;  // complement of supp(mu_ext), may be 0x0
  double slowest_rate_;
  double fast_scale_;

  friend double lambda_max_cached(const ComplexMatrix& rho, const CombinedSpec& spec);
};

// lindblad_rhs(rho) + f(rho) - rho * Tr f(rho); Hermitian with trace
// below 1e-12. For diagonal rho and nondegenerate observables the
// difference to lindblad_rhs reduces to purification_rhs on the diagonal.
HermitianOperator combined_rhs(const DensityMatrix& rho, const CombinedSpec& spec);

enum class CombinedStatus { Converged, Unresolved };

struct CombinedOutcome {
  CombinedStatus status;
  int index;  // spectral point of the attracting P_i / d_i, -1 otherwise
  DensityMatrix final_state;
  double t_elapsed;
  std::int64_t steps;

  bool converged() const { return status == CombinedStatus::Converged; }
};

struct CombinedParams {
  double conv_tol = 1e-6;
  double dt_fast = 0.0;  // <= 0: 0.05 / rate_scale(lindblad)
  double dt_slow = 0.0;  // <= 0: 0.02 / a
  double t_cap = 0.0;    // <= 0: 50/gamma_min + max(200, 60/min_k s_k)/a
};

// Fixed-step RK4 in two phases matched to the two time scales: the fast
// step until t >= 50/gamma_min and the coherences have died
// (||rho - pinch(rho)||_F <= 1e-10, at which point the residual is zeroed
// and the state renormalized, an O(1e-22) projection), then the slow step
// until convergence. Positivity guard: an eigenvalue below -1e-8 clips the
// spectrum at zero and renormalizes the trace. Converged(i) once
// ||rho - P_i/d_i||_F <= conv_tol; Unresolved at t_cap.
CombinedOutcome integrate_combined(const DensityMatrix& rho0, const CombinedSpec& spec,
                                   const CombinedParams& params = {});

struct CombinedExperimentOptions {
  double conv_tol = 1e-6;
  double dt_fast = 0.0;
  double dt_slow = 0.0;
  double t_cap = 0.0;
  int threads = 1;
};

// Monte Carlo over uniform mu_ext draws (stream_id = trial index), one
// integrate_combined run per trial from the same rho0. Born targets are the
// coordinates of restrict_to_algebra(rho0). Bitwise deterministic for fixed
// (rho0, spec fields, trials, seed) regardless of thread count.
OutcomeStats run_combined_experiment(const DensityMatrix& rho0,
                                     const LindbladSpec& lindblad,
                                     const Observable& observable, double a,
                                     std::uint64_t trials, std::uint64_t seed,
                                     const CombinedExperimentOptions& options = {},
                                     std::vector<TrialRecord>* ledger = nullptr);

}  // namespace collapse
