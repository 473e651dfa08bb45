#pragma once

#include <cstdint>
#include <vector>

#include "collapse/simplex.hpp"

namespace collapse {

// Largest kappa in [0,1] such that mu_ext - kappa*mu is still componentwise
// nonnegative: min(1, min over supported coordinates of s_k / r_k).
// Unsupported coordinates (r_k = 0) impose no constraint and are skipped.
double lambda_max(const SimplexPoint& mu, const SimplexPoint& mu_ext);

struct Classification {
  int index;              // unique argmin of s_k / r_k, or -1 on a tie
  std::vector<int> tied;  // every supported index within tie_tol of the minimum
  bool boundary() const { return index < 0; }
};

// Decides which vertex attracts mu under the external state mu_ext by
// comparing the ratios s_k / r_k over supported coordinates. Ties within
// tie_tol (exact constructions such as mu == mu_ext) report Boundary.
Classification classify_subsimplex(const SimplexPoint& mu, const SimplexPoint& mu_ext,
                                   double tie_tol = 1e-12);

// F_k = f_k - r_k * sum_j f_j with f_k = a * r_k * (lambda * r_k - s_k) and
// lambda = lambda_max(mu, mu_ext). Sums to zero and vanishes on unsupported
// coordinates, so boundary faces are invariant.
std::vector<double> purification_rhs(const SimplexPoint& mu, const SimplexPoint& mu_ext,
                                     double a);

// The same tangent vector assembled as a nonnegative combination of the cone
// directions (mu - e_k) around the winning vertex i:
//   F = a * sum_{k != i} r_k * (s_k - (s_i/r_i) r_k) * (mu - e_k).
// Throws ValidationError on a tied classification. Kept as an independent
// cross-check of purification_rhs; do not fold the two implementations.
std::vector<double> cone_form_rhs(const SimplexPoint& mu, const SimplexPoint& mu_ext,
                                  double a);

// K_i = a * (4 + 6 / s_i), a Lipschitz bound for the tangent field on the
// domain cone of vertex i. Unbounded (ValidationError) when s_i = 0.
double lipschitz_constant(const SimplexPoint& mu_ext, int i, double a);

enum class PurificationStatus { Converged, Unresolved };

struct PurificationOutcome {
  PurificationStatus status;
  int index;  // winning vertex when Converged, -1 otherwise
  SimplexPoint final_state;
  double t_elapsed;
  std::int64_t steps;

  bool converged() const { return status == PurificationStatus::Converged; }
};

struct PurificationParams {
  double a = 1.0;
  double dt = 0.0;        // <= 0 selects 0.02 / a
  double conv_tol = 1e-6;
  double t_cap = 0.0;     // <= 0 selects 200 / a
};

struct PurificationTracePoint {
  double t;
  SimplexPoint state;
  double lambda;
  int domain_index;  // -1 when the classification ties
};

// Fixed-step RK4 on the simplex. A step that drives any coordinate below
// -1e-12 is rejected and retried at half the step size (NumericalError after
// 40 halvings); round-off in [-1e-12, 0) is clamped to zero and the point
// renormalized. Converged(i) once ||mu - e_i||_inf <= conv_tol, which on the
// simplex reduces to max_k r_k >= 1 - conv_tol; Unresolved at t_cap. A mu0
// already within conv_tol of a vertex converges at t = 0 with zero steps.
// When trace is non-null, records the initial point, every trace_stride-th
// accepted step, and the final point.
PurificationOutcome integrate_purification(
    const SimplexPoint& mu0, const SimplexPoint& mu_ext,
    const PurificationParams& params = {},
    std::vector<PurificationTracePoint>* trace = nullptr, int trace_stride = 1);

}  // namespace collapse
