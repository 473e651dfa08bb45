#pragma once

#include <cstdint>
#include <vector>

#include "collapse/purification.hpp"
#include "collapse/simplex.hpp"

namespace collapse {

enum class RunMode { full_ode, classify_only };

struct TrialRecord {
  std::uint64_t trial;
  int outcome;         // winning vertex, -1 when unresolved
  double t_converged;  // elapsed dynamical time (0 in classify_only mode)
};

struct OutcomeStats {
  std::uint64_t trials = 0;
  std::vector<std::uint64_t> counts;  // per-vertex Converged(i) tallies
  std::uint64_t unresolved = 0;
  std::vector<double> frequencies;    // counts / trials
  std::vector<double> born;           // analytic targets r_i(0)
  std::vector<double> stderrs;        // sqrt(born_i (1 - born_i) / trials)
  double max_abs_dev = 0.0;           // max_i |frequencies_i - born_i|
  // Pearson statistic of the resolved counts against (trials - unresolved)
  // times the target probabilities, summed over targets > 0.
  double chi_square = 0.0;
};

// The analytic outcome law: coordinates of mu0 verbatim. Stated separately
// from attractor_volume_oracle because the two play different roles in
// validation (target vector vs per-vertex volume ratio).
std::vector<double> born_probabilities(const SimplexPoint& mu0);

// Relative volume of the attractor region of vertex i inside the parameter
// simplex, by the distance-ratio argument: equals r_i(0). Cross-checked in
// tests against brute-force membership counting with classify_subsimplex.
double attractor_volume_oracle(const SimplexPoint& mu0, int i);

// Derived statistics from raw tallies against target probabilities; shared
// by the simplex and full-matrix experiment runners.
OutcomeStats summarize_counts(std::vector<double> born, std::uint64_t trials,
                              std::vector<std::uint64_t> counts,
                              std::uint64_t unresolved);

struct ExperimentOptions {
  double conv_tol = 1e-6;
  double dt = 0.0;     // <= 0: integrator default 0.02 / a
  // <= 0 selects the adaptive per-trial cap max(200, 60 / min_k s_k) / a,
  // which keeps the unresolved rate at zero in practice: trials whose drawn
  // mu_ext has a tiny coordinate converge at rate a * s_k and need more time
  // than any fixed cap affordable at scale.
  double t_cap = 0.0;
  int threads = 1;
};

// Repeats: draw mu_ext uniformly (stream_id = trial index), evolve mu0 under
// it (full_ode) or classify geometrically (classify_only), tally outcomes.
// Results are bitwise reproducible for fixed (mu0, trials, a, seed, mode)
// regardless of thread count. When ledger is non-null it receives one record
// per trial, in trial order.
OutcomeStats run_experiment(const SimplexPoint& mu0, std::uint64_t trials, double a,
                            std::uint64_t seed, RunMode mode,
                            const ExperimentOptions& options = {},
                            std::vector<TrialRecord>* ledger = nullptr);

struct InterruptedResult {
  OutcomeStats stats;                      // final-outcome statistics
  std::vector<SimplexPoint> intermediates; // mu(t_interrupt), one per trial
  std::vector<double> intermediate_mean;   // coordinate-wise trial mean
  std::vector<double> intermediate_stderr; // standard error of that mean
};

// Two-stage protocol: evolve mu0 under a first uniform draw until
// t_interrupt, then restart the evolution from the intermediate state under
// an independent second draw and run to convergence. Stream policy: stage
// one uses stream_id = trial | (1 << 63), stage two uses stream_id = trial,
// so at t_interrupt = 0 the second stage reproduces run_experiment(full_ode)
// with the same seed bit for bit.
InterruptedResult interrupted_experiment(const SimplexPoint& mu0, double t_interrupt,
                                         std::uint64_t trials, double a,
                                         std::uint64_t seed,
                                         const ExperimentOptions& options = {},
                                         std::vector<TrialRecord>* ledger = nullptr);

}  // namespace collapse
