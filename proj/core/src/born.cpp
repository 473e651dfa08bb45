#include "collapse/born.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "collapse/errors.hpp"
#include "collapse/rng.hpp"
#include "trial_loop.hpp"

namespace collapse {
namespace {

double adaptive_t_cap(const SimplexPoint& mu_ext, double a) {
  const auto& s = mu_ext.coords();
  const double s_min = *std::min_element(s.begin(), s.end());
  // slowest contraction toward a vertex is at rate a * s_k of the losing
  // coordinate with the smallest target weight
  return std::max(200.0, 60.0 / std::max(s_min, 1e-300)) / a;
}

void tally_and_ledger(const std::vector<int>& outcomes, const std::vector<double>& times,
                      std::size_t m, std::vector<std::uint64_t>& counts,
                      std::uint64_t& unresolved, std::vector<TrialRecord>* ledger) {
  counts.assign(m, 0);
  unresolved = 0;
  const std::uint64_t trials = outcomes.size();
  for (std::uint64_t t = 0; t < trials; ++t) {
    if (outcomes[t] >= 0) {
      ++counts[static_cast<std::size_t>(outcomes[t])];
    } else {
      ++unresolved;
    }
  }
  if (ledger != nullptr) {
    ledger->clear();
    ledger->reserve(trials);
    for (std::uint64_t t = 0; t < trials; ++t) {
      ledger->push_back({t, outcomes[t], times[t]});
    }
  }
}

}  // namespace

std::vector<double> born_probabilities(const SimplexPoint& mu0) {
  return mu0.coords();
}

double attractor_volume_oracle(const SimplexPoint& mu0, int i) {
  if (i < 0 || static_cast<std::size_t>(i) >= mu0.m()) {
    throw ValidationError("attractor_volume_oracle: index out of range");
  }
  return mu0[static_cast<std::size_t>(i)];
}

OutcomeStats summarize_counts(std::vector<double> born, std::uint64_t trials,
                              std::vector<std::uint64_t> counts,
                              std::uint64_t unresolved) {
  if (born.size() != counts.size()) {
    throw ValidationError("summarize_counts: born/counts size mismatch");
  }
  OutcomeStats stats;
  stats.trials = trials;
  stats.counts = std::move(counts);
  stats.unresolved = unresolved;
  stats.born = std::move(born);
  const std::size_t m = stats.born.size();
  stats.frequencies.resize(m);
  stats.stderrs.resize(m);
  const double n = static_cast<double>(trials);
  const double resolved = n - static_cast<double>(unresolved);
  for (std::size_t k = 0; k < m; ++k) {
    stats.frequencies[k] = static_cast<double>(stats.counts[k]) / n;
    const double p = stats.born[k];
    stats.stderrs[k] = std::sqrt(p * (1.0 - p) / n);
    stats.max_abs_dev =
        std::max(stats.max_abs_dev, std::abs(stats.frequencies[k] - p));
    if (p > 0.0 && resolved > 0.0) {
      const double expected = resolved * p;
      const double diff = static_cast<double>(stats.counts[k]) - expected;
      stats.chi_square += diff * diff / expected;
    }
  }
  return stats;
}

OutcomeStats run_experiment(const SimplexPoint& mu0, std::uint64_t trials, double a,
                            std::uint64_t seed, RunMode mode,
                            const ExperimentOptions& options,
                            std::vector<TrialRecord>* ledger) {
  if (trials < 1) throw ValidationError("run_experiment: trials must be >= 1");
  if (!(a > 0.0)) throw ValidationError("run_experiment: a must be > 0");
  const std::size_t m = mu0.m();

  std::vector<int> outcomes(trials, -1);
  std::vector<double> times(trials, 0.0);
  detail::parallel_for_trials(trials, options.threads, [&](std::uint64_t t) {
    std::mt19937_64 eng = RngStream{seed, t}.make_engine();
    const SimplexPoint mu_ext = sample_simplex_uniform(m, eng);
    if (mode == RunMode::classify_only) {
      outcomes[t] = classify_subsimplex(mu0, mu_ext).index;
      return;
    }
    PurificationParams params;
    params.a = a;
    params.dt = options.dt;
    params.conv_tol = options.conv_tol;
    params.t_cap = options.t_cap > 0.0 ? options.t_cap : adaptive_t_cap(mu_ext, a);
    const PurificationOutcome out = integrate_purification(mu0, mu_ext, params);
    outcomes[t] = out.converged() ? out.index : -1;
    times[t] = out.t_elapsed;
  });

  std::vector<std::uint64_t> counts;
  std::uint64_t unresolved = 0;
  tally_and_ledger(outcomes, times, m, counts, unresolved, ledger);
  return summarize_counts(born_probabilities(mu0), trials, std::move(counts),
                          unresolved);
}

InterruptedResult interrupted_experiment(const SimplexPoint& mu0, double t_interrupt,
                                         std::uint64_t trials, double a,
                                         std::uint64_t seed,
                                         const ExperimentOptions& options,
                                         std::vector<TrialRecord>* ledger) {
  if (trials < 1) {
    throw ValidationError("interrupted_experiment: trials must be >= 1");
  }
  if (!(a > 0.0)) throw ValidationError("interrupted_experiment: a must be > 0");
  if (t_interrupt < 0.0) {
    throw ValidationError("interrupted_experiment: t_interrupt must be >= 0");
  }
  const std::size_t m = mu0.m();
  constexpr std::uint64_t kStageOneBit = std::uint64_t{1} << 63;

  InterruptedResult result;
  result.intermediates.assign(trials, mu0);
  std::vector<int> outcomes(trials, -1);
  std::vector<double> times(trials, 0.0);
  detail::parallel_for_trials(trials, options.threads, [&](std::uint64_t t) {
    // stage one: evolve under the first draw up to the interruption time,
    // with the convergence gate effectively disabled (a trajectory that hits
    // a vertex exactly is a fixed point, so stopping there is equivalent)
    if (t_interrupt > 0.0) {
      std::mt19937_64 eng1 = RngStream{seed, t | kStageOneBit}.make_engine();
      const SimplexPoint mu_ext1 = sample_simplex_uniform(m, eng1);
      PurificationParams stage1;
      stage1.a = a;
      stage1.dt = options.dt;
      stage1.conv_tol = 1e-300;
      stage1.t_cap = t_interrupt;
      result.intermediates[t] =
          integrate_purification(mu0, mu_ext1, stage1).final_state;
    }
    // stage two: independent redraw, run to convergence; stream ids chosen
    // so t_interrupt = 0 reproduces run_experiment bit for bit
    std::mt19937_64 eng2 = RngStream{seed, t}.make_engine();
    const SimplexPoint mu_ext2 = sample_simplex_uniform(m, eng2);
    PurificationParams stage2;
    stage2.a = a;
    stage2.dt = options.dt;
    stage2.conv_tol = options.conv_tol;
    stage2.t_cap = options.t_cap > 0.0 ? options.t_cap : adaptive_t_cap(mu_ext2, a);
    const PurificationOutcome out =
        integrate_purification(result.intermediates[t], mu_ext2, stage2);
    outcomes[t] = out.converged() ? out.index : -1;
    times[t] = out.t_elapsed;
  });

  std::vector<std::uint64_t> counts;
  std::uint64_t unresolved = 0;
  tally_and_ledger(outcomes, times, m, counts, unresolved, ledger);
  result.stats = summarize_counts(born_probabilities(mu0), trials,
                                  std::move(counts), unresolved);

  result.intermediate_mean.assign(m, 0.0);
  result.intermediate_stderr.assign(m, 0.0);
  for (const SimplexPoint& p : result.intermediates) {
    for (std::size_t k = 0; k < m; ++k) result.intermediate_mean[k] += p[k];
  }
  const double n = static_cast<double>(trials);
  for (std::size_t k = 0; k < m; ++k) result.intermediate_mean[k] /= n;
  if (trials > 1) {
    for (const SimplexPoint& p : result.intermediates) {
      for (std::size_t k = 0; k < m; ++k) {
        const double d = p[k] - result.intermediate_mean[k];
        result.intermediate_stderr[k] += d * d;
      }
    }
    for (std::size_t k = 0; k < m; ++k) {
      result.intermediate_stderr[k] =
          std::sqrt(result.intermediate_stderr[k] / (n * (n - 1.0)));
    }
  }
  return result;
}

}  // namespace collapse
