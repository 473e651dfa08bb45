#include "collapse/combined.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <utility>

#include "collapse/measurement.hpp"
#include "collapse/rng.hpp"
#include "trial_loop.hpp"

namespace collapse {

double lambda_max_cached(const ComplexMatrix& rho, const CombinedSpec& spec);

namespace {

// the support threshold shared by the free and the cached lambda paths
constexpr double kSupportTol = 1e-10;

DensityMatrix lift_to_matrix(const Observable& obs, const SimplexPoint& mu) {
  const Eigen::Index n = obs.dim();
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (int k = 0; k < obs.points(); ++k) {
    m += (mu[static_cast<std::size_t>(k)] / obs.degeneracies()[k]) *
         obs.projections()[k];
  }
  return DensityMatrix::validated(m);
}

ComplexMatrix combined_rhs_raw(const ComplexMatrix& rho, const CombinedSpec& spec) {
  ComplexMatrix out = lindblad_rhs(rho, spec.lindblad());
  if (spec.a() == 0.0) return out;
  const double lam = lambda_max_cached(rho, spec);
  const ComplexMatrix f =
      spec.a() * (lam * rho * rho - spec.sqrt_mu_ext() * rho * spec.sqrt_mu_ext());
  out += f - rho * f.trace();
  return out;
}

}  // namespace

double lambda_max_matrix(const DensityMatrix& rho, const DensityMatrix& mu_ext,
                         double support_tol) {
  if (rho.dim() != mu_ext.dim()) {
    throw ValidationError("lambda_max_matrix: dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(mu_ext.matrix());
  if (es.info() != Eigen::Success) {
    throw NumericalError("lambda_max_matrix: eigensolver failed on mu_ext");
  }
  const Eigen::Index n = mu_ext.dim();
  ComplexMatrix w = ComplexMatrix::Zero(n, n);
  double escape = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double d = es.eigenvalues()(j);
    const ComplexVector v = es.eigenvectors().col(j);
    if (d > support_tol) {
      w += (1.0 / std::sqrt(d)) * v * v.adjoint();
    } else {
      escape += (v.adjoint() * rho.matrix() * v)(0, 0).real();
    }
  }
  if (escape > support_tol) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> pencil(
      hermitian_part(w * rho.matrix() * w), Eigen::EigenvaluesOnly);
  const double top = pencil.eigenvalues().maxCoeff();
  if (!(top > 0.0)) return 1.0;
  return std::min(1.0, 1.0 / top);
}

double lambda_max_cached(const ComplexMatrix& rho, const CombinedSpec& spec) {
  const double escape = (spec.escape_projector_ * rho).trace().real();
  if (escape > kSupportTol) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> pencil(
      hermitian_part(spec.w_ * rho * spec.w_), Eigen::EigenvaluesOnly);
  const double top = pencil.eigenvalues().maxCoeff();
  if (!(top > 0.0)) return 1.0;
  return std::min(1.0, 1.0 / top);
}

CombinedSpec::CombinedSpec(LindbladSpec lindblad, Observable observable,
                           SimplexPoint mu_ext, double a)
    : lindblad_(std::move(lindblad)),
      observable_(std::move(observable)),
      mu_ext_(std::move(mu_ext)),
      a_(a),
      mu_ext_matrix_(lift_to_matrix(observable_, mu_ext_)),
      sqrt_mu_ext_(ComplexMatrix::Zero(observable_.dim(), observable_.dim())),
      w_(ComplexMatrix::Zero(observable_.dim(), observable_.dim())),
      escape_projector_(ComplexMatrix::Zero(observable_.dim(), observable_.dim())),
      slowest_rate_(0.0),
      fast_scale_(0.0) {
  if (a_ < 0.0) throw ValidationError("CombinedSpec: a must be >= 0");
  if (static_cast<std::size_t>(observable_.points()) != mu_ext_.m()) {
    throw ValidationError("CombinedSpec: mu_ext size must match spectral points");
  }
  if (lindblad_.dim() != observable_.dim()) {
    throw ValidationError("CombinedSpec: dimension mismatch");
  }
  const DecoherenceReport report = check_decoherence(lindblad_, observable_);
  if (!report.generated_algebra_matches || !report.all_initial_converge) {
    throw ValidationError(
        "CombinedSpec: Lindblad part does not decohere onto the observable "
        "from every initial state");
  }
  const ComplexMatrix& a_mat = observable_.op().matrix();
  const ComplexMatrix& mu_mat = mu_ext_matrix_.matrix();
  if ((mu_mat * a_mat - a_mat * mu_mat).cwiseAbs().maxCoeff() > 1e-12) {
    throw NumericalError("CombinedSpec: [mu_ext, A] != 0");
  }
  for (int k = 0; k < observable_.points(); ++k) {
    const double weight = mu_ext_[static_cast<std::size_t>(k)] /
                          observable_.degeneracies()[k];
    sqrt_mu_ext_ += std::sqrt(weight) * observable_.projections()[k];
    if (weight > kSupportTol) {
      w_ += (1.0 / std::sqrt(weight)) * observable_.projections()[k];
    } else {
      escape_projector_ += observable_.projections()[k];
    }
  }
  slowest_rate_ = slowest_decay_rate(lindblad_);
  fast_scale_ = rate_scale(lindblad_);
}

HermitianOperator combined_rhs(const DensityMatrix& rho, const CombinedSpec& spec) {
  if (rho.dim() != spec.dim()) {
    throw ValidationError("combined_rhs: dimension mismatch");
  }
  return HermitianOperator(combined_rhs_raw(rho.matrix(), spec));
}

CombinedOutcome integrate_combined(const DensityMatrix& rho0, const CombinedSpec& spec,
                                   const CombinedParams& params) {
  if (rho0.dim() != spec.dim()) {
    throw ValidationError("integrate_combined: dimension mismatch");
  }
  if (!(params.conv_tol > 0.0)) {
    throw ValidationError("integrate_combined: conv_tol must be > 0");
  }
  const double a = spec.a();
  if (a == 0.0 && params.t_cap <= 0.0) {
    throw ValidationError("integrate_combined: t_cap required when a = 0");
  }
  const double dt_fast =
      params.dt_fast > 0.0 ? params.dt_fast : 0.05 / spec.fast_scale();
  const double dt_slow = params.dt_slow > 0.0 ? params.dt_slow
                         : a > 0.0            ? 0.02 / a
                                              : dt_fast;
  const double t_switch = 50.0 / spec.slowest_rate();
  double t_cap = params.t_cap;
  if (t_cap <= 0.0) {
    const auto& s = spec.mu_ext().coords();
    const double s_min = *std::min_element(s.begin(), s.end());
    t_cap = t_switch + std::max(200.0, 60.0 / std::max(s_min, 1e-300)) / a;
  }

  const int m = spec.observable().points();
  std::vector<ComplexMatrix> targets;
  targets.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    targets.push_back(spec.observable().projections()[i] /
                      static_cast<double>(spec.observable().degeneracies()[i]));
  }
  const auto attracting_vertex = [&](const ComplexMatrix& rho) -> int {
    int best = 0;
    double best_weight = -1.0;
    for (int i = 0; i < m; ++i) {
      const double weight =
          (rho * targets[static_cast<std::size_t>(i)]).trace().real();
      if (weight > best_weight) {
        best_weight = weight;
        best = i;
      }
    }
    return frobenius_distance(rho, targets[static_cast<std::size_t>(best)]) <=
                   params.conv_tol
               ? best
               : -1;
  };

  ComplexMatrix rho = rho0.matrix();
  if (const int w = attracting_vertex(rho); w >= 0) {
    return {CombinedStatus::Converged, w, rho0, 0.0, 0};
  }

  double t = 0.0;
  double dt = dt_fast;
  bool slow_phase = false;
  std::int64_t steps = 0;
  int halvings = 0;
  while (t_cap - t > 1e-12 * t_cap) {
    if (!slow_phase && t >= t_switch) {
      // decoherence is complete once the pinching residual dies; zeroing the
      // leftover (~e^{-gamma t_switch}, far below round-off of what follows)
      // lets the slow phase run at the nonlinear time scale
      const ComplexMatrix pinched = pinch(rho, spec.observable());
      if (frobenius_distance(rho, pinched) <= 1e-10) {
        rho = pinched / pinched.trace().real();
        slow_phase = true;
        dt = dt_slow;
      }
    }
    const double h = std::min(dt, t_cap - t);
    const ComplexMatrix k1 = combined_rhs_raw(rho, spec);
    const ComplexMatrix k2 = combined_rhs_raw(rho + 0.5 * h * k1, spec);
    const ComplexMatrix k3 = combined_rhs_raw(rho + 0.5 * h * k2, spec);
    const ComplexMatrix k4 = combined_rhs_raw(rho + h * k3, spec);
    ComplexMatrix next = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double drift = std::abs(next.trace().real() - 1.0);
    if (drift > 1e-9) {
      if (++halvings > 20) {
        throw NumericalError("integrate_combined: step underflow after 20 halvings");
      }
      dt *= 0.5;
      continue;
    }
    next = hermitian_part(next);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(next);
    if (es.eigenvalues().minCoeff() < -1e-8) {
      // positivity guard: clip the spectrum at zero and renormalize
      const Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
      next = es.eigenvectors() * clipped.asDiagonal() *
             es.eigenvectors().adjoint();
    }
    next /= next.trace().real();
    rho = std::move(next);
    t += h;
    ++steps;
    if (const int w = attracting_vertex(rho); w >= 0) {
      return {CombinedStatus::Converged, w, DensityMatrix::validated(rho, 1e-8), t,
              steps};
    }
  }
  return {CombinedStatus::Unresolved, -1, DensityMatrix::validated(rho, 1e-8), t,
          steps};
}

OutcomeStats run_combined_experiment(const DensityMatrix& rho0,
                                     const LindbladSpec& lindblad,
                                     const Observable& observable, double a,
                                     std::uint64_t trials, std::uint64_t seed,
                                     const CombinedExperimentOptions& options,
                                     std::vector<TrialRecord>* ledger) {
  if (trials < 1) {
    throw ValidationError("run_combined_experiment: trials must be >= 1");
  }
  if (!(a > 0.0)) throw ValidationError("run_combined_experiment: a must be > 0");
  const SimplexPoint mu0 = restrict_to_algebra(rho0, observable);
  const std::size_t m = mu0.m();

  std::vector<int> outcomes(trials, -1);
  std::vector<double> times(trials, 0.0);
  detail::parallel_for_trials(trials, options.threads, [&](std::uint64_t t) {
    std::mt19937_64 eng = RngStream{seed, t}.make_engine();
    const SimplexPoint mu_ext = sample_simplex_uniform(m, eng);
    const CombinedSpec spec(lindblad, observable, mu_ext, a);
    CombinedParams params;
    params.conv_tol = options.conv_tol;
    params.dt_fast = options.dt_fast;
    params.dt_slow = options.dt_slow;
    params.t_cap = options.t_cap;
    const CombinedOutcome out = integrate_combined(rho0, spec, params);
    outcomes[t] = out.converged() ? out.index : -1;
    times[t] = out.t_elapsed;
  });

  std::vector<std::uint64_t> counts(m, 0);
  std::uint64_t unresolved = 0;
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
  return summarize_counts(born_probabilities(mu0), trials, std::move(counts),
                          unresolved);
}

}  // namespace collapse
