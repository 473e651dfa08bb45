#include "collapse/lindblad.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "collapse/measurement.hpp"

namespace collapse {

LindbladSpec::LindbladSpec(HermitianOperator h_in, std::vector<ComplexMatrix> jumps)
    : h(std::move(h_in)), jump_ops(std::move(jumps)) {
  for (const auto& v : jump_ops) {
    if (v.rows() != h.dim() || v.cols() != h.dim()) {
      throw ValidationError("LindbladSpec: jump operator dimension mismatch");
    }
  }
}

LindbladSpec dephasing(const Observable& a, const std::vector<double>& gamma) {
  if (static_cast<int>(gamma.size()) != a.points()) {
    throw ValidationError("dephasing: need one rate per spectral point");
  }
  std::vector<ComplexMatrix> jumps;
  jumps.reserve(gamma.size());
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    if (gamma[k] < 0.0) throw ValidationError("dephasing: negative rate");
    jumps.push_back(std::sqrt(gamma[k]) * a.projections()[k]);
  }
  const Eigen::Index n = a.dim();
  return LindbladSpec(HermitianOperator(ComplexMatrix::Zero(n, n)),
                      std::move(jumps));
}

LindbladSpec dephasing(const Observable& a, double gamma) {
  return dephasing(a, std::vector<double>(static_cast<std::size_t>(a.points()),
                                          gamma));
}

ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const LindbladSpec& spec) {
  const ComplexMatrix& h = spec.h.matrix();
  ComplexMatrix out = Complex(0, -1) * (h * rho - rho * h);
  for (const auto& v : spec.jump_ops) {
    const ComplexMatrix vdv = v.adjoint() * v;
    out += v * rho * v.adjoint() - 0.5 * (vdv * rho + rho * vdv);
  }
  return out;
}

ComplexMatrix heisenberg_rhs(const ComplexMatrix& b, const LindbladSpec& spec) {
  const ComplexMatrix& h = spec.h.matrix();
  ComplexMatrix out = Complex(0, 1) * (h * b - b * h);
  for (const auto& v : spec.jump_ops) {
    const ComplexMatrix vdv = v.adjoint() * v;
    out += v.adjoint() * b * v - 0.5 * (vdv * b + b * vdv);
  }
  return out;
}

double rate_scale(const LindbladSpec& spec) {
  double scale = 0.0;
  for (const auto& v : spec.jump_ops) {
    Eigen::JacobiSVD<ComplexMatrix> svd(v);
    const double s = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
    scale = std::max(scale, s * s);
  }
  if (scale == 0.0) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(spec.h.matrix(),
                                                    Eigen::EigenvaluesOnly);
    scale = es.eigenvalues().cwiseAbs().maxCoeff();
  }
  return scale > 0.0 ? scale : 1.0;
}

Trajectory integrate_lindblad(const DensityMatrix& rho0, const LindbladSpec& spec,
                              double t_final, double dt, int stride) {
  if (rho0.dim() != spec.dim()) {
    throw ValidationError("integrate_lindblad: dimension mismatch");
  }
  if (!(t_final > 0.0)) throw ValidationError("integrate_lindblad: t_final must be > 0");
  if (stride < 1) throw ValidationError("integrate_lindblad: stride must be >= 1");
  if (dt <= 0.0) dt = 0.01 / rate_scale(spec);

  Trajectory traj;
  traj.push_back({0.0, rho0});
  ComplexMatrix rho = rho0.matrix();
  double t = 0.0;
  int halvings = 0;
  std::int64_t accepted = 0;
  // stored states carry the trajectory positivity guarantee (-1e-8), which
  // is looser than the constructor default
  const double psd_tol = 1e-8;

  while (t < t_final - 1e-15 * t_final) {
    const double step = std::min(dt, t_final - t);
    const ComplexMatrix k1 = lindblad_rhs(rho, spec);
    const ComplexMatrix k2 = lindblad_rhs(rho + 0.5 * step * k1, spec);
    const ComplexMatrix k3 = lindblad_rhs(rho + 0.5 * step * k2, spec);
    const ComplexMatrix k4 = lindblad_rhs(rho + step * k3, spec);
    ComplexMatrix next = rho + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double drift = std::abs(next.trace().real() - 1.0);
    if (drift > 1e-9) {
      if (++halvings > 20) {
        std::ostringstream os;
        os << "integrate_lindblad: step-size underflow after 20 halvings "
              "(trace drift "
           << drift << " at t=" << t << ")";
        throw NumericalError(os.str());
      }
      dt *= 0.5;
      continue;
    }
    next = hermitian_part(next);
    next /= next.trace().real();
    rho = std::move(next);
    t += step;
    ++accepted;
    if (accepted % stride == 0 || t >= t_final - 1e-15 * t_final) {
      traj.push_back({t, DensityMatrix::validated(rho, psd_tol)});
    }
  }
  return traj;
}

DecoherenceReport check_decoherence(const LindbladSpec& spec, const Observable& a,
                                    double tol) {
  if (spec.dim() != a.dim()) {
    throw ValidationError("check_decoherence: dimension mismatch");
  }
  const Eigen::Index n = spec.dim();
  std::vector<ComplexMatrix> jump_gens;
  for (const auto& v : spec.jump_ops) {
    jump_gens.push_back(v);
    jump_gens.push_back(v.adjoint());
  }
  // the generated unital algebra of an empty family is the scalars
  if (jump_gens.empty()) jump_gens.push_back(ComplexMatrix::Identity(n, n));

  std::vector<ComplexMatrix> full_gens = jump_gens;
  full_gens.push_back(spec.h.matrix());

  const AlgebraBasis generated = double_commutant(full_gens);
  const AlgebraBasis jump_generated = double_commutant(jump_gens);
  const AlgebraBasis target = spectral_algebra(a);

  DecoherenceReport report;
  report.generated_dim = generated.dim();
  report.jump_generated_dim = jump_generated.dim();
  report.observable_dim = target.dim();
  report.generated_algebra_matches = algebra_equal(generated, target, tol);
  report.all_initial_converge = algebra_equal(generated, jump_generated, tol);
  return report;
}

ComplexMatrix superoperator_matrix(const LindbladSpec& spec) {
  const Eigen::Index n = spec.dim();
  const Eigen::Index n2 = n * n;
  ComplexMatrix m(n2, n2);
  for (Eigen::Index j = 0; j < n2; ++j) {
    // j-th basis matrix E_{j % n, j / n} in column-major vec order
    ComplexMatrix e = ComplexMatrix::Zero(n, n);
    e(j % n, j / n) = 1.0;
    const ComplexMatrix img = lindblad_rhs(e, spec);
    m.col(j) = Eigen::Map<const ComplexVector>(img.data(), n2);
  }
  return m;
}

SuperoperatorSpectrum superoperator_spectrum(const LindbladSpec& spec, double tol) {
  if (!(tol > 0.0)) throw ValidationError("superoperator_spectrum: tol must be > 0");
  Eigen::ComplexEigenSolver<ComplexMatrix> es(superoperator_matrix(spec), false);
  if (es.info() != Eigen::Success) {
    throw NumericalError("superoperator_spectrum: eigensolver failed");
  }
  SuperoperatorSpectrum out;
  out.tol = tol;
  out.eigenvalues.assign(es.eigenvalues().data(),
                         es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(),
            [](const Complex& a, const Complex& b) {
              if (a.real() != b.real()) return a.real() > b.real();
              return a.imag() < b.imag();
            });
  out.max_re = out.eigenvalues.front().real();
  for (const Complex& lam : out.eigenvalues) {
    if (std::abs(lam.real()) <= tol) {
      ++out.zero_real_dim;
      if (std::abs(lam.imag()) <= tol) ++out.zero_subspace_dim;
    }
  }
  return out;
}

double slowest_decay_rate(const LindbladSpec& spec, double tol) {
  const SuperoperatorSpectrum sp = superoperator_spectrum(spec, tol);
  double slowest = 0.0;
  for (const Complex& lam : sp.eigenvalues) {
    if (lam.real() < -tol) {
      const double rate = -lam.real();
      if (slowest == 0.0 || rate < slowest) slowest = rate;
    }
  }
  if (slowest == 0.0) {
    throw NumericalError("slowest_decay_rate: generator has no decaying modes");
  }
  return slowest;
}

DensityMatrix asymptotic_state(const DensityMatrix& rho0, const LindbladSpec& spec,
                               const Observable& a, double eps, double t_cap) {
  if (!(eps > 0.0)) throw ValidationError("asymptotic_state: eps must be > 0");
  double gamma_min = 0.0;
  try {
    gamma_min = slowest_decay_rate(spec);
  } catch (const NumericalError&) {
    // purely oscillatory or frozen generator: nothing relaxes, so there is
    // no asymptotic state to report
    throw NonConvergenceError(
        "asymptotic_state: generator has no decaying modes");
  }
  if (t_cap <= 0.0) t_cap = 50.0 / gamma_min;
  const double residual_gate = eps * gamma_min;
  const double dt = 0.01 / rate_scale(spec);

  ComplexMatrix rho = rho0.matrix();
  double t = 0.0;
  bool settled = frobenius_distance(lindblad_rhs(rho, spec),
                                    ComplexMatrix::Zero(rho.rows(), rho.cols())) <
                 residual_gate;
  while (!settled && t < t_cap) {
    const double step = std::min(dt, t_cap - t);
    const ComplexMatrix k1 = lindblad_rhs(rho, spec);
    const ComplexMatrix k2 = lindblad_rhs(rho + 0.5 * step * k1, spec);
    const ComplexMatrix k3 = lindblad_rhs(rho + 0.5 * step * k2, spec);
    const ComplexMatrix k4 = lindblad_rhs(rho + step * k3, spec);
    rho = hermitian_part(rho + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    rho /= rho.trace().real();
    t += step;
    settled = lindblad_rhs(rho, spec).norm() < residual_gate;
  }
  if (!settled) {
    std::ostringstream os;
    os << "asymptotic_state: residual gate not reached by t_cap=" << t_cap
       << " (spec likely fails the all-initial-states criterion)";
    throw NonConvergenceError(os.str());
  }
  const ComplexMatrix target = pinch(rho0.matrix(), a);
  const double gap = frobenius_distance(rho, target);
  if (gap > 10.0 * eps) {
    std::ostringstream os;
    os << "asymptotic_state: limit differs from the pinching of rho0 by " << gap
       << " (> 10*eps); generator does not decohere onto this observable";
    throw NonConvergenceError(os.str());
  }
  return DensityMatrix::validated(rho, 1e-8);
}

}  // namespace collapse
