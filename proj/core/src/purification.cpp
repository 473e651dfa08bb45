#include "collapse/purification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "collapse/errors.hpp"

namespace collapse {
namespace {

double lambda_max_raw(const double* r, const double* s, int m) {
  double lam = 1.0;
  for (int k = 0; k < m; ++k) {
    if (r[k] > 0.0) {
      const double q = s[k] / r[k];
      if (q < lam) lam = q;
    }
  }
  return lam;
}

void rhs_raw(const double* r, const double* s, int m, double a, double* out) {
  const double lam = lambda_max_raw(r, s, m);
  double sum_f = 0.0;
  for (int k = 0; k < m; ++k) {
    out[k] = a * r[k] * (lam * r[k] - s[k]);
    sum_f += out[k];
  }
  for (int k = 0; k < m; ++k) out[k] -= r[k] * sum_f;
}

}  // namespace

double lambda_max(const SimplexPoint& mu, const SimplexPoint& mu_ext) {
  if (mu.m() != mu_ext.m()) throw ValidationError("lambda_max: dimension mismatch");
  return lambda_max_raw(mu.coords().data(), mu_ext.coords().data(),
                        static_cast<int>(mu.m()));
}

Classification classify_subsimplex(const SimplexPoint& mu, const SimplexPoint& mu_ext,
                                   double tie_tol) {
  if (mu.m() != mu_ext.m()) {
    throw ValidationError("classify_subsimplex: dimension mismatch");
  }
  const auto& r = mu.coords();
  const auto& s = mu_ext.coords();
  const int m = static_cast<int>(mu.m());
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < m; ++k) {
    if (r[k] > 0.0) best = std::min(best, s[k] / r[k]);
  }
  Classification out;
  for (int k = 0; k < m; ++k) {
    if (r[k] > 0.0 && s[k] / r[k] <= best + tie_tol) out.tied.push_back(k);
  }
  out.index = out.tied.size() == 1 ? out.tied.front() : -1;
  return out;
}

std::vector<double> purification_rhs(const SimplexPoint& mu, const SimplexPoint& mu_ext,
                                     double a) {
  if (mu.m() != mu_ext.m()) {
    throw ValidationError("purification_rhs: dimension mismatch");
  }
  if (!(a > 0.0)) throw ValidationError("purification_rhs: a must be > 0");
  std::vector<double> out(mu.m());
  rhs_raw(mu.coords().data(), mu_ext.coords().data(), static_cast<int>(mu.m()), a,
          out.data());
  return out;
}

std::vector<double> cone_form_rhs(const SimplexPoint& mu, const SimplexPoint& mu_ext,
                                  double a) {
  if (!(a > 0.0)) throw ValidationError("cone_form_rhs: a must be > 0");
  const Classification cls = classify_subsimplex(mu, mu_ext);
  if (cls.boundary()) {
    throw ValidationError("cone_form_rhs: tied classification, cone direction ambiguous");
  }
  const int i = cls.index;
  const auto& r = mu.coords();
  const auto& s = mu_ext.coords();
  const int m = static_cast<int>(mu.m());
  const double ratio_i = s[i] / r[i];
  std::vector<double> out(mu.m(), 0.0);
  for (int k = 0; k < m; ++k) {
    if (k == i) continue;
    const double c = a * r[k] * (s[k] - ratio_i * r[k]);
    for (int j = 0; j < m; ++j) out[j] += c * r[j];
    out[k] -= c;
  }
  return out;
}

double lipschitz_constant(const SimplexPoint& mu_ext, int i, double a) {
  if (i < 0 || static_cast<std::size_t>(i) >= mu_ext.m()) {
    throw ValidationError("lipschitz_constant: index out of range");
  }
  if (!(a > 0.0)) throw ValidationError("lipschitz_constant: a must be > 0");
  const double s_i = mu_ext[i];
  if (s_i <= 0.0) {
    throw ValidationError("lipschitz_constant: bound is unbounded when s_i = 0");
  }
  return a * (4.0 + 6.0 / s_i);
}

PurificationOutcome integrate_purification(const SimplexPoint& mu0,
                                           const SimplexPoint& mu_ext,
                                           const PurificationParams& params,
                                           std::vector<PurificationTracePoint>* trace,
                                           int trace_stride) {
  if (mu0.m() != mu_ext.m()) {
    throw ValidationError("integrate_purification: dimension mismatch");
  }
  if (!(params.a > 0.0)) throw ValidationError("integrate_purification: a must be > 0");
  if (!(params.conv_tol > 0.0)) {
    throw ValidationError("integrate_purification: conv_tol must be > 0");
  }
  if (trace != nullptr && trace_stride < 1) {
    throw ValidationError("integrate_purification: trace_stride must be >= 1");
  }

  const int m = static_cast<int>(mu0.m());
  const double a = params.a;
  double dt = params.dt > 0.0 ? params.dt : 0.02 / a;
  const double t_cap = params.t_cap > 0.0 ? params.t_cap : 200.0 / a;
  const double* s = mu_ext.coords().data();

  std::vector<double> r = mu0.coords();
  std::vector<double> k1(r.size()), k2(r.size()), k3(r.size()), k4(r.size()),
      stage(r.size()), next(r.size());

  const auto record = [&](double t) {
    if (trace == nullptr) return;
    SimplexPoint p{std::vector<double>(r)};
    const double lam = lambda_max(p, mu_ext);
    const int dom = classify_subsimplex(p, mu_ext).index;
    trace->push_back({t, std::move(p), lam, dom});
  };
  const auto winner = [&]() -> int {
    int arg = 0;
    for (int k = 1; k < m; ++k) {
      if (r[k] > r[arg]) arg = k;
    }
    return r[arg] >= 1.0 - params.conv_tol ? arg : -1;
  };

  record(0.0);
  if (const int w = winner(); w >= 0) {
    return {PurificationStatus::Converged, w, SimplexPoint(std::move(r)), 0.0, 0};
  }

  double t = 0.0;
  std::int64_t steps = 0;
  int halvings = 0;
  while (t_cap - t > 1e-12 * t_cap) {
    const double h = std::min(dt, t_cap - t);
    rhs_raw(r.data(), s, m, a, k1.data());
    for (int j = 0; j < m; ++j) stage[j] = r[j] + 0.5 * h * k1[j];
    rhs_raw(stage.data(), s, m, a, k2.data());
    for (int j = 0; j < m; ++j) stage[j] = r[j] + 0.5 * h * k2[j];
    rhs_raw(stage.data(), s, m, a, k3.data());
    for (int j = 0; j < m; ++j) stage[j] = r[j] + h * k3[j];
    rhs_raw(stage.data(), s, m, a, k4.data());

    bool breach = false;
    double sum = 0.0;
    for (int j = 0; j < m; ++j) {
      double v = r[j] + (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
      if (v < -1e-12) {
        breach = true;
        break;
      }
      if (v < 0.0) v = 0.0;
      next[j] = v;
      sum += v;
    }
    if (breach) {
      if (++halvings > 40) {
        throw NumericalError("integrate_purification: step underflow after 40 halvings");
      }
      dt *= 0.5;
      continue;
    }
    for (int j = 0; j < m; ++j) next[j] /= sum;
    r.swap(next);
    t += h;
    ++steps;
    const bool sampled = trace != nullptr && steps % trace_stride == 0;
    if (sampled) record(t);
    if (const int w = winner(); w >= 0) {
      if (trace != nullptr && !sampled) record(t);
      return {PurificationStatus::Converged, w, SimplexPoint(std::move(r)), t, steps};
    }
  }
  if (trace != nullptr && steps % trace_stride != 0) record(t);
  return {PurificationStatus::Unresolved, -1, SimplexPoint(std::move(r)), t, steps};
}

}  // namespace collapse
