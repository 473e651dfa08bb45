#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "collapse/errors.hpp"
#include "collapse/purification.hpp"
#include "collapse/rng.hpp"
#include "collapse/simplex.hpp"

using Catch::Approx;
using namespace collapse;

namespace {

SimplexPoint interior_point(std::size_t m, std::mt19937_64& eng,
                            double floor = 1e-3) {
  for (;;) {
    SimplexPoint p = sample_simplex_uniform(m, eng);
    double lo = 1.0;
    for (std::size_t k = 0; k < m; ++k) lo = std::min(lo, p[k]);
    if (lo > floor) return p;
  }
}

double sup_dist(const SimplexPoint& a, const SimplexPoint& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.m(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

}  // namespace

TEST_CASE("lambda_max point values") {
  CHECK(lambda_max(SimplexPoint({0.5, 0.5}), SimplexPoint({0.3, 0.7})) ==
        Approx(0.6).margin(1e-15));
  const SimplexPoint p({0.2, 0.3, 0.5});
  CHECK(lambda_max(p, p) == Approx(1.0).margin(1e-15));
  CHECK(lambda_max(SimplexPoint({1.0, 0.0, 0.0}), p) == Approx(0.2).margin(1e-15));
  CHECK_THROWS_AS(lambda_max(SimplexPoint({0.5, 0.5}), p), ValidationError);
}

TEST_CASE("lambda_max is the largest admissible subtraction coefficient") {
  std::mt19937_64 eng(101);
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t m = 2 + static_cast<std::size_t>(rep % 4);
    const SimplexPoint mu = sample_simplex_uniform(m, eng);
    const SimplexPoint ext = sample_simplex_uniform(m, eng);
    const double lam = lambda_max(mu, ext);
    CHECK(lam >= 0.0);
    CHECK(lam <= 1.0);
    double worst = 0.0;
    double worst_pushed = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      worst = std::min(worst, ext[k] - lam * mu[k]);
      worst_pushed = std::min(worst_pushed, ext[k] - (lam + 1e-9) * mu[k]);
    }
    CHECK(worst >= -1e-12);
    // One more 1e-9 of subtraction either breaks positivity or exceeds 1.
    CHECK((worst_pushed < 0.0 || lam + 1e-9 > 1.0));
  }
}

TEST_CASE("subsimplex classification point values") {
  const Classification c1 = classify_subsimplex(
      SimplexPoint({1.0 / 3, 1.0 / 3, 1.0 / 3}), SimplexPoint({0.2, 0.3, 0.5}));
  CHECK_FALSE(c1.boundary());
  CHECK(c1.index == 0);  // smallest ratio 0.2 / (1/3) = 0.6

  const Classification c2 =
      classify_subsimplex(SimplexPoint({0.25, 0.75}), SimplexPoint({0.5, 0.5}));
  CHECK(c2.index == 1);  // ratios 2.0, 0.667

  const SimplexPoint p({0.2, 0.3, 0.5});
  const Classification tie = classify_subsimplex(p, p);
  CHECK(tie.boundary());
  CHECK(tie.tied.size() == 3);
}

TEST_CASE("tangent law point value") {
  // lambda = 0.6, f = (0, -0.2), F = f - mu * sum(f) = (0.1, -0.1).
  const std::vector<double> f =
      purification_rhs(SimplexPoint({0.5, 0.5}), SimplexPoint({0.3, 0.7}), 1.0);
  REQUIRE(f.size() == 2);
  CHECK(f[0] == Approx(0.1).margin(1e-12));
  CHECK(f[1] == Approx(-0.1).margin(1e-12));
}

TEST_CASE("tangent law vanishes at the known fixed points") {
  const SimplexPoint p({0.2, 0.3, 0.5});
  for (double v : purification_rhs(p, p, 1.0)) CHECK(v == 0.0);
  for (std::size_t i = 0; i < 3; ++i) {
    const SimplexPoint vertex = SimplexPoint::vertex(3, i);
    for (double v : purification_rhs(vertex, p, 1.0)) CHECK(v == 0.0);
  }
}

TEST_CASE("tangent law sums to zero and fixes empty coordinates") {
  std::mt19937_64 eng(7);
  for (int rep = 0; rep < 2000; ++rep) {
    const std::size_t m = 2 + static_cast<std::size_t>(rep % 5);
    const SimplexPoint mu = sample_simplex_uniform(m, eng);
    const SimplexPoint ext = sample_simplex_uniform(m, eng);
    const std::vector<double> f = purification_rhs(mu, ext, 1.0);
    double sum = 0.0;
    for (double v : f) sum += v;
    CHECK(std::abs(sum) < 1e-14);
  }
  // Zero coordinates stay exactly zero (face invariance at the rhs level).
  const std::vector<double> f =
      purification_rhs(SimplexPoint({0.0, 0.4, 0.6}), SimplexPoint({0.2, 0.3, 0.5}),
                       1.0);
  CHECK(f[0] == 0.0);
}

TEST_CASE("tangent law is linear in the overall rate") {
  std::mt19937_64 eng(11);
  const SimplexPoint mu = sample_simplex_uniform(4, eng);
  const SimplexPoint ext = sample_simplex_uniform(4, eng);
  const std::vector<double> f1 = purification_rhs(mu, ext, 1.0);
  const std::vector<double> f3 = purification_rhs(mu, ext, 3.0);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(f3[k] == Approx(3.0 * f1[k]).margin(1e-15));
  }
}

TEST_CASE("cone form point value and degenerate cases") {
  const std::vector<double> f =
      cone_form_rhs(SimplexPoint({0.5, 0.5}), SimplexPoint({0.3, 0.7}), 1.0);
  CHECK(f[0] == Approx(0.1).margin(1e-12));
  CHECK(f[1] == Approx(-0.1).margin(1e-12));

  const SimplexPoint p({0.2, 0.3, 0.5});
  CHECK_THROWS_AS(cone_form_rhs(p, p, 1.0), ValidationError);

  for (double v : cone_form_rhs(SimplexPoint::vertex(3, 1), p, 1.0)) {
    CHECK(v == 0.0);
  }
}

TEST_CASE("the two tangent computations agree on random interior pairs") {
  std::mt19937_64 eng(13);
  int compared = 0;
  while (compared < 10000) {
    const std::size_t m = 2 + static_cast<std::size_t>(compared % 5);
    const SimplexPoint mu = sample_simplex_uniform(m, eng);
    const SimplexPoint ext = sample_simplex_uniform(m, eng);
    if (classify_subsimplex(mu, ext).boundary()) continue;
    const std::vector<double> direct = purification_rhs(mu, ext, 1.0);
    const std::vector<double> cone = cone_form_rhs(mu, ext, 1.0);
    double diff = 0.0;
    for (std::size_t k = 0; k < m; ++k) diff = std::max(diff, std::abs(direct[k] - cone[k]));
    CHECK(diff <= 1e-12);
    ++compared;
  }
}

TEST_CASE("cone coefficients are nonnegative off the winning vertex") {
  std::mt19937_64 eng(17);
  for (int rep = 0; rep < 1000; ++rep) {
    const SimplexPoint mu = interior_point(3, eng);
    const SimplexPoint ext = sample_simplex_uniform(3, eng);
    const Classification c = classify_subsimplex(mu, ext);
    if (c.boundary()) continue;
    const std::size_t i = static_cast<std::size_t>(c.index);
    for (std::size_t k = 0; k < 3; ++k) {
      if (k == i) continue;
      CHECK(ext[k] - (ext[i] / mu[i]) * mu[k] >= -1e-12);
    }
  }
}

TEST_CASE("Lipschitz constant values and domain of validity") {
  CHECK(lipschitz_constant(SimplexPoint({1.0, 0.0}), 0, 1.0) ==
        Approx(10.0).margin(1e-12));
  CHECK(lipschitz_constant(SimplexPoint({0.5, 0.5}), 0, 1.0) ==
        Approx(16.0).margin(1e-12));
  CHECK(lipschitz_constant(SimplexPoint({0.5, 0.5}), 1, 2.0) ==
        Approx(32.0).margin(1e-12));
  CHECK_THROWS_AS(lipschitz_constant(SimplexPoint({1.0, 0.0}), 1, 1.0),
                  ValidationError);
}

TEST_CASE("empirical Lipschitz bound inside a common domain cone") {
  std::mt19937_64 eng(19);
  int checked = 0;
  while (checked < 1000) {
    const SimplexPoint ext = interior_point(3, eng, 0.05);
    const SimplexPoint mu1 = sample_simplex_uniform(3, eng);
    const SimplexPoint mu2 = sample_simplex_uniform(3, eng);
    const Classification c1 = classify_subsimplex(mu1, ext);
    const Classification c2 = classify_subsimplex(mu2, ext);
    if (c1.boundary() || c2.boundary() || c1.index != c2.index) continue;
    const double k = lipschitz_constant(ext, c1.index, 1.0);
    const std::vector<double> f1 = purification_rhs(mu1, ext, 1.0);
    const std::vector<double> f2 = purification_rhs(mu2, ext, 1.0);
    double df = 0.0;
    for (std::size_t j = 0; j < 3; ++j) df = std::max(df, std::abs(f1[j] - f2[j]));
    CHECK(df <= k * sup_dist(mu1, mu2) + 1e-14);
    ++checked;
  }
}

TEST_CASE("integration from a vertex returns immediately") {
  const SimplexPoint ext({0.2, 0.3, 0.5});
  const PurificationOutcome out =
      integrate_purification(SimplexPoint::vertex(3, 2), ext);
  CHECK(out.converged());
  CHECK(out.index == 2);
  CHECK(out.t_elapsed == 0.0);
  CHECK(out.steps == 0);
}

TEST_CASE("the coincidence point is an exact unstable fixed point") {
  const SimplexPoint p({0.2, 0.3, 0.5});
  PurificationParams params;
  params.t_cap = 5.0;  // keep the capped run cheap
  const PurificationOutcome out = integrate_purification(p, p, params);
  CHECK_FALSE(out.converged());
  CHECK(out.index == -1);
  CHECK(out.t_elapsed == Approx(5.0).margin(1e-9));
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(out.final_state[k] == Approx(p[k]).margin(1e-15));
  }
}

TEST_CASE("two-point example converges to the classified vertex") {
  const PurificationOutcome out = integrate_purification(
      SimplexPoint({0.25, 0.75}), SimplexPoint({0.5, 0.5}));
  CHECK(out.converged());
  CHECK(out.index == 1);
  CHECK(std::abs(out.final_state[1] - 1.0) <= 1e-6);
  CHECK(out.t_elapsed > 0.0);
  CHECK(out.steps > 0);
}

TEST_CASE("attractor matches the classification oracle on random pairs") {
  std::mt19937_64 eng(23);
  // Loser coordinates decay at rate a*s_k, so keep mu_ext away from the
  // boundary and give the capped run enough room to resolve every trial.
  PurificationParams params;
  params.t_cap = 500.0;
  int runs = 0;
  while (runs < 300) {
    const std::size_t m = 2 + static_cast<std::size_t>(runs % 3);
    const SimplexPoint mu0 = interior_point(m, eng, 1e-2);
    const SimplexPoint ext = interior_point(m, eng, 0.05);
    const Classification c = classify_subsimplex(mu0, ext);
    if (c.boundary()) continue;
    const PurificationOutcome out = integrate_purification(mu0, ext, params);
    REQUIRE(out.converged());
    CHECK(out.index == c.index);
    ++runs;
  }
}

TEST_CASE("trajectories respect the simplex invariants") {
  std::mt19937_64 eng(29);
  const SimplexPoint mu0 = interior_point(4, eng, 1e-2);
  const SimplexPoint ext = interior_point(4, eng, 0.1);
  const Classification c = classify_subsimplex(mu0, ext);
  REQUIRE_FALSE(c.boundary());

  std::vector<PurificationTracePoint> trace;
  const PurificationOutcome out =
      integrate_purification(mu0, ext, {}, &trace, 1);
  REQUIRE(out.converged());
  REQUIRE(trace.size() > 2);
  CHECK(trace.front().t == 0.0);
  for (const auto& point : trace) {
    double sum = 0.0, lo = 1.0;
    for (std::size_t k = 0; k < 4; ++k) {
      sum += point.state[k];
      lo = std::min(lo, point.state[k]);
    }
    CHECK(std::abs(sum - 1.0) < 1e-10);
    CHECK(lo >= -1e-10);
    CHECK(point.lambda >= 0.0);
    CHECK(point.lambda <= 1.0);
    CHECK(point.domain_index == c.index);  // domain constancy along the flow
  }
}

TEST_CASE("boundary faces are invariant along trajectories") {
  std::mt19937_64 eng(31);
  for (int rep = 0; rep < 50; ++rep) {
    // Start on the face r_0 = 0; the flow must keep it there.
    SimplexPoint inner = interior_point(3, eng, 1e-2);
    const SimplexPoint mu0({0.0, inner[0], 1.0 - inner[0]});
    const SimplexPoint ext = interior_point(3, eng, 1e-2);
    std::vector<PurificationTracePoint> trace;
    integrate_purification(mu0, ext, {}, &trace, 4);
    for (const auto& point : trace) {
      CHECK(std::abs(point.state[0]) <= 1e-12);
    }
  }
}

TEST_CASE("trace recording honors the stride and ends at the final state") {
  const SimplexPoint mu0({0.25, 0.75});
  const SimplexPoint ext({0.5, 0.5});
  std::vector<PurificationTracePoint> every;
  std::vector<PurificationTracePoint> sparse;
  const PurificationOutcome a = integrate_purification(mu0, ext, {}, &every, 1);
  const PurificationOutcome b = integrate_purification(mu0, ext, {}, &sparse, 7);
  CHECK(a.steps == b.steps);
  CHECK(sparse.size() < every.size());
  CHECK(sparse.front().t == 0.0);
  CHECK(sparse.back().t == Approx(a.t_elapsed).margin(1e-12));
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(sparse.back().state[k] == a.final_state[k]);
  }
}

TEST_CASE("integration is deterministic") {
  const SimplexPoint mu0({0.2, 0.3, 0.5});
  const SimplexPoint ext({0.4, 0.35, 0.25});
  const PurificationOutcome a = integrate_purification(mu0, ext);
  const PurificationOutcome b = integrate_purification(mu0, ext);
  CHECK(a.steps == b.steps);
  CHECK(a.t_elapsed == b.t_elapsed);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(a.final_state[k] == b.final_state[k]);
  }
}

TEST_CASE("integration parameter validation") {
  const SimplexPoint p2({0.5, 0.5});
  const SimplexPoint p3({0.2, 0.3, 0.5});
  CHECK_THROWS_AS(integrate_purification(p2, p3), ValidationError);
  PurificationParams bad_a;
  bad_a.a = 0.0;
  CHECK_THROWS_AS(integrate_purification(p2, p2, bad_a), ValidationError);
  PurificationParams bad_tol;
  bad_tol.conv_tol = 0.0;
  CHECK_THROWS_AS(integrate_purification(p2, p2, bad_tol), ValidationError);
}
