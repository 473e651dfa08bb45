#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "collapse/algebra.hpp"
#include "collapse/errors.hpp"
#include "collapse/matrix.hpp"
#include "collapse/measurement.hpp"
#include "collapse/observable.hpp"
#include "collapse/rng.hpp"
#include "collapse/simplex.hpp"

using Catch::Approx;
using namespace collapse;

namespace {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

TEST_CASE("pauli matrices satisfy the su(2) relations") {
  const ComplexMatrix x = pauli_x(), y = pauli_y(), z = pauli_z();
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  CHECK(frobenius_distance(x * x, id) < 1e-15);
  CHECK(frobenius_distance(y * y, id) < 1e-15);
  CHECK(frobenius_distance(z * z, id) < 1e-15);
  CHECK(frobenius_distance(x * y - y * x, Complex(0, 2) * z) < 1e-15);
}

TEST_CASE("HermitianOperator symmetrizes round-off drift and rejects real asymmetry") {
  ComplexMatrix m(2, 2);
  m << 1.0, Complex(0.5, 1e-13), Complex(0.5, -1e-13), 2.0;
  m(0, 1) += 5e-13;  // drift below tolerance, absorbed
  const HermitianOperator h(m);
  CHECK(hermiticity_drift(h.matrix()) == 0.0);

  ComplexMatrix bad(2, 2);
  bad << 1.0, 1.0, 0.0, 2.0;
  CHECK_THROWS_AS(HermitianOperator(bad), ValidationError);
}

TEST_CASE("DensityMatrix validation enforces positivity and unit trace") {
  CHECK_NOTHROW(DensityMatrix::validated(0.5 * ComplexMatrix::Identity(2, 2)));

  ComplexMatrix neg(2, 2);
  neg << 1.5, 0.0, 0.0, -0.5;
  CHECK_THROWS_AS(DensityMatrix::validated(neg), ValidationError);

  CHECK_THROWS_AS(DensityMatrix::validated(ComplexMatrix::Identity(2, 2)),
                  ValidationError);  // trace 2
}

TEST_CASE("spectral_decompose groups eigenvalues within the relative tolerance") {
  Eigen::Vector3cd d;
  d << 2.0, 2.0 + 1e-12, 5.0;
  const Observable a =
      Observable::spectral_decompose(HermitianOperator(d.asDiagonal()));
  REQUIRE(a.points() == 2);
  CHECK(a.degeneracies()[0] == 2);
  CHECK(a.degeneracies()[1] == 1);
  CHECK(a.eigenvalues()[0] < a.eigenvalues()[1]);  // ascending order
}

TEST_CASE("spectral projections are a complete orthogonal resolution") {
  std::mt19937_64 eng(7);
  const ComplexMatrix h = random_hermitian(4, eng);
  const Observable a = Observable::spectral_decompose(HermitianOperator(h));

  ComplexMatrix sum = ComplexMatrix::Zero(4, 4);
  ComplexMatrix recon = ComplexMatrix::Zero(4, 4);
  for (int k = 0; k < a.points(); ++k) {
    const ComplexMatrix& p = a.projections()[k];
    CHECK(frobenius_distance(p * p, p) < 1e-10);
    CHECK(hermiticity_drift(p) < 1e-12);
    for (int j = 0; j < k; ++j) {
      CHECK((a.projections()[j] * p).norm() < 1e-10);
    }
    sum += p;
    recon += a.eigenvalues()[k] * p;
  }
  CHECK(frobenius_distance(sum, ComplexMatrix::Identity(4, 4)) < 1e-10);
  CHECK(frobenius_distance(recon, h) < 1e-9);
}

TEST_CASE("from_diagonal builds one projection per distinct value") {
  const Observable a = Observable::from_diagonal({3.0, 1.0, 3.0});
  REQUIRE(a.points() == 2);
  CHECK(a.eigenvalues()[0] == Approx(1.0));
  CHECK(a.eigenvalues()[1] == Approx(3.0));
  CHECK(a.degeneracies()[0] == 1);
  CHECK(a.degeneracies()[1] == 2);
  CHECK(a.projections()[1](0, 0).real() == Approx(1.0));
  CHECK(a.projections()[1](2, 2).real() == Approx(1.0));
}

TEST_CASE("SimplexPoint validates the probability-vector invariants") {
  CHECK_NOTHROW(SimplexPoint({0.2, 0.3, 0.5}));
  CHECK_THROWS_WITH(SimplexPoint({0.4, 0.5}),
                    Catch::Matchers::ContainsSubstring("simplex sum"));
  CHECK_THROWS_AS(SimplexPoint({1.5, -0.5}), ValidationError);

  // Negative round-off within -1e-12 is clamped to zero.
  const SimplexPoint p({1.0 + 1e-13, -1e-13});
  CHECK(p[1] == 0.0);

  const SimplexPoint v = SimplexPoint::vertex(3, 1);
  CHECK(v[0] == 0.0);
  CHECK(v[1] == 1.0);
  CHECK(v[2] == 0.0);
}

TEST_CASE("commutant dimensions for the standard generator sets") {
  const ComplexMatrix id3 = ComplexMatrix::Identity(3, 3);
  CHECK(commutant({id3}).dim() == 9);

  Eigen::Vector3cd d;
  d << 1.0, 2.0, 3.0;
  CHECK(commutant({ComplexMatrix(d.asDiagonal())}).dim() == 3);

  CHECK(commutant({pauli_x(), pauli_z()}).dim() == 1);
}

TEST_CASE("double commutant recovers the generated unital algebra") {
  Eigen::Vector3cd nd;
  nd << 1.0, 2.0, 3.0;
  CHECK(double_commutant({ComplexMatrix(nd.asDiagonal())}).dim() == 3);

  Eigen::Vector3cd dg;
  dg << 1.0, 1.0, 2.0;
  CHECK(double_commutant({ComplexMatrix(dg.asDiagonal())}).dim() == 2);

  CHECK(double_commutant({pauli_x()}).dim() == 2);
}

TEST_CASE("commutant and double commutant commute element-wise") {
  std::mt19937_64 eng(11);
  const ComplexMatrix g = random_hermitian(3, eng);
  const AlgebraBasis c = commutant({g});
  const AlgebraBasis cc = double_commutant({g});
  for (const auto& x : c.elements()) {
    for (const auto& y : cc.elements()) {
      CHECK((x * y - y * x).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("double commutant is idempotent up to span equality") {
  Eigen::Vector3cd dg;
  dg << 1.0, 1.0, 2.0;
  const std::vector<ComplexMatrix> gens = {ComplexMatrix(dg.asDiagonal())};
  const AlgebraBasis once = double_commutant(gens);
  const AlgebraBasis twice = double_commutant(once.elements());
  CHECK(algebra_equal(once, twice));
}

TEST_CASE("algebra_equal distinguishes inequivalent spans") {
  const AlgebraBasis diag = spectral_algebra(Observable::from_diagonal({1.0, 2.0}));
  const AlgebraBasis flip = double_commutant({pauli_x()});
  CHECK(diag.dim() == flip.dim());
  CHECK_FALSE(algebra_equal(diag, flip));
  CHECK(algebra_equal(diag, double_commutant({pauli_z()})));
}

TEST_CASE("spectral_algebra spans exactly the projector combinations") {
  const Observable a = Observable::from_diagonal({1.0, 1.0, 2.0});
  const AlgebraBasis alg = spectral_algebra(a);
  CHECK(alg.dim() == 2);
  CHECK(alg.residual(a.op().matrix()) < 1e-10);
  CHECK(alg.residual(ComplexMatrix::Identity(3, 3)) < 1e-10);
  CHECK(alg.residual(matrix_unit(3, 0, 1)) > 0.5);
  CHECK(alg.orthonormality_defect() < 1e-10);
  CHECK(alg.adjoint_closure_defect() < 1e-10);
}

TEST_CASE("outcome probabilities and the selective map") {
  const Observable sz = Observable::spectral_decompose(
      HermitianOperator(pauli_z()));
  const DensityMatrix mixed = maximally_mixed(2);

  // sigma_z eigenvalues in ascending order: index 0 is the -1 outcome.
  CHECK(outcome_probability(mixed, sz, 0) == Approx(0.5).margin(1e-12));
  CHECK(outcome_probability(mixed, sz, 1) == Approx(0.5).margin(1e-12));

  const DensityMatrix post = selective_map(mixed, sz, 1);
  CHECK(post.matrix()(0, 0).real() == Approx(1.0).margin(1e-12));
  CHECK(post.matrix()(1, 1).real() == Approx(0.0).margin(1e-12));

  const DensityMatrix plus = uniform_superposition(2);
  const DensityMatrix collapsed = selective_map(plus, sz, 0);
  CHECK(collapsed.matrix()(1, 1).real() == Approx(1.0).margin(1e-12));

  ComplexMatrix top = ComplexMatrix::Zero(2, 2);
  top(0, 0) = 1.0;
  const DensityMatrix vertex = DensityMatrix::validated(top);
  CHECK_THROWS_AS(selective_map(vertex, sz, 0), ValidationError);
}

TEST_CASE("conditional expectation erases off-diagonal coherences") {
  const Observable sz = Observable::spectral_decompose(
      HermitianOperator(pauli_z()));
  const DensityMatrix plus = uniform_superposition(2);
  const DensityMatrix pinched = conditional_expectation(plus, sz);
  CHECK(pinched.matrix()(0, 1) == Complex(0, 0));
  CHECK(pinched.matrix()(0, 0).real() == Approx(0.5).margin(1e-12));
}

TEST_CASE("conditional expectation is an idempotent trace-preserving projection") {
  std::mt19937_64 eng(7);
  const Observable a = Observable::from_diagonal({1.0, 1.0, 2.0, 3.0});
  for (int rep = 0; rep < 25; ++rep) {
    const DensityMatrix rho = random_density(4, eng);
    const DensityMatrix once = conditional_expectation(rho, a);
    const DensityMatrix twice = conditional_expectation(once, a);
    CHECK(std::abs(once.matrix().trace().real() - 1.0) < 1e-12);
    CHECK(frobenius_distance(once.matrix(), twice.matrix()) < 1e-12);
    // Degenerate 2x2 block of rows 0-1 survives the pinch intact.
    CHECK(frobenius_distance(once.matrix().topLeftCorner(2, 2),
                             rho.matrix().topLeftCorner(2, 2)) < 1e-12);
    // Outcome weights are untouched (Born consistency).
    for (int k = 0; k < a.points(); ++k) {
      CHECK(outcome_probability(rho, a, k) ==
            Approx(outcome_probability(once, a, k)).margin(1e-12));
    }
  }
}

TEST_CASE("restrict_to_algebra reads off the outcome weights") {
  const Observable a = Observable::from_diagonal({1.0, 1.0, 2.0, 3.0});
  const SimplexPoint uniform = restrict_to_algebra(maximally_mixed(4), a);
  CHECK(uniform[0] == Approx(0.5).margin(1e-12));
  CHECK(uniform[1] == Approx(0.25).margin(1e-12));
  CHECK(uniform[2] == Approx(0.25).margin(1e-12));

  const Observable sz = Observable::spectral_decompose(
      HermitianOperator(pauli_z()));
  ComplexMatrix m(2, 2);
  m << 0.7, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.3;
  const SimplexPoint r = restrict_to_algebra(DensityMatrix::validated(m), sz);
  CHECK(r[0] == Approx(0.3).margin(1e-12));  // eigenvalue -1 sector
  CHECK(r[1] == Approx(0.7).margin(1e-12));
}

TEST_CASE("partial trace over the second factor") {
  std::mt19937_64 eng(3);
  const DensityMatrix r1 = random_density(2, eng);
  const DensityMatrix r2 = random_density(3, eng);
  const ComplexMatrix prod = kron(r1.matrix(), r2.matrix());
  CHECK(frobenius_distance(partial_trace_2(prod, 2, 3), r1.matrix()) < 1e-12);

  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const ComplexMatrix bell_rho = bell * bell.adjoint();
  CHECK(frobenius_distance(partial_trace_2(bell_rho, 2, 2),
                           0.5 * ComplexMatrix::Identity(2, 2)) < 1e-12);

  CHECK_THROWS_AS(partial_trace_2(ComplexMatrix::Identity(6, 6), 4, 2),
                  ValidationError);
}

TEST_CASE("unitary restriction depends on the chosen extension") {
  // CNOT on two qubits: |a,b> -> |a, b xor a>.
  ComplexMatrix cnot = ComplexMatrix::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;

  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const DensityMatrix correlated = DensityMatrix::validated(bell * bell.adjoint());
  const DensityMatrix product =
      DensityMatrix::validated(0.25 * ComplexMatrix::Identity(4, 4));

  // Both extensions restrict to the same one-qubit state...
  CHECK(frobenius_distance(partial_trace_2(correlated.matrix(), 2, 2),
                           partial_trace_2(product.matrix(), 2, 2)) < 1e-12);

  // ...but the reduced evolutions differ, so no CP map acts on the restriction.
  const CpRestriction demo = cp_restriction_demo(cnot, correlated, product, 2, 2);
  CHECK(demo.distance > 0.1);
  CHECK(std::abs(demo.out1.matrix().trace().real() - 1.0) < 1e-12);
  CHECK(std::abs(demo.out2.matrix().trace().real() - 1.0) < 1e-12);

  // Product unitaries act on the restriction alone.
  const ComplexMatrix u1xu2 = kron(pauli_x(), pauli_y());
  const CpRestriction local = cp_restriction_demo(u1xu2, correlated, product, 2, 2);
  CHECK(local.distance < 1e-12);

  CHECK_THROWS_AS(
      cp_restriction_demo(2.0 * cnot, correlated, product, 2, 2),
      ValidationError);
}

TEST_CASE("seeded rng streams are reproducible and independent") {
  std::mt19937_64 a = RngStream{42, 0}.make_engine();
  std::mt19937_64 b = RngStream{42, 0}.make_engine();
  std::mt19937_64 c = RngStream{42, 1}.make_engine();
  const double va = uniform01(a), vb = uniform01(b), vc = uniform01(c);
  CHECK(va == vb);
  CHECK(va != vc);
}

TEST_CASE("random density matrices are valid states") {
  std::mt19937_64 eng(5);
  for (int rep = 0; rep < 20; ++rep) {
    const DensityMatrix rho = random_density(3, eng);
    CHECK(std::abs(rho.matrix().trace().real() - 1.0) < 1e-10);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix());
    CHECK(es.eigenvalues().minCoeff() > -1e-12);
  }
}
