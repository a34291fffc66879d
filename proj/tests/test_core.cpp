#include <doctest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rrb/core.hpp"

using namespace rrb;

TEST_CASE("distance_up_to_global_phase") {
  const CMatrix id = CMatrix::Identity(2, 2);
  CHECK(distance_up_to_global_phase(id, id) == doctest::Approx(0.0));
  const CMatrix phased = std::exp(oracle::kI * (std::numbers::pi / 7.0)) * id;
  CHECK(distance_up_to_global_phase(id, phased) == doctest::Approx(0.0).epsilon(1e-12));

  SUBCASE("identity vs X against the dense theta grid") {
    const double expected = oracle::grid_phase_distance(id, oracle::pauli('X'));
    CHECK(distance_up_to_global_phase(id, oracle::pauli('X')) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(expected == doctest::Approx(2.0).epsilon(1e-9));
  }

  SUBCASE("closed form on random pairs") {
    std::mt19937_64 gen(11);
    for (int k = 0; k < 20; ++k) {
      const CMatrix u = oracle::random_unitary(4, gen);
      const CMatrix v = oracle::random_unitary(4, gen);
      CHECK(distance_up_to_global_phase(u, v) ==
            doctest::Approx(oracle::grid_phase_distance(u, v)).epsilon(1e-7));
    }
  }

  CHECK_THROWS_AS(distance_up_to_global_phase(id, CMatrix::Identity(4, 4)), ValidationError);
}

TEST_CASE("state_fidelity") {
  CVector zero = CVector::Zero(2);
  zero(0) = 1.0;
  CHECK(state_fidelity(DensityMatrix::ground(2), zero) == doctest::Approx(1.0));
  CHECK(state_fidelity(DensityMatrix(CMatrix::Identity(2, 2) / 2.0), zero) == doctest::Approx(0.5));

  // lambda |0><0| + (1 - lambda) I/2 at lambda = 0.9
  CMatrix rho = 0.9 * DensityMatrix::ground(2).matrix() + 0.1 * CMatrix::Identity(2, 2) / 2.0;
  CHECK(state_fidelity(DensityMatrix(rho), zero) == doctest::Approx(0.95).epsilon(1e-14));

  CHECK_THROWS_AS(state_fidelity(DensityMatrix::ground(4), zero), ValidationError);
}

TEST_CASE("value type invariants") {
  CMatrix not_unitary = CMatrix::Identity(2, 2);
  not_unitary(0, 1) = 0.1;
  CHECK_THROWS_AS(Unitary{not_unitary}, ValidationError);
  CHECK_THROWS_AS(DensityMatrix{CMatrix::Identity(2, 2)}, ValidationError);
  CMatrix negative = CMatrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix{negative}, ValidationError);
  CHECK_THROWS_AS(Superoperator{CMatrix::Identity(3, 3)}, ValidationError);
}

TEST_CASE("unitarity is closed under products and adjoints") {
  std::mt19937_64 gen(5);
  for (int k = 0; k < 50; ++k) {
    const Unitary a(oracle::random_unitary(4, gen));
    const Unitary b(oracle::random_unitary(4, gen));
    CHECK(unitarity_defect((a * b).matrix()) <= tol::kUnitary);
    CHECK(unitarity_defect((a * b.adjoint()).matrix()) <= tol::kUnitary);
  }
}

TEST_CASE("column-stacking vec convention") {
  std::mt19937_64 gen(17);
  std::normal_distribution<double> n;
  auto rnd = [&](Index d) {
    CMatrix m(d, d);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) m(i, j) = Complex(n(gen), n(gen));
    return m;
  };
  for (int k = 0; k < 20; ++k) {
    const CMatrix a = rnd(4), b = rnd(4), rho = rnd(4);
    const CMatrix lhs = unvec(kron(b.transpose(), a) * vec(rho), 4);
    CHECK((lhs - a * rho * b).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("unitary conjugation superoperator") {
  std::mt19937_64 gen(23);
  for (int k = 0; k < 20; ++k) {
    const CMatrix u = oracle::random_unitary(2, gen);
    const Superoperator s = Superoperator::conjugation(u);
    CHECK(s.is_cptp());
    CHECK(std::abs(s.matrix().trace() - Complex(std::norm(u.trace()))) <= 1e-12);
    const CMatrix rho = DensityMatrix::ground(2).matrix();
    CHECK((s.apply(rho) - u * rho * u.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("tensor of superoperators acts factorwise") {
  std::mt19937_64 gen(29);
  const CMatrix u = oracle::random_unitary(2, gen);
  const CMatrix v = oracle::random_unitary(2, gen);
  const Superoperator t = tensor(Superoperator::conjugation(u), Superoperator::conjugation(v));
  CHECK((t.matrix() - Superoperator::conjugation(kron(u, v)).matrix()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(tensor(Superoperator::identity(2), Superoperator::identity(2)).matrix().isIdentity(1e-15));
}
