#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rrb/gates.hpp"
#include "rrb/synth.hpp"

using namespace rrb;
namespace {
constexpr double kPi = std::numbers::pi;

CMatrix swap_matrix() {
  CMatrix s = CMatrix::Zero(4, 4);
  s(0, 0) = s(3, 3) = s(1, 2) = s(2, 1) = 1.0;
  return s;
}

std::vector<double> sorted_phases(const CMatrix& m) {
  Eigen::ComplexEigenSolver<CMatrix> es(m);
  std::vector<double> out;
  for (Index i = 0; i < m.rows(); ++i) out.push_back(std::arg(es.eigenvalues()(i)));
  std::sort(out.begin(), out.end());
  return out;
}

double round_trip(const CMatrix& u) {
  const Unitary un(u);
  return distance_up_to_global_phase(reconstruct_2q(decompose_2q(un)), un);
}
}  // namespace

TEST_CASE("magic matrix") {
  const CMatrix& l = magic_matrix();
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(l(0, 0) == Complex(r, 0));
  CHECK(l(0, 1) == Complex(0, r));
  CHECK(l(1, 2) == Complex(0, r));
  CHECK(l(1, 3) == Complex(r, 0));
  CHECK(l(2, 3) == Complex(-r, 0));
  CHECK(l(3, 1) == Complex(0, -r));
  CHECK(unitarity_defect(l) <= 1e-15);

  CHECK(to_magic_basis(Unitary::identity(4)).matrix().isIdentity(1e-15));
  const Unitary lu(l);
  CHECK((to_magic_basis(lu).matrix() - l).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK_THROWS_AS(to_magic_basis(Unitary::identity(2)), ValidationError);
}

TEST_CASE("local gates are real orthogonal in the magic basis") {
  std::mt19937_64 gen(41);
  for (int k = 0; k < 50; ++k) {
    const CMatrix ab = kron(oracle::random_unitary(2, gen), oracle::random_unitary(2, gen));
    CMatrix u = to_magic_basis(Unitary(ab)).matrix();
    // remove the global phase that makes u real: det(u) = e^{4 i t}
    u *= std::exp(-oracle::kI * std::arg(u.determinant()) / 4.0);
    const double im = u.imag().cwiseAbs().maxCoeff();
    const double im_flip = (oracle::kI * u).imag().cwiseAbs().maxCoeff();
    CHECK(std::min(im, im_flip) <= 1e-12);
  }
}

TEST_CASE("magic basis preserves spectra and u u^T is symmetric") {
  std::mt19937_64 gen(43);
  for (int k = 0; k < 50; ++k) {
    const CMatrix u = oracle::random_unitary(4, gen);
    const CMatrix m = to_magic_basis(Unitary(u)).matrix();
    const auto a = sorted_phases(u), b = sorted_phases(m);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-10);
    const CMatrix w = m * m.transpose();
    CHECK((w - w.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((from_magic_basis(to_magic_basis(Unitary(u))).matrix() - u).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("decompose_1q") {
  const auto id = decompose_1q(Unitary::identity(2));
  CHECK(id.phi == 0.0);
  CHECK(id.theta == 0.0);
  CHECK(id.omega == 0.0);
  CHECK(id.global_phase == doctest::Approx(0.0));

  const auto rz = decompose_1q(Unitary(rz_matrix(0.8)));
  CHECK(rz.theta == doctest::Approx(0.0));
  CHECK(rz.omega == 0.0);
  CHECK(rz.phi + rz.omega == doctest::Approx(0.8));

  std::mt19937_64 gen(47);
  for (int k = 0; k < 1000; ++k) {
    const CMatrix u = oracle::random_unitary(2, gen);
    const auto p = decompose_1q(Unitary(u));
    CHECK(p.theta >= 0.0);
    CHECK(p.theta <= kPi);
    CHECK((reconstruct_1q(p) - u).cwiseAbs().maxCoeff() <= 1e-10);
  }

  SUBCASE("anti-diagonal input") {
    CMatrix x = oracle::pauli('X');
    const auto p = decompose_1q(Unitary(x));
    CHECK((reconstruct_1q(p) - x).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("split_tensor_product") {
  std::mt19937_64 gen(53);
  for (int k = 0; k < 50; ++k) {
    const CMatrix a = oracle::random_unitary(2, gen), b = oracle::random_unitary(2, gen);
    const auto [fa, fb] = split_tensor_product(kron(a, b));
    CHECK((kron(fa, fb) - kron(a, b)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(std::abs(fb.determinant() - Complex(1.0)) <= 1e-12);
  }
}

TEST_CASE("decompose_2q on structured inputs") {
  SUBCASE("identity") {
    const auto p = decompose_2q(Unitary::identity(4));
    CHECK(std::abs(p.alpha) <= 1e-12);
    CHECK(std::abs(p.beta) <= 1e-12);
    CHECK(std::abs(p.delta) <= 1e-12);
    CHECK(round_trip(CMatrix::Identity(4, 4)) <= 1e-12);
  }
  SUBCASE("local gates: u u^T proportional to identity") {
    std::mt19937_64 gen(59);
    for (int k = 0; k < 50; ++k) {
      const CMatrix ab = kron(oracle::random_unitary(2, gen), oracle::random_unitary(2, gen));
      const auto p = decompose_2q(Unitary(ab));
      CHECK(std::abs(p.alpha - p.beta) <= 1e-8);
      CHECK(std::abs(p.beta - p.delta) <= 1e-8);
      CHECK(round_trip(ab) <= 1e-8);
    }
  }
  SUBCASE("degenerate two-qubit gates") {
    CHECK(round_trip(cz_matrix()) <= 1e-8);
    CHECK(round_trip(swap_matrix()) <= 1e-8);
    CHECK(round_trip(oracle::cnot(0)) <= 1e-8);
    CHECK(round_trip(oracle::cnot(1)) <= 1e-8);
    const CMatrix iswap_like = oracle::expm(0.25 * kPi * oracle::kI *
                                            (kron(oracle::pauli('X'), oracle::pauli('X')) +
                                             kron(oracle::pauli('Y'), oracle::pauli('Y'))));
    CHECK(round_trip(iswap_like) <= 1e-8);
    CHECK(round_trip(entangler_matrix(0.4, 0.4, 0.4)) <= 1e-8);
  }
  SUBCASE("Haar-random inputs") {
    std::mt19937_64 gen(61);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) worst = std::max(worst, round_trip(oracle::random_unitary(4, gen)));
    CHECK(worst <= 1e-8);
  }
  SUBCASE("template realizes the decomposition") {
    std::mt19937_64 gen(67);
    for (int k = 0; k < 100; ++k) {
      const Unitary u(oracle::random_unitary(4, gen));
      const GateSequence s = two_qubit_template(decompose_2q(u));
      CHECK(distance_up_to_global_phase(sequence_unitary(s), u) <= 1e-8);
    }
  }
  CHECK_THROWS_AS(decompose_2q(Unitary::identity(2)), ValidationError);
}

TEST_CASE("symmetric unitary eigenbasis on an exactly degenerate input") {
  // CZ in the magic basis: u u^T has repeated eigenvalues.
  const CMatrix m = to_magic_basis(Unitary(cz_matrix())).matrix();
  const Eigen::Matrix4cd w = m * m.transpose();
  const auto eig = symmetric_unitary_eigen(w);
  CHECK(eig.basis.determinant() == doctest::Approx(1.0));
  CHECK((eig.basis.transpose() * eig.basis).isIdentity(1e-12));
  Eigen::Vector4cd d;
  for (int j = 0; j < 4; ++j) d(j) = std::exp(oracle::kI * eig.phases[j]);
  const Eigen::Matrix4cd rebuilt = eig.basis.cast<Complex>() * d.asDiagonal() * eig.basis.transpose().cast<Complex>();
  CHECK((rebuilt - w).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(std::is_sorted(eig.phases.begin(), eig.phases.end()));
}
