#include <doctest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rrb/gates.hpp"
#include "rrb/synth.hpp"

using namespace rrb;
namespace {
constexpr double kPi = std::numbers::pi;

TwoQubitParams random_params(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  auto one = [&] { return SingleQubitParams{ang(gen), std::abs(ang(gen)), ang(gen), 0.0}; };
  return TwoQubitParams{one(), one(), one(), one(), ang(gen), ang(gen), ang(gen), 0.0};
}
}  // namespace

TEST_CASE("gate matrices") {
  CHECK(gate_matrix(NativeGate::rz(0, 0.0), 1).matrix().isIdentity(1e-15));
  const CMatrix minus_i_x = -oracle::kI * oracle::pauli('X');
  CHECK((gate_matrix(NativeGate::rx(0, kPi), 1).matrix() - minus_i_x).cwiseAbs().maxCoeff() <= 1e-15);

  const CMatrix cz = gate_matrix(NativeGate::cz(0, 1), 2).matrix();
  const CMatrix ih = kron(CMatrix::Identity(2, 2), oracle::hadamard());
  CHECK((cz - ih * oracle::cnot(0) * ih).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(cz.isApprox(cz_matrix()));
}

TEST_CASE("alphabet invariants") {
  CHECK_THROWS_AS(NativeGate::rx(0, 0.3), ValidationError);
  CHECK_THROWS_AS(NativeGate::cz(0, 0).validate(2), ValidationError);
  CHECK_THROWS_AS(NativeGate::rz(2, 0.1).validate(2), ValidationError);
  CHECK_NOTHROW(NativeGate::rx(1, -kPi / 2).validate(2));
}

TEST_CASE("sequence_unitary") {
  CHECK(sequence_unitary(GateSequence{1, {}}).matrix().isIdentity(1e-15));
  GateSequence inverse_pair{1, {NativeGate::rz(0, 0.7), NativeGate::rz(0, -0.7)}};
  CHECK(sequence_unitary(inverse_pair).matrix().isIdentity(1e-14));

  SUBCASE("first gate is the rightmost factor") {
    GateSequence s{1, {NativeGate::rz(0, 0.3), NativeGate::rx(0, kPi / 2)}};
    const CMatrix expected = rx_matrix(kPi / 2) * rz_matrix(0.3);
    CHECK((sequence_unitary(s).matrix() - expected).cwiseAbs().maxCoeff() <= 1e-15);
  }

  SUBCASE("concatenation is the matrix product") {
    std::mt19937_64 gen(3);
    for (int k = 0; k < 20; ++k) {
      const auto p = random_params(gen);
      const GateSequence s1 = two_qubit_template(p);
      const GateSequence s2 = single_qubit_template(p.a.phi, p.a.theta, p.a.omega, 1, 2);
      const CMatrix lhs = sequence_unitary(concat(s1, s2)).matrix();
      const CMatrix rhs = sequence_unitary(s2).matrix() * sequence_unitary(s1).matrix();
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("single-qubit template") {
  CHECK(distance_up_to_global_phase(sequence_unitary(single_qubit_template(0, 0, 0)).matrix(),
                                    CMatrix::Identity(2, 2)) <= 1e-12);
  CMatrix expected(2, 2);
  expected << 0, -1, 1, 0;
  CHECK((single_qubit_matrix(0, kPi, 0) - expected).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(distance_up_to_global_phase(sequence_unitary(single_qubit_template(0, kPi, 0)).matrix(), expected) <=
        1e-12);

  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
  for (int k = 0; k < 100; ++k) {
    const double phi = ang(gen), theta = ang(gen) / 2, omega = ang(gen);
    const GateSequence s = single_qubit_template(phi, theta, omega);
    CHECK(s.size() == kSingleQubitTemplateLength);
    // closed form equals RZ(omega) RY(theta) RZ(phi)
    const CMatrix closed = single_qubit_matrix(phi, theta, omega);
    CHECK((closed - rz_matrix(omega) * ry_matrix(theta) * rz_matrix(phi)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(distance_up_to_global_phase(sequence_unitary(s).matrix(), closed) <= 1e-12);
  }
}

TEST_CASE("Hadamard expansion into natives") {
  GateSequence h{1, {NativeGate::rz(0, kPi / 2), NativeGate::rx(0, kPi / 2), NativeGate::rz(0, kPi / 2)}};
  CHECK(distance_up_to_global_phase(sequence_unitary(h).matrix(), oracle::hadamard()) <= 1e-12);
}

TEST_CASE("entangler circuit matches the Pauli exponential") {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  const CMatrix xx = kron(oracle::pauli('X'), oracle::pauli('X'));
  const CMatrix yy = kron(oracle::pauli('Y'), oracle::pauli('Y'));
  const CMatrix zz = kron(oracle::pauli('Z'), oracle::pauli('Z'));
  for (int k = 0; k < 50; ++k) {
    const double alpha = ang(gen), beta = ang(gen), delta = ang(gen);
    const CMatrix exact = oracle::expm(0.5 * oracle::kI * (beta * xx + delta * yy + alpha * zz));
    CHECK((entangler_matrix(alpha, beta, delta) - exact).cwiseAbs().maxCoeff() <= 1e-12);
    const GateSequence v = entangler_sequence(alpha, beta, delta);
    CHECK(v.count(GateKind::CZ) == 3);
    CHECK(distance_up_to_global_phase(sequence_unitary(v).matrix(), exact) <= 1e-10);
  }
}

TEST_CASE("two-qubit template") {
  SUBCASE("zero interaction and identity locals") {
    const TwoQubitParams p{};
    CHECK(distance_up_to_global_phase(sequence_unitary(two_qubit_template(p)).matrix(),
                                      CMatrix::Identity(4, 4)) <= 1e-10);
  }
  std::mt19937_64 gen(19);
  SUBCASE("local-only parameters give A (x) B") {
    for (int k = 0; k < 20; ++k) {
      auto p = random_params(gen);
      p.c = p.d = SingleQubitParams{};
      p.alpha = p.beta = p.delta = 0.0;
      const CMatrix expected =
          kron(single_qubit_matrix(p.a.phi, p.a.theta, p.a.omega), single_qubit_matrix(p.b.phi, p.b.theta, p.b.omega));
      CHECK(distance_up_to_global_phase(sequence_unitary(two_qubit_template(p)).matrix(), expected) <= 1e-10);
    }
  }
  SUBCASE("random parameters against the dense product") {
    for (int k = 0; k < 200; ++k) {
      const auto p = random_params(gen);
      const GateSequence s = two_qubit_template(p);
      CHECK(s.size() == kTwoQubitTemplateLength);
      CHECK(s.count(GateKind::CZ) == 3);
      CHECK(distance_up_to_global_phase(sequence_unitary(s), reconstruct_2q(p)) <= 1e-10);
    }
  }
}

TEST_CASE("template length constancy and RX restriction over many draws") {
  std::mt19937_64 gen(31);
  for (int k = 0; k < 10000; ++k) {
    const auto p = random_params(gen);
    const GateSequence s2 = two_qubit_template(p);
    const GateSequence s1 = single_qubit_template(p.a.phi, p.a.theta, p.a.omega);
    REQUIRE(s2.size() == kTwoQubitTemplateLength);
    REQUIRE(s2.count(GateKind::CZ) == 3);
    REQUIRE(s1.size() == kSingleQubitTemplateLength);
    for (const auto& g : s2.gates)
      if (g.kind == GateKind::RX) REQUIRE(is_allowed_rx_angle(g.angle));
  }
}
