#include "rrb/gates.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace rrb {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;
const Complex kI(0.0, 1.0);

void append_1q(GateSequence& seq, int q, double phi, double theta, double omega) {
  seq.gates.push_back(NativeGate::rz(q, phi));
  seq.gates.push_back(NativeGate::rx(q, kHalfPi));
  seq.gates.push_back(NativeGate::rz(q, theta));
  seq.gates.push_back(NativeGate::rx(q, -kHalfPi));
  seq.gates.push_back(NativeGate::rz(q, omega));
}

// RY(theta) = RX(-pi/2) RZ(theta) RX(pi/2)
void append_ry(GateSequence& seq, int q, double theta) {
  seq.gates.push_back(NativeGate::rx(q, kHalfPi));
  seq.gates.push_back(NativeGate::rz(q, theta));
  seq.gates.push_back(NativeGate::rx(q, -kHalfPi));
}

// H = RZ(pi/2) RX(pi/2) RZ(pi/2) up to phase
void append_h(GateSequence& seq, int q) {
  seq.gates.push_back(NativeGate::rz(q, kHalfPi));
  seq.gates.push_back(NativeGate::rx(q, kHalfPi));
  seq.gates.push_back(NativeGate::rz(q, kHalfPi));
}

void append_cnot(GateSequence& seq, int control, int target) {
  append_h(seq, target);
  seq.gates.push_back(NativeGate::cz(control, target));
  append_h(seq, target);
}
}  // namespace

const char* to_string(GateKind kind) {
  switch (kind) {
    case GateKind::RZ: return "RZ";
    case GateKind::RX: return "RX";
    case GateKind::CZ: return "CZ";
  }
  return "?";
}

bool is_allowed_rx_angle(double angle) {
  return angle == kHalfPi || angle == -kHalfPi || angle == kPi || angle == -kPi;
}

NativeGate NativeGate::rz(int q, double angle) {
  if (!std::isfinite(angle)) throw ValidationError("RZ angle must be finite");
  return NativeGate{GateKind::RZ, angle, {q, q}};
}

NativeGate NativeGate::rx(int q, double angle) {
  if (!is_allowed_rx_angle(angle))
    throw ValidationError("RX angle " + std::to_string(angle) + " is not one of +-pi/2, +-pi");
  return NativeGate{GateKind::RX, angle, {q, q}};
}

NativeGate NativeGate::cz(int q0, int q1) { return NativeGate{GateKind::CZ, 0.0, {q0, q1}}; }

void NativeGate::validate(int n_qubits) const {
  auto in_range = [&](int q) { return q >= 0 && q < n_qubits; };
  switch (kind) {
    case GateKind::RZ:
      if (!std::isfinite(angle)) throw ValidationError("RZ angle must be finite");
      if (!in_range(qubits[0])) throw ValidationError("RZ qubit index out of range");
      break;
    case GateKind::RX:
      if (!is_allowed_rx_angle(angle)) throw ValidationError("RX angle is not one of +-pi/2, +-pi");
      if (!in_range(qubits[0])) throw ValidationError("RX qubit index out of range");
      break;
    case GateKind::CZ:
      if (!in_range(qubits[0]) || !in_range(qubits[1])) throw ValidationError("CZ qubit index out of range");
      if (qubits[0] == qubits[1]) throw ValidationError("CZ qubits must be distinct");
      break;
  }
}

std::size_t GateSequence::count(GateKind kind) const {
  std::size_t n = 0;
  for (const auto& g : gates) n += g.kind == kind ? 1 : 0;
  return n;
}

void GateSequence::validate() const {
  if (n_qubits != 1 && n_qubits != 2) throw ValidationError("gate sequence must act on 1 or 2 qubits");
  for (const auto& g : gates) g.validate(n_qubits);
}

// ---------------------------------------------------------------------------

CMatrix rz_matrix(double angle) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = std::exp(-kI * (angle / 2.0));
  m(1, 1) = std::exp(kI * (angle / 2.0));
  return m;
}

CMatrix rx_matrix(double angle) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  CMatrix m(2, 2);
  m << c, -kI * s, -kI * s, c;
  return m;
}

CMatrix ry_matrix(double angle) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  CMatrix m(2, 2);
  m << c, -s, s, c;
  return m;
}

CMatrix cz_matrix() {
  CMatrix m = CMatrix::Identity(4, 4);
  m(3, 3) = -1.0;
  return m;
}

CMatrix embed_1q(const CMatrix& op, int q, int n_qubits) {
  if (n_qubits == 1) return op;
  const CMatrix id = CMatrix::Identity(2, 2);
  return q == 0 ? kron(op, id) : kron(id, op);
}

Unitary gate_matrix(const NativeGate& g, int n_qubits) {
  g.validate(n_qubits);
  switch (g.kind) {
    case GateKind::RZ: return Unitary(embed_1q(rz_matrix(g.angle), g.qubits[0], n_qubits));
    case GateKind::RX: return Unitary(embed_1q(rx_matrix(g.angle), g.qubits[0], n_qubits));
    case GateKind::CZ: return Unitary(cz_matrix());
  }
  throw ValidationError("unknown gate kind");
}

Unitary sequence_unitary(const GateSequence& seq) {
  seq.validate();
  const Index d = Index{1} << seq.n_qubits;
  CMatrix u = CMatrix::Identity(d, d);
  for (const auto& g : seq.gates) u = gate_matrix(g, seq.n_qubits).matrix() * u;
  return Unitary(std::move(u));
}

CMatrix single_qubit_matrix(double phi, double theta, double omega) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  CMatrix m(2, 2);
  m << std::exp(-kI * ((phi + omega) / 2.0)) * c, -std::exp(kI * ((phi - omega) / 2.0)) * s,
      std::exp(-kI * ((phi - omega) / 2.0)) * s, std::exp(kI * ((phi + omega) / 2.0)) * c;
  return m;
}

GateSequence single_qubit_template(double phi, double theta, double omega, int q, int n_qubits) {
  GateSequence seq{n_qubits, {}};
  append_1q(seq, q, phi, theta, omega);
  return seq;
}

GateSequence entangler_sequence(double alpha, double beta, double delta) {
  // Three-CNOT circuit for exp(i(a XX + b YY + c ZZ)) with a = beta/2,
  // b = delta/2, c = alpha/2.
  GateSequence seq{2, {}};
  seq.gates.push_back(NativeGate::rz(1, -kHalfPi));
  append_cnot(seq, 1, 0);
  seq.gates.push_back(NativeGate::rz(0, kHalfPi - alpha));
  append_ry(seq, 1, beta - kHalfPi);
  append_cnot(seq, 0, 1);
  append_ry(seq, 1, kHalfPi - delta);
  append_cnot(seq, 1, 0);
  seq.gates.push_back(NativeGate::rz(0, kHalfPi));
  return seq;
}

GateSequence two_qubit_template(const TwoQubitParams& p) {
  GateSequence seq{2, {}};
  seq.gates.reserve(kTwoQubitTemplateLength);
  append_1q(seq, 0, p.a.phi, p.a.theta, p.a.omega);
  append_1q(seq, 1, p.b.phi, p.b.theta, p.b.omega);
  const GateSequence v = entangler_sequence(p.alpha, p.beta, p.delta);
  seq.gates.insert(seq.gates.end(), v.gates.begin(), v.gates.end());
  append_1q(seq, 0, p.c.phi, p.c.theta, p.c.omega);
  append_1q(seq, 1, p.d.phi, p.d.theta, p.d.omega);
  return seq;
}

GateSequence concat(const GateSequence& head, const GateSequence& tail) {
  if (head.n_qubits != tail.n_qubits) throw ValidationError("concat: register size mismatch");
  GateSequence out = head;
  out.gates.insert(out.gates.end(), tail.gates.begin(), tail.gates.end());
  return out;
}

}  // namespace rrb
