#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "rrb/core.hpp"
#include "rrb/params.hpp"

namespace rrb {

enum class GateKind { RZ, RX, CZ };

const char* to_string(GateKind kind);

/// One gate of the device alphabet {RZ(any), RX(+-pi/2, +-pi), CZ}.
struct NativeGate {
  GateKind kind = GateKind::RZ;
  double angle = 0.0;
  /// target for RZ/RX; {control, target} for CZ (CZ is symmetric).
  std::array<int, 2> qubits{0, 0};

  static NativeGate rz(int q, double angle);
  /// Throws ValidationError unless angle is exactly one of +-pi/2, +-pi.
  static NativeGate rx(int q, double angle);
  static NativeGate cz(int q0, int q1);

  /// Checks the alphabet and register invariants.
  void validate(int n_qubits) const;

  bool operator==(const NativeGate&) const = default;
};

bool is_allowed_rx_angle(double angle);

struct GateSequence {
  int n_qubits = 1;
  std::vector<NativeGate> gates;

  std::size_t size() const { return gates.size(); }
  std::size_t count(GateKind kind) const;
  void validate() const;

  bool operator==(const GateSequence&) const = default;
};

inline constexpr std::size_t kSingleQubitTemplateLength = 5;
inline constexpr std::size_t kTwoQubitTemplateLength = 50;

/// 2x2 RZ(phi) = diag(e^{-i phi/2}, e^{i phi/2}).
CMatrix rz_matrix(double angle);
/// 2x2 RX(theta) = cos(theta/2) I - i sin(theta/2) X.
CMatrix rx_matrix(double angle);
/// 2x2 RY(theta) = cos(theta/2) I - i sin(theta/2) Y.
CMatrix ry_matrix(double angle);
CMatrix cz_matrix();

/// Embeds a 1-qubit operator on qubit `q` of an n-qubit register
/// (qubit 0 is the most significant tensor factor).
CMatrix embed_1q(const CMatrix& op, int q, int n_qubits);

Unitary gate_matrix(const NativeGate& g, int n_qubits);

/// Ordered product, first gate rightmost.
Unitary sequence_unitary(const GateSequence& seq);

/// Closed form A(phi, theta, omega).
CMatrix single_qubit_matrix(double phi, double theta, double omega);

/// RZ(phi), RX(pi/2), RZ(theta), RX(-pi/2), RZ(omega) on qubit `q`.
GateSequence single_qubit_template(double phi, double theta, double omega, int q = 0, int n_qubits = 1);

/// A on q0, B on q1, then the 3-CZ circuit for V, then C on q0, D on q1.
/// Always kTwoQubitTemplateLength gates with exactly three CZ.
GateSequence two_qubit_template(const TwoQubitParams& p);

/// Native sequence for V(alpha, beta, delta) alone (30 gates, 3 CZ).
GateSequence entangler_sequence(double alpha, double beta, double delta);

/// Appends `tail` after `head` (tail applied last).
GateSequence concat(const GateSequence& head, const GateSequence& tail);

}  // namespace rrb
