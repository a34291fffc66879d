#pragma once

#include <array>
#include <string>
#include <vector>

#include "rrb/core.hpp"
#include "rrb/gates.hpp"
#include "rrb/random.hpp"

namespace rrb {

enum class ChannelKind { Identity, Depolarizing, AmplitudeDamping, Composite, Unitary };

/// How a channel meets the qubits of the gate it is attached to.
///   Each: one single-qubit copy per qubit, tensored.
///   All:  one joint channel on all of them (register order, ascending).
enum class Support { Each, All };

struct ChannelSpec {
  ChannelKind kind = ChannelKind::Identity;
  double lambda = 1.0;   ///< depolarizing retention
  double epsilon = 0.0;  ///< amplitude-damping decay
  Support support = Support::Each;
  /// Composite: parts[0] o parts[1] o ... (the last part acts first).
  std::vector<ChannelSpec> parts;
  CMatrix unitary;  ///< Unitary kind only

  static ChannelSpec identity();
  static ChannelSpec depolarizing(double lambda, Support support = Support::Each);
  static ChannelSpec amplitude_damping(double epsilon);
  static ChannelSpec composite(std::vector<ChannelSpec> parts);
  static ChannelSpec unitary_conjugation(CMatrix u);

  void validate() const;
};

enum class GateClass { RZ, RX, CZ, SPAM, LAYER };
const char* to_string(GateClass c);

/// Channel per gate class, applied after the gate. SPAM acts once on the
/// whole register before measurement; LAYER acts on the whole register after
/// each compiled random operation (and after the inverse).
struct NoiseModel {
  ChannelSpec rz = ChannelSpec::identity();
  ChannelSpec rx = ChannelSpec::identity();
  ChannelSpec cz = ChannelSpec::identity();
  ChannelSpec spam = ChannelSpec::identity();
  ChannelSpec layer = ChannelSpec::identity();

  static NoiseModel noiseless() { return {}; }
  const ChannelSpec& channel(GateClass c) const;
  ChannelSpec& channel(GateClass c);
  void validate() const;
};

/// Lambda_d(rho) = lambda rho + (1 - lambda) Tr(rho) I / 2^n.
Superoperator depolarizing_superop(double lambda, int n_qubits);
/// Single-qubit amplitude damping with decay epsilon; fixes |0><0|.
Superoperator amplitude_damping_superop(double epsilon);
/// p rho + (1 - p) Tr(rho) I/d for an arbitrary Hilbert dimension d.
Superoperator depolarizing_form(double p, Index hilbert_dim);

/// outer o inner.
Superoperator compose(const Superoperator& outer, const Superoperator& inner);

/// The channel of `spec` acting on `qubits` of an n-qubit register,
/// identity on the rest.
Superoperator channel_of_spec(const ChannelSpec& spec, const std::vector<int>& qubits, int n_qubits);

/// (Tr S - 1) / (d^2 - 1).
double depolarizing_parameter(const Superoperator& s);

/// Per-register precomputation of every channel a NoiseModel can apply.
class RegisterNoise {
 public:
  RegisterNoise(const NoiseModel& model, int n_qubits);

  int n_qubits() const { return n_qubits_; }
  /// Channel applied after `g`; nullptr when it is exactly the identity.
  const Superoperator* after_gate(const NativeGate& g) const;
  const Superoperator* spam() const { return slot(spam_); }
  const Superoperator* layer() const { return slot(layer_); }

 private:
  struct Slot {
    Superoperator op = Superoperator::identity(1);
    bool identity = true;
  };
  static Slot make(const Superoperator& s);
  const Superoperator* slot(const Slot& s) const { return s.identity ? nullptr : &s.op; }

  int n_qubits_;
  std::array<Slot, 2> rz_;
  std::array<Slot, 2> rx_;
  Slot cz_;
  Slot spam_;
  Slot layer_;
};

/// E with  prod_j (Lambda_j o U_{R_j}) = E o U,  U = sequence_unitary(seq),
/// including the model's LAYER channel after the last gate.
Superoperator effective_noise_channel(const GateSequence& seq, const NoiseModel& model);
Superoperator effective_noise_channel(const GateSequence& seq, const RegisterNoise& noise);

struct TwirlResult {
  Superoperator mean;
  /// Standard errors of the real and imaginary parts of each entry.
  Eigen::MatrixXd standard_error_re;
  Eigen::MatrixXd standard_error_im;
  std::size_t samples = 0;
};

inline constexpr std::size_t kMinTwirlSamples = 1000;

/// Monte-Carlo average of U^dag o Lambda o U over QR-oracle Haar unitaries,
/// sample k drawn from rng.substream(k).
TwirlResult haar_twirl_mc(const Superoperator& lambda, std::size_t n_samples, const RandomSource& rng);

}  // namespace rrb
