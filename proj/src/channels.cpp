#include "rrb/channels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rrb/haar.hpp"
#include "rrb/parallel.hpp"

namespace rrb {

namespace {

void check_unit_interval(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) throw ValidationError(std::string(name) + " must lie in [0, 1], got " + std::to_string(x));
}

Superoperator swap_qubits(const Superoperator& s) {
  CMatrix swap = CMatrix::Zero(4, 4);
  swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
  const Superoperator sw = Superoperator::conjugation(swap);
  return sw.after(s).after(sw);
}

// Place a channel on `qubits` (1 or 2 of them) in an n-qubit register.
Superoperator embed(const Superoperator& s, const std::vector<int>& qubits, int n_qubits) {
  const Index k = static_cast<Index>(qubits.size());
  if (s.hilbert_dim() != (Index{1} << k)) throw ValidationError("channel dimension does not match its qubit support");
  if (k == n_qubits) {
    if (k == 2 && qubits[0] > qubits[1]) return swap_qubits(s);
    return s;
  }
  // k == 1, n == 2
  const auto id = Superoperator::identity(2);
  return qubits[0] == 0 ? tensor(s, id) : tensor(id, s);
}

Superoperator per_qubit(const Superoperator& one, const std::vector<int>& qubits, int n_qubits) {
  Superoperator out = Superoperator::identity(Index{1} << n_qubits);
  for (int q : qubits) out = embed(one, {q}, n_qubits).after(out);
  return out;
}

void check_qubits(const std::vector<int>& qubits, int n_qubits) {
  if (n_qubits < 1 || n_qubits > 2) throw ValidationError("register must have 1 or 2 qubits");
  if (qubits.empty() || qubits.size() > static_cast<std::size_t>(n_qubits))
    throw ValidationError("channel support must name 1.." + std::to_string(n_qubits) + " qubits");
  for (int q : qubits)
    if (q < 0 || q >= n_qubits) throw ValidationError("channel qubit out of range");
  if (qubits.size() == 2 && qubits[0] == qubits[1]) throw ValidationError("channel qubits must be distinct");
}

std::vector<int> all_qubits(int n_qubits) {
  std::vector<int> q(static_cast<std::size_t>(n_qubits));
  for (int i = 0; i < n_qubits; ++i) q[static_cast<std::size_t>(i)] = i;
  return q;
}

bool exactly_identity(const CMatrix& m) {
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != (i == j ? Complex(1.0) : Complex(0.0))) return false;
  return true;
}

}  // namespace

ChannelSpec ChannelSpec::identity() { return {}; }

ChannelSpec ChannelSpec::depolarizing(double lambda, Support support) {
  ChannelSpec s;
  s.kind = ChannelKind::Depolarizing;
  s.lambda = lambda;
  s.support = support;
  s.validate();
  return s;
}

ChannelSpec ChannelSpec::amplitude_damping(double epsilon) {
  ChannelSpec s;
  s.kind = ChannelKind::AmplitudeDamping;
  s.epsilon = epsilon;
  s.validate();
  return s;
}

ChannelSpec ChannelSpec::composite(std::vector<ChannelSpec> parts) {
  ChannelSpec s;
  s.kind = ChannelKind::Composite;
  s.parts = std::move(parts);
  s.validate();
  return s;
}

ChannelSpec ChannelSpec::unitary_conjugation(CMatrix u) {
  ChannelSpec s;
  s.kind = ChannelKind::Unitary;
  s.unitary = std::move(u);
  s.validate();
  return s;
}

void ChannelSpec::validate() const {
  switch (kind) {
    case ChannelKind::Identity:
      return;
    case ChannelKind::Depolarizing:
      check_unit_interval(lambda, "depolarizing lambda");
      return;
    case ChannelKind::AmplitudeDamping:
      check_unit_interval(epsilon, "amplitude damping epsilon");
      return;
    case ChannelKind::Composite:
      if (parts.empty()) throw ValidationError("composite channel needs at least one part");
      for (const auto& p : parts) p.validate();
      return;
    case ChannelKind::Unitary:
      if (unitary.rows() != 2 && unitary.rows() != 4) throw ValidationError("unitary channel must be 2x2 or 4x4");
      (void)Unitary(unitary);  // throws if not unitary
      return;
  }
}

const char* to_string(GateClass c) {
  switch (c) {
    case GateClass::RZ: return "RZ";
    case GateClass::RX: return "RX";
    case GateClass::CZ: return "CZ";
    case GateClass::SPAM: return "SPAM";
    case GateClass::LAYER: return "LAYER";
  }
  return "?";
}

const ChannelSpec& NoiseModel::channel(GateClass c) const {
  switch (c) {
    case GateClass::RZ: return rz;
    case GateClass::RX: return rx;
    case GateClass::CZ: return cz;
    case GateClass::SPAM: return spam;
    case GateClass::LAYER: return layer;
  }
  throw ValidationError("unassigned gate class");
}

ChannelSpec& NoiseModel::channel(GateClass c) {
  return const_cast<ChannelSpec&>(static_cast<const NoiseModel&>(*this).channel(c));
}

void NoiseModel::validate() const {
  for (auto c : {GateClass::RZ, GateClass::RX, GateClass::CZ, GateClass::SPAM, GateClass::LAYER}) {
    try {
      channel(c).validate();
    } catch (const ValidationError& e) {
      throw ValidationError(std::string(to_string(c)) + ": " + e.what());
    }
  }
}

Superoperator depolarizing_superop(double lambda, int n_qubits) {
  check_unit_interval(lambda, "depolarizing lambda");
  if (n_qubits < 1 || n_qubits > 2) throw ValidationError("depolarizing channel supports 1 or 2 qubits");
  return depolarizing_form(lambda, Index{1} << n_qubits);
}

Superoperator depolarizing_form(double p, Index hilbert_dim) {
  const Index d = hilbert_dim;
  const CVector id = vec(CMatrix::Identity(d, d));
  CMatrix m = p * CMatrix::Identity(d * d, d * d);
  m += ((1.0 - p) / static_cast<double>(d)) * id * id.adjoint();
  return Superoperator(std::move(m));
}

Superoperator amplitude_damping_superop(double epsilon) {
  check_unit_interval(epsilon, "amplitude damping epsilon");
  // vec order: rho00, rho10, rho01, rho11
  CMatrix m = CMatrix::Zero(4, 4);
  const double c = std::sqrt(1.0 - epsilon);
  m(0, 0) = 1.0;
  m(0, 3) = epsilon;
  m(1, 1) = c;
  m(2, 2) = c;
  m(3, 3) = 1.0 - epsilon;
  return Superoperator(std::move(m));
}

Superoperator compose(const Superoperator& outer, const Superoperator& inner) { return outer.after(inner); }

Superoperator channel_of_spec(const ChannelSpec& spec, const std::vector<int>& qubits, int n_qubits) {
  check_qubits(qubits, n_qubits);
  const Index dim = Index{1} << n_qubits;
  switch (spec.kind) {
    case ChannelKind::Identity:
      return Superoperator::identity(dim);
    case ChannelKind::Depolarizing:
      if (spec.support == Support::All)
        return embed(depolarizing_superop(spec.lambda, static_cast<int>(qubits.size())),
                     qubits.size() == 2 ? std::vector<int>{std::min(qubits[0], qubits[1]), std::max(qubits[0], qubits[1])}
                                        : qubits,
                     n_qubits);
      return per_qubit(depolarizing_superop(spec.lambda, 1), qubits, n_qubits);
    case ChannelKind::AmplitudeDamping:
      return per_qubit(amplitude_damping_superop(spec.epsilon), qubits, n_qubits);
    case ChannelKind::Unitary: {
      spec.validate();
      const auto s = Superoperator::conjugation(spec.unitary);
      if (spec.unitary.rows() == 2 && spec.support == Support::Each) return per_qubit(s, qubits, n_qubits);
      return embed(s, qubits, n_qubits);
    }
    case ChannelKind::Composite: {
      if (spec.parts.empty()) throw ValidationError("composite channel needs at least one part");
      Superoperator out = Superoperator::identity(dim);
      for (const auto& part : spec.parts) out = out.after(channel_of_spec(part, qubits, n_qubits));
      return out;
    }
  }
  throw ValidationError("unknown channel kind");
}

double depolarizing_parameter(const Superoperator& s) {
  const double d2 = static_cast<double>(s.matrix().rows());
  return (s.matrix().trace().real() - 1.0) / (d2 - 1.0);
}

// ---------------------------------------------------------------------------

RegisterNoise::Slot RegisterNoise::make(const Superoperator& s) {
  if (!s.is_cptp()) throw ValidationError("noise model is not CPTP");
  Slot slot;
  slot.identity = exactly_identity(s.matrix());
  slot.op = s;
  return slot;
}

RegisterNoise::RegisterNoise(const NoiseModel& model, int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > 2) throw ValidationError("register must have 1 or 2 qubits");
  model.validate();
  for (int q = 0; q < n_qubits; ++q) {
    rz_[static_cast<std::size_t>(q)] = make(channel_of_spec(model.rz, {q}, n_qubits));
    rx_[static_cast<std::size_t>(q)] = make(channel_of_spec(model.rx, {q}, n_qubits));
  }
  if (n_qubits == 2) cz_ = make(channel_of_spec(model.cz, {0, 1}, n_qubits));
  spam_ = make(channel_of_spec(model.spam, all_qubits(n_qubits), n_qubits));
  layer_ = make(channel_of_spec(model.layer, all_qubits(n_qubits), n_qubits));
}

const Superoperator* RegisterNoise::after_gate(const NativeGate& g) const {
  g.validate(n_qubits_);
  const auto q = static_cast<std::size_t>(g.qubits[0]);
  switch (g.kind) {
    case GateKind::RZ: return slot(rz_[q]);
    case GateKind::RX: return slot(rx_[q]);
    case GateKind::CZ: return slot(cz_);
  }
  throw ValidationError("unassigned gate class");
}

Superoperator effective_noise_channel(const GateSequence& seq, const RegisterNoise& noise) {
  if (seq.n_qubits != noise.n_qubits()) throw ValidationError("sequence and noise register sizes differ");
  seq.validate();
  const Index d = Index{1} << seq.n_qubits;
  CMatrix total = CMatrix::Identity(d * d, d * d);
  for (const auto& g : seq.gates) {
    total = Superoperator::conjugation(gate_matrix(g, seq.n_qubits).matrix()).matrix() * total;
    if (const auto* lam = noise.after_gate(g)) total = lam->matrix() * total;
  }
  if (const auto* lam = noise.layer()) total = lam->matrix() * total;
  const CMatrix u = sequence_unitary(seq).matrix();
  return Superoperator(total * Superoperator::conjugation(u.adjoint()).matrix());
}

Superoperator effective_noise_channel(const GateSequence& seq, const NoiseModel& model) {
  return effective_noise_channel(seq, RegisterNoise(model, seq.n_qubits));
}

TwirlResult haar_twirl_mc(const Superoperator& lambda, std::size_t n_samples, const RandomSource& rng) {
  if (n_samples < kMinTwirlSamples)
    throw ValidationError("haar_twirl_mc needs at least " + std::to_string(kMinTwirlSamples) + " samples");
  const Index d = lambda.hilbert_dim();
  const Index d2 = d * d;
  constexpr std::size_t kChunk = 256;
  const std::size_t chunks = (n_samples + kChunk - 1) / kChunk;

  struct Partial {
    CMatrix sum;
    Eigen::MatrixXd sq_re;
    Eigen::MatrixXd sq_im;
  };
  std::vector<Partial> partial(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    Partial p{CMatrix::Zero(d2, d2), Eigen::MatrixXd::Zero(d2, d2), Eigen::MatrixXd::Zero(d2, d2)};
    const std::size_t end = std::min(n_samples, (c + 1) * kChunk);
    for (std::size_t k = c * kChunk; k < end; ++k) {
      RandomSource stream = rng.substream(k);
      const CMatrix u = qr_haar_oracle(d, stream).matrix();
      const CMatrix s = Superoperator::conjugation(u.adjoint()).matrix() * lambda.matrix() *
                        Superoperator::conjugation(u).matrix();
      p.sum += s;
      p.sq_re += s.real().cwiseAbs2();
      p.sq_im += s.imag().cwiseAbs2();
    }
    partial[c] = std::move(p);
  });

  CMatrix sum = CMatrix::Zero(d2, d2);
  Eigen::MatrixXd sq_re = Eigen::MatrixXd::Zero(d2, d2);
  Eigen::MatrixXd sq_im = Eigen::MatrixXd::Zero(d2, d2);
  for (const auto& p : partial) {
    sum += p.sum;
    sq_re += p.sq_re;
    sq_im += p.sq_im;
  }
  const double n = static_cast<double>(n_samples);
  CMatrix mean = sum / n;
  auto se = [n](const Eigen::MatrixXd& sq, const Eigen::MatrixXd& m) {
    Eigen::MatrixXd var = ((sq / n - m.cwiseAbs2()) * (n / (n - 1.0))).cwiseMax(0.0);
    return Eigen::MatrixXd((var / n).cwiseSqrt());
  };
  TwirlResult out{Superoperator(mean), se(sq_re, mean.real()), se(sq_im, mean.imag()), n_samples};
  return out;
}

}  // namespace rrb
