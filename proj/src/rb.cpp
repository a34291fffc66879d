#include "rrb/rb.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <memory>
#include <mutex>

#include "rrb/haar.hpp"
#include "rrb/parallel.hpp"
#include "rrb/stats.hpp"
#include "rrb/synth.hpp"

namespace rrb {

const char* to_string(Scheme s) { return s == Scheme::Restricted ? "restricted" : "clifford"; }

Scheme scheme_from_string(const std::string& s) {
  if (s == "restricted") return Scheme::Restricted;
  if (s == "clifford") return Scheme::Clifford;
  throw ValidationError("unknown scheme '" + s + "' (expected restricted or clifford)");
}

std::vector<int> default_lengths() { return {1, 2, 4, 6, 10, 16, 26, 42, 68, 110}; }

void RBConfig::validate() const {
  if (n_qubits != 1 && n_qubits != 2) throw ValidationError("qubits must be 1 or 2");
  if (lengths.empty()) throw ValidationError("at least one sequence length is required");
  for (int m : lengths)
    if (m < 1) throw ValidationError("sequence lengths must be >= 1");
  if (sequences < 1) throw ValidationError("sequences must be >= 1");
  if (shots < 1) throw ValidationError("shots must be >= 1");
  noise.validate();
}

GateSequence compile_fixed_depth(const Unitary& u) {
  if (u.dim() == 2) {
    const auto p = decompose_1q(u);
    return single_qubit_template(p.phi, p.theta, p.omega);
  }
  if (u.dim() == 4) return two_qubit_template(decompose_2q(u));
  throw ValidationError("only 1- and 2-qubit unitaries can be compiled");
}

RBSequence generate_restricted_sequence(int m, int n_qubits, RandomSource& rng) {
  if (m < 1) throw ValidationError("sequence length must be >= 1");
  if (n_qubits != 1 && n_qubits != 2) throw ValidationError("qubits must be 1 or 2");
  RBSequence out;
  out.operations.reserve(static_cast<std::size_t>(m) + 1);
  CMatrix total = CMatrix::Identity(Index{1} << n_qubits, Index{1} << n_qubits);
  for (int i = 0; i < m; ++i) {
    HaarCircuit c = n_qubits == 1 ? haar_1q(rng) : haar_2q(rng);
    total = c.unitary.matrix() * total;
    out.operations.push_back(std::move(c.sequence));
  }
  out.operations.push_back(compile_fixed_depth(Unitary(CMatrix(total.adjoint()), 1e-8)));
  return out;
}

// ---------------------------------------------------------------------------
// Clifford group

namespace {

// Phase-insensitive fingerprint: rotate the first sizeable entry onto the
// positive real axis and round.
std::string phase_key(const CMatrix& u) {
  Complex ref(1.0);
  for (Index k = 0; k < u.size(); ++k)
    if (std::abs(u(k)) > 0.1) {
      ref = std::conj(u(k)) / std::abs(u(k));
      break;
    }
  std::string key;
  key.reserve(static_cast<std::size_t>(u.size()) * 2 * sizeof(long long));
  for (Index j = 0; j < u.cols(); ++j)
    for (Index i = 0; i < u.rows(); ++i) {
      const Complex z = u(i, j) * ref;
      for (double part : {z.real(), z.imag()}) {
        long long r = std::llround(part * 1e6);
        if (r == 0) r = 0;  // drop sign of zero
        char buf[sizeof r];
        std::memcpy(buf, &r, sizeof r);
        key.append(buf, sizeof r);
      }
    }
  return key;
}

std::vector<CMatrix> clifford_generators(int n_qubits) {
  CMatrix h(2, 2), s(2, 2);
  h << 1, 1, -1, 1;
  h /= std::sqrt(2.0);
  s << 1, 0, 0, Complex(0, 1);
  if (n_qubits == 1) return {h, s};
  const CMatrix id = CMatrix::Identity(2, 2);
  CMatrix cnot = CMatrix::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
  return {kron(h, id), kron(id, h), kron(s, id), kron(id, s), cnot};
}

}  // namespace

CliffordGroup::CliffordGroup(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits != 1 && n_qubits != 2) throw ValidationError("qubits must be 1 or 2");
  const Index d = Index{1} << n_qubits;
  const auto gens = clifford_generators(n_qubits);

  std::vector<CMatrix> found{CMatrix::Identity(d, d)};
  std::vector<std::pair<std::string, std::size_t>> keys{{phase_key(found[0]), 0}};
  std::sort(keys.begin(), keys.end());
  auto known = [&keys](const std::string& k) {
    auto it = std::lower_bound(keys.begin(), keys.end(), std::make_pair(k, std::size_t{0}));
    return it != keys.end() && it->first == k;
  };
  for (std::size_t head = 0; head < found.size(); ++head) {
    for (const auto& g : gens) {
      CMatrix next = g * found[head];
      std::string k = phase_key(next);
      if (known(k)) continue;
      auto it = std::lower_bound(keys.begin(), keys.end(), std::make_pair(k, std::size_t{0}));
      keys.insert(it, {std::move(k), found.size()});
      found.push_back(std::move(next));
    }
  }
  lookup_ = std::move(keys);
  elements_.reserve(found.size());
  for (auto& m : found) elements_.emplace_back(std::move(m), 1e-9);
  compiled_.resize(elements_.size());
  parallel_for(elements_.size(), [&](std::size_t i) { compiled_[i] = compile_fixed_depth(elements_[i]); });
}

std::size_t CliffordGroup::index_of(const CMatrix& u) const {
  const std::string k = phase_key(u);
  auto it = std::lower_bound(lookup_.begin(), lookup_.end(), std::make_pair(k, std::size_t{0}));
  if (it == lookup_.end() || it->first != k) throw ValidationError("matrix is not a Clifford group element");
  return it->second;
}

const CliffordGroup& clifford_group(int n_qubits) {
  if (n_qubits == 1) {
    static const CliffordGroup one(1);
    return one;
  }
  if (n_qubits == 2) {
    static const CliffordGroup two(2);
    return two;
  }
  throw ValidationError("qubits must be 1 or 2");
}

RBSequence generate_clifford_sequence(int m, const CliffordGroup& group, RandomSource& rng,
                                      std::vector<std::size_t>* drawn) {
  if (m < 1) throw ValidationError("sequence length must be >= 1");
  const Index d = Index{1} << group.n_qubits();
  RBSequence out;
  out.operations.reserve(static_cast<std::size_t>(m) + 1);
  CMatrix total = CMatrix::Identity(d, d);
  for (int i = 0; i < m; ++i) {
    const std::size_t k = rng.below(group.size());
    if (drawn) drawn->push_back(k);
    total = group.element(k).matrix() * total;
    out.operations.push_back(group.compiled(k));
  }
  out.operations.push_back(group.compiled(group.index_of(total.adjoint())));
  return out;
}

// ---------------------------------------------------------------------------
// Simulation

namespace {

CMatrix apply_super(const Superoperator& s, const CMatrix& rho) {
  const CVector v = s.matrix() * vec(rho);
  return unvec(v, rho.rows());
}

// Runs of noiseless gates are merged into one unitary before touching rho.
CMatrix raw_gate(const NativeGate& g, int n) {
  switch (g.kind) {
    case GateKind::RZ: return embed_1q(rz_matrix(g.angle), g.qubits[0], n);
    case GateKind::RX: return embed_1q(rx_matrix(g.angle), g.qubits[0], n);
    case GateKind::CZ: return cz_matrix();
  }
  return {};
}

}  // namespace

CMatrix evolve(const RBSequence& seq, const RegisterNoise& noise) {
  const int n = noise.n_qubits();
  const Index d = Index{1} << n;
  CMatrix rho = CMatrix::Zero(d, d);
  rho(0, 0) = 1.0;
  CMatrix pending = CMatrix::Identity(d, d);
  bool dirty = false;
  auto flush = [&] {
    if (!dirty) return;
    rho = pending * rho * pending.adjoint();
    pending.setIdentity();
    dirty = false;
  };
  for (const auto& op : seq.operations) {
    if (op.n_qubits != n) throw ValidationError("sequence and noise register sizes differ");
    for (const auto& g : op.gates) {
      pending = raw_gate(g, n) * pending;
      dirty = true;
      if (const auto* lam = noise.after_gate(g)) {
        flush();
        rho = apply_super(*lam, rho);
      }
    }
    if (const auto* lam = noise.layer()) {
      flush();
      rho = apply_super(*lam, rho);
    }
  }
  flush();
  if (const auto* lam = noise.spam()) rho = apply_super(*lam, rho);
  return rho;
}

Survival simulate_survival(const RBSequence& seq, const RegisterNoise& noise, std::size_t shots, RandomSource& rng) {
  if (shots < 1) throw ValidationError("shots must be >= 1");
  const CMatrix rho = evolve(seq, noise);
  const double q = rho(0, 0).real();
  if (!(q >= -1e-10 && q <= 1.0 + 1e-10)) throw ValidationError("survival probability out of range: " + std::to_string(q));
  Survival s;
  s.exact = std::clamp(q, 0.0, 1.0);
  s.estimate = static_cast<double>(rng.binomial(shots, s.exact)) / static_cast<double>(shots);
  return s;
}

Survival simulate_survival(const RBSequence& seq, const NoiseModel& model, std::size_t shots, RandomSource& rng) {
  return simulate_survival(seq, RegisterNoise(model, seq.n_qubits()), shots, rng);
}

RBResult run_rb(const RBConfig& config) {
  config.validate();
  const RegisterNoise noise(config.noise, config.n_qubits);
  const CliffordGroup* group = config.scheme == Scheme::Clifford ? &clifford_group(config.n_qubits) : nullptr;
  const RandomSource master(config.seed);

  RBResult result;
  result.config = config;
  result.lengths.resize(config.lengths.size());
  for (std::size_t li = 0; li < config.lengths.size(); ++li) {
    result.lengths[li].m = config.lengths[li];
    result.lengths[li].survival.resize(config.sequences);
    result.lengths[li].exact.resize(config.sequences);
  }

  const std::size_t total = config.lengths.size() * config.sequences;
  parallel_for(total, [&](std::size_t job) {
    const std::size_t li = job / config.sequences;
    const std::size_t si = job % config.sequences;
    RandomSource rng = master.substream(li).substream(si);
    const int m = config.lengths[li];
    const RBSequence seq =
        group ? generate_clifford_sequence(m, *group, rng) : generate_restricted_sequence(m, config.n_qubits, rng);
    const Survival s = simulate_survival(seq, noise, config.shots, rng);
    result.lengths[li].survival[si] = s.estimate;
    result.lengths[li].exact[si] = s.exact;
  });

  for (auto& l : result.lengths) {
    l.mean = stats::mean(l.survival);
    l.stddev = stats::stddev(l.survival);
  }
  return result;
}

}  // namespace rrb
