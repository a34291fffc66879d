#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rrb/channels.hpp"
#include "rrb/core.hpp"
#include "rrb/gates.hpp"
#include "rrb/random.hpp"

namespace rrb {

enum class Scheme { Restricted, Clifford };
const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

/// {1, 2, 4, 6, 10, 16, 26, 42, 68, 110}
std::vector<int> default_lengths();

struct RBConfig {
  int n_qubits = 2;
  Scheme scheme = Scheme::Restricted;
  std::vector<int> lengths = default_lengths();
  std::size_t sequences = 200;
  std::size_t shots = 800;
  NoiseModel noise;
  std::uint64_t seed = 0;

  void validate() const;
};

/// m random operations followed by the inverse, each compiled to the
/// fixed-depth template of the register.
struct RBSequence {
  std::vector<GateSequence> operations;
  int n_qubits() const { return operations.front().n_qubits; }
};

/// Fixed-depth compilation of an arbitrary 1Q or 2Q unitary.
GateSequence compile_fixed_depth(const Unitary& u);

RBSequence generate_restricted_sequence(int m, int n_qubits, RandomSource& rng);

/// Clifford group modulo global phase, with every element precompiled.
class CliffordGroup {
 public:
  explicit CliffordGroup(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return elements_.size(); }
  const Unitary& element(std::size_t i) const { return elements_[i]; }
  const GateSequence& compiled(std::size_t i) const { return compiled_[i]; }
  /// Index of `u` up to global phase; throws if it is not in the group.
  std::size_t index_of(const CMatrix& u) const;

 private:
  int n_qubits_;
  std::vector<Unitary> elements_;
  std::vector<GateSequence> compiled_;
  std::vector<std::pair<std::string, std::size_t>> lookup_;  // sorted by key
};

/// Built once per qubit count and shared.
const CliffordGroup& clifford_group(int n_qubits);

/// Uniform group draws; `drawn`, when given, receives the element indices.
RBSequence generate_clifford_sequence(int m, const CliffordGroup& group, RandomSource& rng,
                                      std::vector<std::size_t>* drawn = nullptr);

struct Survival {
  double exact = 1.0;     ///< <0..0| rho_final |0..0>
  double estimate = 1.0;  ///< Binomial(shots, exact) / shots
};

/// Final state of the noisy evolution from |0..0>.
CMatrix evolve(const RBSequence& seq, const RegisterNoise& noise);
Survival simulate_survival(const RBSequence& seq, const RegisterNoise& noise, std::size_t shots, RandomSource& rng);
Survival simulate_survival(const RBSequence& seq, const NoiseModel& model, std::size_t shots, RandomSource& rng);

struct LengthResult {
  int m = 0;
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> survival;  ///< shot estimates per sequence
  std::vector<double> exact;     ///< exact probabilities per sequence
};

struct RBResult {
  RBConfig config;
  std::vector<LengthResult> lengths;
};

RBResult run_rb(const RBConfig& config);

}  // namespace rrb
