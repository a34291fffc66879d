#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rrb/core.hpp"
#include "rrb/gates.hpp"
#include "rrb/params.hpp"
#include "rrb/random.hpp"
#include "rrb/stats.hpp"

namespace rrb {

// ---------------------------------------------------------------------------
// Samplers

/// theta = arccos(1 - 2u): inverse CDF of the density sin(theta)/2 on [0, pi].
double theta_from_uniform(double u);

/// phi, omega ~ U(0, 2pi), theta ~ sin(theta)/2, zero global phase.
SingleQubitParams sample_1q_params(RandomSource& rng);

struct EigenphaseQuadruple {
  std::array<double, 4> phases{};
};

/// prod_{i<j} |e^{i p_i} - e^{i p_j}|^2, the unnormalized Weyl density.
double weyl_vandermonde(const std::array<double, 4>& phases);

/// Maximum of weyl_vandermonde (attained at equispaced phases): n^n = 256.
inline constexpr double kWeylEnvelope = 256.0;

/// Rejection sampling of the n = 4 Weyl density against a uniform proposal
/// on (-pi, pi]^4. Acceptance rate 4!/256.
EigenphaseQuadruple sample_weyl_phases(RandomSource& rng);
/// Same, also adding the number of proposals consumed to `proposals`.
EigenphaseQuadruple sample_weyl_phases(RandomSource& rng, std::uint64_t& proposals);

/// alpha, beta, delta from pairwise half-sums of Weyl phases, with four
/// independent single-qubit Haar draws for A, B, C, D.
TwoQubitParams sample_2q_params(RandomSource& rng);

struct HaarCircuit {
  GateSequence sequence;
  Unitary unitary;
};

HaarCircuit haar_1q(RandomSource& rng);
HaarCircuit haar_2q(RandomSource& rng);

/// count circuits, circuit i drawn from master.substream(i).
std::vector<HaarCircuit> sample_haar_circuits(int n_qubits, std::size_t count, const RandomSource& master);

/// QR of a complex Ginibre matrix with the R-diagonal phase correction.
Unitary qr_haar_oracle(Index dim, RandomSource& rng);
/// count oracle unitaries, unitary i drawn from master.substream(i).
std::vector<Unitary> qr_haar_ensemble(Index dim, std::size_t count, const RandomSource& master);

// ---------------------------------------------------------------------------
// Verification

inline constexpr std::size_t kMinVerificationSamples = 1000;

struct BlochReport {
  std::size_t samples = 0;
  double alpha = 0.01;
  stats::KsResult ks_z;
  stats::KsResult ks_azimuth;
  std::array<double, 3> first_moments{};
  std::array<double, 3> second_moments{};
  /// z-scores of the first moments against 0 and second moments against 1/3.
  std::array<double, 6> moment_z{};
  double moment_threshold = 0.0;
  bool pass = false;
};

/// Bloch vector (x, y, z) of a normalized single-qubit pure state.
std::array<double, 3> bloch_vector(const CVector& psi);

/// Family-wise test at level alpha (Bonferroni over the two KS tests and
/// six moment tests).
BlochReport verify_bloch_uniformity(const std::vector<CVector>& states, double alpha = 0.01);

inline constexpr int kSpacingBins = 40;
inline constexpr double kSpacingMax = 4.0;

struct SpacingReport {
  Index dim = 0;
  std::size_t unitaries = 0;
  std::vector<double> histogram;         ///< fractions per bin on [0, 4]
  std::vector<double> oracle_histogram;  ///< same for the QR-oracle ensemble
  double overflow = 0.0;
  double oracle_overflow = 0.0;
  double total_variation = 0.0;
  bool degenerate = false;
};

/// Circular nearest-neighbour spacings of the sorted eigenphases, divided by
/// the mean spacing 2pi/d.
std::vector<double> normalized_spacings(const CMatrix& u);

/// Histogram of normalized spacings against a same-size QR-oracle ensemble
/// drawn from `oracle_rng`.
SpacingReport eigenphase_spacing_stats(const std::vector<Unitary>& us, const RandomSource& oracle_rng);

struct FramePotential {
  double value = 0.0;
  std::uint64_t pairs = 0;
};

/// Mean of |Tr(U_i^dag U_j)|^{2t} over distinct pairs i < j (all pairs up to
/// 20000 samples, a fixed window of following samples beyond that).
FramePotential frame_potential(const std::vector<Unitary>& us, int t);

}  // namespace rrb
