#include "rrb/haar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <set>

#include "rrb/parallel.hpp"
#include "rrb/synth.hpp"

namespace rrb {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const Complex kI(0.0, 1.0);
}  // namespace

double theta_from_uniform(double u) { return std::acos(std::clamp(1.0 - 2.0 * u, -1.0, 1.0)); }

SingleQubitParams sample_1q_params(RandomSource& rng) {
  SingleQubitParams p;
  p.phi = rng.uniform(0.0, kTwoPi);
  p.theta = theta_from_uniform(rng.uniform());
  p.omega = rng.uniform(0.0, kTwoPi);
  return p;
}

double weyl_vandermonde(const std::array<double, 4>& phases) {
  double v = 1.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) v *= std::norm(std::exp(kI * phases[i]) - std::exp(kI * phases[j]));
  return v;
}

EigenphaseQuadruple sample_weyl_phases(RandomSource& rng, std::uint64_t& proposals) {
  for (;;) {
    EigenphaseQuadruple q;
    // uniform on (-pi, pi]
    for (double& p : q.phases) p = kPi - kTwoPi * rng.uniform();
    ++proposals;
    if (rng.uniform() * kWeylEnvelope < weyl_vandermonde(q.phases)) return q;
  }
}

EigenphaseQuadruple sample_weyl_phases(RandomSource& rng) {
  std::uint64_t unused = 0;
  return sample_weyl_phases(rng, unused);
}

TwoQubitParams sample_2q_params(RandomSource& rng) {
  const auto w = sample_weyl_phases(rng);
  TwoQubitParams p;
  p.alpha = 0.5 * (w.phases[0] + w.phases[1]);
  p.beta = 0.5 * (w.phases[0] + w.phases[2]);
  p.delta = 0.5 * (w.phases[1] + w.phases[2]);
  p.a = sample_1q_params(rng);
  p.b = sample_1q_params(rng);
  p.c = sample_1q_params(rng);
  p.d = sample_1q_params(rng);
  return p;
}

HaarCircuit haar_1q(RandomSource& rng) {
  const auto p = sample_1q_params(rng);
  GateSequence seq = single_qubit_template(p.phi, p.theta, p.omega);
  Unitary u = sequence_unitary(seq);
  return HaarCircuit{std::move(seq), std::move(u)};
}

HaarCircuit haar_2q(RandomSource& rng) {
  GateSequence seq = two_qubit_template(sample_2q_params(rng));
  Unitary u = sequence_unitary(seq);
  return HaarCircuit{std::move(seq), std::move(u)};
}

std::vector<HaarCircuit> sample_haar_circuits(int n_qubits, std::size_t count, const RandomSource& master) {
  if (n_qubits != 1 && n_qubits != 2) throw ValidationError("Haar circuits are defined for 1 or 2 qubits");
  std::vector<std::optional<HaarCircuit>> slots(count);
  parallel_for(count, [&](std::size_t i) {
    RandomSource rng = master.substream(i);
    slots[i] = n_qubits == 1 ? haar_1q(rng) : haar_2q(rng);
  });
  std::vector<HaarCircuit> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

Unitary qr_haar_oracle(Index dim, RandomSource& rng) {
  if (dim < 2) throw ValidationError("Haar oracle needs dimension >= 2");
  CMatrix z(dim, dim);
  for (Index j = 0; j < dim; ++j)
    for (Index i = 0; i < dim; ++i) z(i, j) = Complex(rng.normal(), rng.normal()) / std::sqrt(2.0);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return Unitary(std::move(q));
}

std::vector<Unitary> qr_haar_ensemble(Index dim, std::size_t count, const RandomSource& master) {
  std::vector<std::optional<Unitary>> slots(count);
  parallel_for(count, [&](std::size_t i) {
    RandomSource rng = master.substream(i);
    slots[i] = qr_haar_oracle(dim, rng);
  });
  std::vector<Unitary> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// ---------------------------------------------------------------------------

std::array<double, 3> bloch_vector(const CVector& psi) {
  if (psi.size() != 2) throw ValidationError("Bloch vector needs a single-qubit state");
  const CVector n = psi / psi.norm();
  const Complex c = std::conj(n(0)) * n(1);
  return {2.0 * c.real(), 2.0 * c.imag(), std::norm(n(0)) - std::norm(n(1))};
}

BlochReport verify_bloch_uniformity(const std::vector<CVector>& states, double alpha) {
  if (states.size() < kMinVerificationSamples)
    throw ValidationError("Bloch uniformity test needs at least " + std::to_string(kMinVerificationSamples) +
                          " samples, got " + std::to_string(states.size()));
  const std::size_t n = states.size();
  std::vector<double> z(n), azimuth(n);
  std::array<std::vector<double>, 3> coords;
  for (auto& c : coords) c.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto b = bloch_vector(states[i]);
    for (int k = 0; k < 3; ++k) coords[k][i] = b[k];
    z[i] = b[2];
    double az = std::atan2(b[1], b[0]);
    if (az < 0.0) az += kTwoPi;
    azimuth[i] = az;
  }

  BlochReport r;
  r.samples = n;
  r.alpha = alpha;
  r.ks_z = stats::ks_uniform(z, -1.0, 1.0);
  r.ks_azimuth = stats::ks_uniform(azimuth, 0.0, kTwoPi);

  // Uniform on the sphere: each coordinate has mean 0, E[x^2] = 1/3,
  // Var[x] = 1/3, Var[x^2] = 1/5 - 1/9 = 4/45.
  const double nn = static_cast<double>(n);
  for (int k = 0; k < 3; ++k) {
    double s1 = 0.0, s2 = 0.0;
    for (double v : coords[k]) {
      s1 += v;
      s2 += v * v;
    }
    r.first_moments[k] = s1 / nn;
    r.second_moments[k] = s2 / nn;
    r.moment_z[k] = r.first_moments[k] / std::sqrt(1.0 / 3.0 / nn);
    r.moment_z[3 + k] = (r.second_moments[k] - 1.0 / 3.0) / std::sqrt(4.0 / 45.0 / nn);
  }

  constexpr int kTests = 8;
  const double per_test = alpha / kTests;
  r.moment_threshold = stats::normal_two_sided_quantile(per_test);
  r.pass = r.ks_z.passes(per_test) && r.ks_azimuth.passes(per_test);
  for (double zscore : r.moment_z) r.pass = r.pass && std::abs(zscore) <= r.moment_threshold;
  return r;
}

std::vector<double> normalized_spacings(const CMatrix& u) {
  Eigen::ComplexEigenSolver<CMatrix> es(u, false);
  const Index d = u.rows();
  std::vector<double> phases(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) phases[i] = std::arg(es.eigenvalues()(i));
  std::sort(phases.begin(), phases.end());
  std::vector<double> out(phases.size());
  const double scale = static_cast<double>(d) / kTwoPi;
  for (std::size_t i = 0; i + 1 < phases.size(); ++i) out[i] = (phases[i + 1] - phases[i]) * scale;
  out.back() = (phases.front() + kTwoPi - phases.back()) * scale;
  return out;
}

namespace {
struct Histogram {
  std::vector<double> bins = std::vector<double>(kSpacingBins, 0.0);
  double overflow = 0.0;
};

Histogram spacing_histogram(const std::vector<Unitary>& us) {
  Histogram h;
  std::size_t total = 0;
  for (const auto& u : us) {
    for (double s : normalized_spacings(u.matrix())) {
      ++total;
      const auto bin = static_cast<long>(std::floor(s / kSpacingMax * kSpacingBins));
      if (bin >= 0 && bin < kSpacingBins) h.bins[bin] += 1.0; else h.overflow += 1.0;
    }
  }
  for (double& b : h.bins) b /= static_cast<double>(total);
  h.overflow /= static_cast<double>(total);
  return h;
}
}  // namespace

SpacingReport eigenphase_spacing_stats(const std::vector<Unitary>& us, const RandomSource& oracle_rng) {
  if (us.size() < kMinVerificationSamples)
    throw ValidationError("spacing statistics need at least " + std::to_string(kMinVerificationSamples) +
                          " unitaries, got " + std::to_string(us.size()));
  const Index dim = us.front().dim();
  for (const auto& u : us)
    if (u.dim() != dim) throw ValidationError("spacing statistics: unitaries of different dimension");

  SpacingReport r;
  r.dim = dim;
  r.unitaries = us.size();
  const Histogram h = spacing_histogram(us);
  const Histogram o = spacing_histogram(qr_haar_ensemble(dim, us.size(), oracle_rng));
  r.histogram = h.bins;
  r.oracle_histogram = o.bins;
  r.overflow = h.overflow;
  r.oracle_overflow = o.overflow;
  double tv = std::abs(h.overflow - o.overflow);
  for (int b = 0; b < kSpacingBins; ++b) tv += std::abs(h.bins[b] - o.bins[b]);
  r.total_variation = 0.5 * tv;
  const auto occupied = std::count_if(h.bins.begin(), h.bins.end(), [](double v) { return v > 0.0; });
  r.degenerate = occupied <= dim;
  return r;
}

FramePotential frame_potential(const std::vector<Unitary>& us, int t) {
  if (us.size() < 2) throw ValidationError("frame potential needs at least two unitaries");
  if (t < 1) throw ValidationError("frame potential order must be >= 1");
  const Index dim = us.front().dim();
  const std::size_t n = us.size();
  CMatrix flat(dim * dim, static_cast<Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (us[i].dim() != dim) throw ValidationError("frame potential: unitaries of different dimension");
    flat.col(static_cast<Index>(i)) = vec(us[i].matrix());
  }
  constexpr std::size_t kAllPairsLimit = 20000;
  constexpr std::size_t kWindow = 2000;
  const std::size_t window = n <= kAllPairsLimit ? n - 1 : kWindow;

  // Per-row partial sums keep the reduction order fixed.
  std::vector<double> row_sums(n, 0.0);
  std::vector<std::uint64_t> row_pairs(n, 0);
  parallel_for(n, [&](std::size_t i) {
    const std::size_t last = n <= kAllPairsLimit ? n - 1 : std::min(n - 1, i + window);
    double s = 0.0;
    for (std::size_t j = i + 1; j <= last; ++j) {
      const double overlap =
          std::norm(flat.col(static_cast<Index>(i)).dot(flat.col(static_cast<Index>(j))));
      s += std::pow(overlap, t);
    }
    row_sums[i] = s;
    row_pairs[i] = last >= i + 1 ? last - i : 0;
  });
  FramePotential fp;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += row_sums[i];
    fp.pairs += row_pairs[i];
  }
  fp.value = total / static_cast<double>(fp.pairs);
  return fp;
}

}  // namespace rrb
