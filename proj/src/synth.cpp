#include "rrb/synth.hpp"

#include "rrb/gates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace rrb {

namespace {
const Complex kI(0.0, 1.0);

// Nearest unitary in Frobenius norm.
CMatrix polar_unitary(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

double phase_of_overlap(const CMatrix& target, const CMatrix& approx) {
  return std::arg((approx.adjoint() * target).trace());
}
}  // namespace

const CMatrix& magic_matrix() {
  static const CMatrix m = [] {
    CMatrix l(4, 4);
    l << 1.0, kI, 0.0, 0.0,
        0.0, 0.0, kI, 1.0,
        0.0, 0.0, kI, -1.0,
        1.0, -kI, 0.0, 0.0;
    return CMatrix(l / std::sqrt(2.0));
  }();
  return m;
}

Unitary to_magic_basis(const Unitary& u) {
  if (u.dim() != 4) throw ValidationError("magic basis transform needs a 4x4 unitary");
  const CMatrix& l = magic_matrix();
  return Unitary(l.adjoint() * u.matrix() * l);
}

Unitary from_magic_basis(const Unitary& u) {
  if (u.dim() != 4) throw ValidationError("magic basis transform needs a 4x4 unitary");
  const CMatrix& l = magic_matrix();
  return Unitary(l * u.matrix() * l.adjoint());
}

SymmetricEigen symmetric_unitary_eigen(const Eigen::Matrix4cd& w) {
  const Eigen::Matrix4d re = 0.5 * (w.real() + w.real().transpose());
  const Eigen::Matrix4d im = 0.5 * (w.imag() + w.imag().transpose());

  // Re(W) and Im(W) commute; a generic real combination of them separates
  // every distinct eigenvalue of W. If an unlucky combination merges two,
  // the off-diagonal residual exposes it and the next constant is tried.
  constexpr std::array<double, 4> kMixings{kEigenbasisMixing, 1.618, -0.733, 2.71};
  Eigen::Matrix4d best_q = Eigen::Matrix4d::Identity();
  double best_residual = std::numeric_limits<double>::infinity();
  for (double c : kMixings) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(re + c * im);
    const Eigen::Matrix4d q = es.eigenvectors();
    Eigen::Matrix4cd dmat = q.transpose() * w * q;
    const double residual = (dmat - Eigen::Matrix4cd(dmat.diagonal().asDiagonal())).cwiseAbs().maxCoeff();
    if (residual < best_residual) {
      best_residual = residual;
      best_q = q;
    }
    if (residual <= 1e-9) break;
  }

  const Eigen::Matrix4cd dmat = best_q.transpose() * w * best_q;
  std::array<double, 4> phases{};
  for (int j = 0; j < 4; ++j) {
    phases[j] = std::arg(dmat(j, j));
    // keep the branch (-pi, pi] stable for eigenvalues at -1
    if (phases[j] <= -std::numbers::pi + 1e-9) phases[j] += 2.0 * std::numbers::pi;
  }

  std::array<int, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return phases[x] < phases[y]; });

  SymmetricEigen out;
  for (int j = 0; j < 4; ++j) {
    out.basis.col(j) = best_q.col(order[j]);
    out.phases[j] = phases[order[j]];
  }
  if (out.basis.determinant() < 0.0) out.basis.col(0) *= -1.0;
  return out;
}

// ---------------------------------------------------------------------------

SingleQubitParams decompose_1q(const Unitary& unitary) {
  if (unitary.dim() != 2) throw ValidationError("decompose_1q needs a 2x2 unitary");
  const CMatrix& u = unitary.matrix();
  constexpr double kDegenerate = 1e-12;

  const double c = std::abs(u(0, 0));
  const double s = std::abs(u(1, 0));
  SingleQubitParams p;
  p.theta = 2.0 * std::atan2(s, c);
  if (s <= kDegenerate) {
    p.omega = 0.0;
    p.phi = std::arg(u(1, 1)) - std::arg(u(0, 0));
  } else if (c <= kDegenerate) {
    p.omega = 0.0;
    p.phi = std::arg(u(0, 1)) - std::arg(u(1, 0)) - std::numbers::pi;
  } else {
    const double sum = std::arg(u(1, 1)) - std::arg(u(0, 0));
    const double diff = std::arg(u(0, 1)) - std::arg(u(1, 0)) - std::numbers::pi;
    p.phi = 0.5 * (sum + diff);
    p.omega = 0.5 * (sum - diff);
    // sum and diff are only known mod 2pi, which leaves the relative sign of
    // the diagonal and off-diagonal entries open; shifting both angles by pi
    // flips the diagonal alone.
    const auto overlap = [&](double phi, double omega) {
      return std::abs((single_qubit_matrix(phi, p.theta, omega).adjoint() * u).trace());
    };
    if (overlap(p.phi + std::numbers::pi, p.omega + std::numbers::pi) > overlap(p.phi, p.omega)) {
      p.phi += std::numbers::pi;
      p.omega += std::numbers::pi;
    }
  }
  p.global_phase = phase_of_overlap(u, single_qubit_matrix(p.phi, p.theta, p.omega));
  return p;
}

CMatrix reconstruct_1q(const SingleQubitParams& p) {
  return std::exp(kI * p.global_phase) * single_qubit_matrix(p.phi, p.theta, p.omega);
}

CMatrix entangler_matrix(double alpha, double beta, double delta) {
  Eigen::Vector4cd diag;
  diag << std::exp(kI * (0.5 * (alpha + beta - delta))), std::exp(kI * (0.5 * (alpha - beta + delta))),
      std::exp(kI * (0.5 * (beta + delta - alpha))), std::exp(kI * (-0.5 * (alpha + beta + delta)));
  const CMatrix& l = magic_matrix();
  return l * diag.asDiagonal() * l.adjoint();
}

std::pair<CMatrix, CMatrix> split_tensor_product(const CMatrix& m) {
  if (m.rows() != 4 || m.cols() != 4) throw ValidationError("split_tensor_product needs a 4x4 matrix");
  Index bi = 0, bj = 0;
  double best = -1.0;
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) {
      const double n = m.block(2 * i, 2 * j, 2, 2).norm();
      if (n > best) {
        best = n;
        bi = i;
        bj = j;
      }
    }
  const CMatrix blk = m.block(2 * bi, 2 * bj, 2, 2);
  CMatrix b = polar_unitary(blk);
  b /= std::sqrt(b.determinant());
  CMatrix a(2, 2);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) a(i, j) = 0.5 * (b.adjoint() * m.block(2 * i, 2 * j, 2, 2)).trace();
  return {polar_unitary(a), b};
}

TwoQubitParams decompose_2q(const Unitary& unitary) {
  if (unitary.dim() != 4) throw ValidationError("decompose_2q needs a 4x4 unitary");
  const CMatrix& l = magic_matrix();

  const Complex det = unitary.matrix().determinant();
  const Eigen::Matrix4cd special = unitary.matrix() * std::exp(-kI * (std::arg(det) / 4.0));
  const Eigen::Matrix4cd u = l.adjoint() * special * l;
  const Eigen::Matrix4cd w = u * u.transpose();

  const SymmetricEigen eig = symmetric_unitary_eigen(w);
  const auto& ph = eig.phases;

  TwoQubitParams p;
  p.alpha = 0.5 * (ph[0] + ph[1]);
  p.beta = 0.5 * (ph[0] + ph[2]);
  p.delta = 0.5 * (ph[1] + ph[2]);

  Eigen::Vector4cd half;
  half << std::exp(kI * (0.5 * ph[0])), std::exp(kI * (0.5 * ph[1])), std::exp(kI * (0.5 * ph[2])),
      std::exp(-kI * (0.5 * (ph[0] + ph[1] + ph[2])));

  // u = Q v a with v = diag(half) and a real orthogonal.
  const Eigen::Matrix4cd q = eig.basis.cast<Complex>();
  const Eigen::Matrix4cd a = half.conjugate().asDiagonal() * (q.transpose() * u);

  const auto [mat_a, mat_b] = split_tensor_product(l * a * l.adjoint());
  const auto [mat_c, mat_d] = split_tensor_product(l * q * l.adjoint());

  p.a = decompose_1q(Unitary(mat_a));
  p.b = decompose_1q(Unitary(mat_b));
  p.c = decompose_1q(Unitary(mat_c));
  p.d = decompose_1q(Unitary(mat_d));

  p.global_phase = 0.0;
  const CMatrix rebuilt = reconstruct_2q(p).matrix();
  p.global_phase = phase_of_overlap(unitary.matrix(), rebuilt);
  return p;
}

Unitary reconstruct_2q(const TwoQubitParams& p) {
  const CMatrix before = kron(reconstruct_1q(p.a), reconstruct_1q(p.b));
  const CMatrix after = kron(reconstruct_1q(p.c), reconstruct_1q(p.d));
  const CMatrix v = entangler_matrix(p.alpha, p.beta, p.delta);
  return Unitary(std::exp(kI * p.global_phase) * after * v * before);
}

}  // namespace rrb
