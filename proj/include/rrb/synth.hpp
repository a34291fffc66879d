#pragma once

#include <array>
#include <utility>

#include "rrb/core.hpp"
#include "rrb/params.hpp"

namespace rrb {

/// Magic basis change (1/sqrt2) [[1,i,0,0],[0,0,i,1],[0,0,i,-1],[1,-i,0,0]].
/// Maps SU(2) (x) SU(2) onto SO(4) by conjugation.
const CMatrix& magic_matrix();

/// u = M^dagger U M. Throws ValidationError unless `u` is 4x4.
Unitary to_magic_basis(const Unitary& u);
/// U = M u M^dagger.
Unitary from_magic_basis(const Unitary& u);

/// Mixing constant used to pick a real eigenbasis of a complex symmetric
/// unitary: eigenvectors of Re(W) + c Im(W).
inline constexpr double kEigenbasisMixing = 0.371;

/// Real orthogonal Q (det +1) and eigenphases in (-pi, pi], sorted ascending,
/// with W = Q diag(e^{i phases}) Q^T for a complex symmetric unitary W.
struct SymmetricEigen {
  Eigen::Matrix4d basis;
  std::array<double, 4> phases{};
};
SymmetricEigen symmetric_unitary_eigen(const Eigen::Matrix4cd& w);

SingleQubitParams decompose_1q(const Unitary& u);
CMatrix reconstruct_1q(const SingleQubitParams& p);

/// Dense V(alpha, beta, delta) = exp(i/2 (beta XX + delta YY + alpha ZZ)).
CMatrix entangler_matrix(double alpha, double beta, double delta);

/// Splits a 4x4 matrix proportional to A (x) B into unitary 2x2 factors
/// with det B = 1. The scalar left over is folded into A.
std::pair<CMatrix, CMatrix> split_tensor_product(const CMatrix& m);

TwoQubitParams decompose_2q(const Unitary& u);
Unitary reconstruct_2q(const TwoQubitParams& p);

}  // namespace rrb
