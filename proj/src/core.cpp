#include "rrb/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rrb {

double unitarity_defect(const CMatrix& m) {
  const CMatrix d = m.adjoint() * m - CMatrix::Identity(m.cols(), m.cols());
  return d.cwiseAbs().maxCoeff();
}

double trace_norm(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues().sum();
}

double hermitian_trace_norm(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

// ---------------------------------------------------------------------------

Unitary::Unitary(CMatrix m, double tolerance) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0)
    throw ValidationError("unitary must be a non-empty square matrix, got " + std::to_string(m_.rows()) + "x" +
                          std::to_string(m_.cols()));
  if (!m_.allFinite()) throw ValidationError("unitary has non-finite entries");
  const double defect = unitarity_defect(m_);
  if (defect > tolerance)
    throw ValidationError("matrix is not unitary (max |U^dag U - I| = " + std::to_string(defect) + ")");
}

Unitary Unitary::identity(Index dim) { return Unitary(CMatrix::Identity(dim, dim), Unchecked{}); }

Unitary Unitary::adjoint() const { return Unitary(m_.adjoint(), Unchecked{}); }

Unitary Unitary::operator*(const Unitary& rhs) const {
  if (dim() != rhs.dim()) throw ValidationError("unitary product: dimension mismatch");
  return Unitary(m_ * rhs.m_, Unchecked{});
}

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(CMatrix m, double tolerance) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) throw ValidationError("density matrix must be square");
  if (!m_.allFinite()) throw ValidationError("density matrix has non-finite entries");
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tolerance) throw ValidationError("density matrix not Hermitian");
  if (std::abs(m_.trace() - Complex(1.0)) > tolerance) throw ValidationError("density matrix trace != 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tolerance) throw ValidationError("density matrix has negative eigenvalue");
}

DensityMatrix DensityMatrix::pure(const CVector& psi) {
  const CVector n = psi / psi.norm();
  return DensityMatrix(n * n.adjoint());
}

DensityMatrix DensityMatrix::ground(Index dim) {
  CMatrix m = CMatrix::Zero(dim, dim);
  m(0, 0) = 1.0;
  return DensityMatrix(std::move(m));
}

// ---------------------------------------------------------------------------

namespace {
Index hilbert_dim_of(Index n) {
  const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (d * d != n) throw ValidationError("superoperator size " + std::to_string(n) + " is not a perfect square");
  return d;
}
}  // namespace

Superoperator::Superoperator(CMatrix m) : m_(std::move(m)), dim_(0) {
  if (m_.rows() != m_.cols()) throw ValidationError("superoperator must be square");
  if (!m_.allFinite()) throw ValidationError("superoperator has non-finite entries");
  dim_ = hilbert_dim_of(m_.rows());
}

Superoperator Superoperator::identity(Index hilbert_dim) {
  return Superoperator(CMatrix::Identity(hilbert_dim * hilbert_dim, hilbert_dim * hilbert_dim));
}

Superoperator Superoperator::conjugation(const CMatrix& u) { return Superoperator(kron(u.conjugate(), u)); }

CMatrix Superoperator::apply(const CMatrix& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) throw ValidationError("superoperator apply: dimension mismatch");
  return unvec(m_ * vec(rho), dim_);
}

CMatrix Superoperator::choi() const {
  const Index d = dim_;
  CMatrix out = CMatrix::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      // column of E_ij in the column-stacked basis is i + j*d
      const CMatrix image = unvec(m_.col(i + j * d), d);
      out.block(i * d, j * d, d, d) = image;
    }
  }
  return out;
}

Superoperator Superoperator::adjoint() const { return Superoperator(m_.adjoint()); }

bool Superoperator::is_trace_preserving(double tolerance) const {
  // Tr(Lambda(X)) = vec(I)^dagger S vec(X) must equal vec(I)^dagger vec(X).
  const CVector id = vec(CMatrix::Identity(dim_, dim_));
  const CVector row = m_.adjoint() * id;
  return (row - id).cwiseAbs().maxCoeff() <= tolerance;
}

bool Superoperator::is_completely_positive(double tolerance) const {
  const CMatrix c = choi();
  if ((c - c.adjoint()).cwiseAbs().maxCoeff() > tolerance) return false;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(c, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tolerance;
}

Superoperator Superoperator::after(const Superoperator& first) const {
  if (dim_ != first.dim_) throw ValidationError("channel composition: dimension mismatch");
  return Superoperator(m_ * first.m_);
}

// ---------------------------------------------------------------------------

double distance_up_to_global_phase(const CMatrix& u, const CMatrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw ValidationError("distance_up_to_global_phase: dimension mismatch");
  // The minimizing phase aligns Tr(V^dag U); evaluating the norm there avoids
  // the cancellation in sqrt(2d - 2|Tr(U^dag V)|).
  const Complex overlap = (v.adjoint() * u).trace();
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
  return (u - phase * v).norm();
}

double state_fidelity(const DensityMatrix& rho, const CVector& psi) {
  if (psi.size() != rho.dim()) throw ValidationError("state_fidelity: dimension mismatch");
  const double f = (psi.adjoint() * rho.matrix() * psi)(0, 0).real();
  return std::clamp(f, 0.0, 1.0);
}

Superoperator tensor(const Superoperator& a, const Superoperator& b) {
  const Index da = a.hilbert_dim();
  const Index db = b.hilbert_dim();
  const Index d = da * db;
  const CMatrix& sa = a.matrix();
  const CMatrix& sb = b.matrix();
  CMatrix out = CMatrix::Zero(d * d, d * d);
  // Lambda(E_{(ia,ib),(ja,jb)}) = A(E_{ia,ja}) (x) B(E_{ib,jb})
  for (Index ia = 0; ia < da; ++ia)
    for (Index ja = 0; ja < da; ++ja)
      for (Index ib = 0; ib < db; ++ib)
        for (Index jb = 0; jb < db; ++jb) {
          const Index col = (ia * db + ib) + (ja * db + jb) * d;
          const Index col_a = ia + ja * da;
          const Index col_b = ib + jb * db;
          for (Index ra = 0; ra < da; ++ra)
            for (Index ca = 0; ca < da; ++ca) {
              const Complex va = sa(ra + ca * da, col_a);
              if (va == Complex(0.0)) continue;
              for (Index rb = 0; rb < db; ++rb)
                for (Index cb = 0; cb < db; ++cb)
                  out((ra * db + rb) + (ca * db + cb) * d, col) = va * sb(rb + cb * db, col_b);
            }
        }
  return Superoperator(std::move(out));
}

}  // namespace rrb
