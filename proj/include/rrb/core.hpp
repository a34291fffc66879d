#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "rrb/error.hpp"

namespace rrb {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

namespace tol {
inline constexpr double kAlgebraic = 1e-12;
inline constexpr double kUnitary = 1e-10;
inline constexpr double kCptp = 1e-8;
}  // namespace tol

// ---------------------------------------------------------------------------
// Expression helpers

template <typename Derived>
auto dagger(const Eigen::MatrixBase<Derived>& m) {
  return m.adjoint();
}

template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                                               a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Column-stacking vectorization: vec(A X B) = (B^T kron A) vec(X).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> vec(const Eigen::MatrixBase<Derived>& m) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> tmp = m;
  return Eigen::Map<const Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>>(tmp.data(), tmp.size());
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> unvec(const Eigen::MatrixBase<Derived>& v,
                                                                              Index rows) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> tmp = v;
  return Eigen::Map<const Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>>(
      tmp.data(), rows, tmp.size() / rows);
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

/// max-norm of U^dagger U - I.
double unitarity_defect(const CMatrix& m);

/// Sum of singular values.
double trace_norm(const CMatrix& m);

/// Trace norm of a Hermitian matrix (sum of |eigenvalues|).
double hermitian_trace_norm(const CMatrix& m);

// ---------------------------------------------------------------------------
// Value types

/// A square unitary matrix of dimension 2, 4 or 16. Immutable.
class Unitary {
 public:
  /// Throws ValidationError if `m` is not square, not finite, or fails
  /// unitarity at `tolerance`.
  explicit Unitary(CMatrix m, double tolerance = tol::kUnitary);

  static Unitary identity(Index dim);

  const CMatrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }

  Unitary adjoint() const;
  Unitary operator*(const Unitary& rhs) const;

 private:
  struct Unchecked {};
  Unitary(CMatrix m, Unchecked) : m_(std::move(m)) {}
  CMatrix m_;
};

/// Hermitian, positive semidefinite, unit trace.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix m, double tolerance = tol::kUnitary);

  static DensityMatrix pure(const CVector& psi);
  static DensityMatrix ground(Index dim);

  const CMatrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }

 private:
  CMatrix m_;
};

/// Linear map on d x d matrices stored as a d^2 x d^2 matrix acting on
/// column-stacked vectors.
class Superoperator {
 public:
  explicit Superoperator(CMatrix m);

  static Superoperator identity(Index hilbert_dim);
  /// rho -> U rho U^dagger
  static Superoperator conjugation(const CMatrix& u);

  const CMatrix& matrix() const { return m_; }
  Index hilbert_dim() const { return dim_; }

  CMatrix apply(const CMatrix& rho) const;

  /// Choi matrix sum_ij |i><j| (x) Lambda(|i><j|), ancilla first.
  CMatrix choi() const;
  /// Superoperator of the adjoint map with respect to the Hilbert-Schmidt product.
  Superoperator adjoint() const;

  bool is_trace_preserving(double tolerance = tol::kCptp) const;
  bool is_completely_positive(double tolerance = tol::kCptp) const;
  bool is_cptp(double tolerance = tol::kCptp) const {
    return is_trace_preserving(tolerance) && is_completely_positive(tolerance);
  }

  /// Composition: (*this) after `first`.
  Superoperator after(const Superoperator& first) const;

 private:
  CMatrix m_;
  Index dim_;
};

// ---------------------------------------------------------------------------
// Operations

/// min over theta of ||U - e^{i theta} V||_F, i.e. sqrt(2d - 2|Tr(U^dagger V)|).
double distance_up_to_global_phase(const CMatrix& u, const CMatrix& v);
inline double distance_up_to_global_phase(const Unitary& u, const Unitary& v) {
  return distance_up_to_global_phase(u.matrix(), v.matrix());
}

/// <psi|rho|psi>, clamped to [0, 1].
double state_fidelity(const DensityMatrix& rho, const CVector& psi);

/// Superoperator of the tensor product of two maps, first factor on the
/// more significant subsystem.
Superoperator tensor(const Superoperator& a, const Superoperator& b);

}  // namespace rrb
