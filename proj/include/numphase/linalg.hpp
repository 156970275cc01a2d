#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>

#include "numphase/common.hpp"

namespace numphase {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Finite complex Hermitian matrix. Inputs are checked entrywise against the
/// conjugate-transpose (1e-12 absolute) and then symmetrized, so construction
/// noise of a few ulp never leaks into downstream spectral code.
class HermitianOperator {
 public:
  explicit HermitianOperator(ComplexMatrix entries, double hermiticity_tol = 1e-12)
      : mat_(std::move(entries)) {
    if (mat_.rows() < 1 || mat_.rows() != mat_.cols()) {
      throw InvalidInputError("HermitianOperator: matrix must be square with dim >= 1");
    }
    const double dev = (mat_ - mat_.adjoint().eval()).cwiseAbs().maxCoeff();
    if (dev > 2.0 * hermiticity_tol) {
      throw InvalidInputError("HermitianOperator: symmetry violation " + std::to_string(dev));
    }
    mat_ = 0.5 * (mat_ + mat_.adjoint().eval());
  }

  static HermitianOperator identity(int dim) {
    return HermitianOperator(ComplexMatrix::Identity(dim, dim));
  }

  static HermitianOperator zero(int dim) {
    return HermitianOperator(ComplexMatrix::Zero(dim, dim));
  }

  static HermitianOperator diagonal(const RealVector& d) {
    ComplexMatrix m = ComplexMatrix::Zero(d.size(), d.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) m(i, i) = d(i);
    return HermitianOperator(std::move(m));
  }

  int dim() const { return static_cast<int>(mat_.rows()); }
  const ComplexMatrix& matrix() const { return mat_; }
  Complex entry(int r, int c) const { return mat_(r, c); }

 private:
  ComplexMatrix mat_;
};

/// Eigenvalues ascending, eigenvectors as orthonormal columns. Each column is
/// rotated so that its first component of magnitude > 1e-8 is real and
/// positive; that makes eigenvector coefficient tables comparable across runs.
struct SpectralDecomposition {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

namespace detail {

inline void fix_column_phases(ComplexMatrix& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      const double mag = std::abs(vectors(r, c));
      if (mag > 1e-8) {
        const Complex phase = vectors(r, c) / mag;
        vectors.col(c) *= std::conj(phase);
        break;
      }
    }
  }
}

}  // namespace detail

inline SpectralDecomposition eig_hermitian(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericalConsistencyError("eig_hermitian: eigensolver did not converge");
  }
  SpectralDecomposition dec;
  dec.eigenvalues = solver.eigenvalues();
  dec.eigenvectors = solver.eigenvectors();
  detail::fix_column_phases(dec.eigenvectors);
  return dec;
}

inline double min_eigenvalue(const HermitianOperator& a) {
  return eig_hermitian(a).eigenvalues(0);
}

inline double operator_norm(const HermitianOperator& a) {
  const RealVector& ev = eig_hermitian(a).eigenvalues;
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

inline bool is_psd(const HermitianOperator& a, double tol) {
  if (tol < 0.0) throw InvalidInputError("is_psd: tolerance must be nonnegative");
  return min_eigenvalue(a) >= -tol;
}

/// Inverse of a strictly positive definite operator via its spectral form.
/// Requires min eigenvalue > 1e-12 * ||A||.
inline HermitianOperator inverse_pd(const HermitianOperator& a) {
  const SpectralDecomposition dec = eig_hermitian(a);
  const RealVector& ev = dec.eigenvalues;
  const double norm = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  if (ev(0) <= 1e-12 * norm) {
    throw SingularMatrixError("inverse_pd: matrix singular within tolerance");
  }
  ComplexMatrix inv = dec.eigenvectors *
                      ev.cwiseInverse().asDiagonal() *
                      dec.eigenvectors.adjoint();
  inv = 0.5 * (inv + inv.adjoint().eval());  // ill-conditioned input can leave ~eps/lambda_min skew
  return HermitianOperator(std::move(inv), 1e-9);
}

/// <v|A|v> for Hermitian A; the imaginary part is rounding noise and dropped.
inline double real_quadratic_form(const HermitianOperator& a, const ComplexVector& v) {
  return std::real(Complex(v.adjoint() * a.matrix() * v));
}

inline double real_trace_product(const HermitianOperator& a, const HermitianOperator& b) {
  return std::real(Complex((a.matrix() * b.matrix()).trace()));
}

}  // namespace numphase
