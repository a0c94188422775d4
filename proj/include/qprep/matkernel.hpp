#pragma once

// Dense complex linear algebra used throughout qprep.
//
// Bipartite index convention: the pair (i, k) with i on leg A and k on leg B
// is fused to i * dimB + k. Leg A is the slow index. kron, partial_transpose
// and partial_trace all use this convention.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qprep/error.hpp"

namespace qprep {

using cplx = std::complex<double>;

inline constexpr double kDefaultRankTol = 1e-10;

/// Row-major dense complex matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<cplx> data);

  static Matrix identity(std::size_t n);
  static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
  /// E_ij in an n x n space.
  static Matrix unit(std::size_t n, std::size_t i, std::size_t j);
  static Matrix diagonal(std::span<const double> diag);
  static Matrix diagonal(std::initializer_list<double> diag);
  /// Builds from nested rows; every row must have the same length.
  static Matrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);
  /// |v><v|
  static Matrix outer(std::span<const cplx> v);
  /// Column vector.
  static Matrix column(std::span<const cplx> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const cplx> data() const noexcept { return data_; }
  std::span<cplx> data() noexcept { return data_; }

  Matrix adjoint() const;
  Matrix transpose() const;
  Matrix conj() const;

  cplx trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  Matrix& operator*=(cplx s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix m);
Matrix operator*(const Matrix& lhs, const Matrix& rhs);
Matrix operator*(cplx s, Matrix m);
Matrix operator*(Matrix m, cplx s);

std::vector<cplx> operator*(const Matrix& m, std::span<const cplx> v);

/// Frobenius pairing <A, B> = Tr(A^dagger B).
cplx inner(const Matrix& a, const Matrix& b);
cplx dot(std::span<const cplx> a, std::span<const cplx> b);
double norm2(std::span<const cplx> v);

/// Row-major vectorization and its inverse.
std::vector<cplx> vec(const Matrix& m);
Matrix unvec(std::span<const cplx> v, std::size_t rows, std::size_t cols);

/// Complex square matrix kept Hermitian. Construction replaces M by (M + M^dagger)/2
/// and records the relative size of the anti-Hermitian part that was dropped.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(Matrix m);
  /// Same as the constructor but throws Contract if the relative defect exceeds tol.
  static HermitianMatrix checked(Matrix m, double tol = 1e-12);

  static HermitianMatrix identity(std::size_t n) { return HermitianMatrix(Matrix::identity(n)); }
  static HermitianMatrix diagonal(std::initializer_list<double> diag) {
    return HermitianMatrix(Matrix::diagonal(diag));
  }

  std::size_t dim() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  operator const Matrix&() const noexcept { return m_; }  // NOLINT(google-explicit-constructor)
  const cplx& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  /// ||M - M^dagger||_F / (2 ||M||_F) of the input, 0 for exact input.
  double symmetrization_defect() const noexcept { return defect_; }

  double trace() const { return m_.trace().real(); }
  double frobenius_norm() const { return m_.frobenius_norm(); }
  HermitianMatrix transpose() const;

  HermitianMatrix& operator+=(const HermitianMatrix& rhs);
  HermitianMatrix& operator-=(const HermitianMatrix& rhs);
  HermitianMatrix& operator*=(double s);

 private:
  Matrix m_;
  double defect_ = 0.0;
};

HermitianMatrix operator+(HermitianMatrix lhs, const HermitianMatrix& rhs);
HermitianMatrix operator-(HermitianMatrix lhs, const HermitianMatrix& rhs);
HermitianMatrix operator*(double s, HermitianMatrix m);

/// X A X^dagger, Hermitian whenever A is.
HermitianMatrix congruence(const Matrix& x, const HermitianMatrix& a);

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  Matrix vectors;              // columns, unitary
  int sweeps = 0;
};

struct JacobiOptions {
  double rel_tol = 1e-14;
  int max_sweeps = 100;
};

/// Cyclic Jacobi eigensolver. Throws SolverFailure carrying the off-diagonal
/// residual if the sweep cap is reached.
EigenDecomposition eigh(const HermitianMatrix& h, JacobiOptions opts = {});

double min_eigenvalue(const HermitianMatrix& h);
double max_eigenvalue(const HermitianMatrix& h);
/// Sum of absolute eigenvalues.
double trace_norm(const HermitianMatrix& h);
/// Largest absolute eigenvalue.
double operator_norm(const HermitianMatrix& h);

/// U f(diag) U^dagger for a spectral function f.
template <typename F>
HermitianMatrix spectral_apply(const EigenDecomposition& e, F&& f) {
  const std::size_t n = e.values.size();
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(e.values[k]);
    if (fk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx ui = e.vectors(i, k) * fk;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += ui * std::conj(e.vectors(j, k));
    }
  }
  return HermitianMatrix(std::move(out));
}

struct HermCalculus {
  HermitianMatrix sqrt;
  HermitianMatrix pinv_sqrt;
  HermitianMatrix support;  // orthogonal projector onto eigenvalues > rank_tol * lambda_max
  std::size_t rank = 0;
  EigenDecomposition eig;
};

/// Square root, pseudo-inverse square root and support projector of a PSD
/// matrix. Throws NotPsd if an eigenvalue is below -rank_tol * lambda_max.
HermCalculus herm_calculus(const HermitianMatrix& h, double rank_tol = kDefaultRankTol);

Matrix kron(const Matrix& a, const Matrix& b);
HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b);

enum class Leg { A, B };

/// Transpose on one tensor leg. For leg B: out((i,k),(j,l)) = m((i,l),(j,k)).
Matrix partial_transpose(const Matrix& m, std::size_t dimA, std::size_t dimB, Leg leg);
HermitianMatrix partial_transpose(const HermitianMatrix& m, std::size_t dimA, std::size_t dimB,
                                  Leg leg);

/// Traces out `leg`. Tracing leg A: out(k,l) = sum_i m((i,k),(i,l)).
Matrix partial_trace(const Matrix& m, std::size_t dimA, std::size_t dimB, Leg leg);
HermitianMatrix partial_trace(const HermitianMatrix& m, std::size_t dimA, std::size_t dimB,
                              Leg leg);

/// Frobenius-nearest PSD matrix (negative eigenvalues clipped to zero).
HermitianMatrix psd_project(const HermitianMatrix& h);

}  // namespace qprep
