#include "qprep/matkernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qprep {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Dimension: return "dimension";
    case ErrorCode::SolverFailure: return "solver_failure";
    case ErrorCode::NotPsd: return "not_psd";
    case ErrorCode::Contract: return "contract";
    case ErrorCode::Faithfulness: return "faithfulness";
    case ErrorCode::IllConditioned: return "ill_conditioned";
    case ErrorCode::Degenerate: return "degenerate";
    case ErrorCode::NumericalFailure: return "numerical_failure";
    case ErrorCode::InvalidPreparation: return "invalid_preparation";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Schema: return "schema";
  }
  return "unknown";
}

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << op << ": shape mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x"
       << b.cols();
    throw Error(ErrorCode::Dimension, os.str());
  }
}

void require_bipartite(const Matrix& m, std::size_t dimA, std::size_t dimB, const char* op) {
  if (!m.is_square() || m.rows() != dimA * dimB || dimA == 0 || dimB == 0) {
    std::ostringstream os;
    os << op << ": matrix of size " << m.rows() << "x" << m.cols() << " is not " << dimA << "*"
       << dimB << " square";
    throw Error(ErrorCode::Dimension, os.str());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {
  if (rows == 0 || cols == 0) throw Error(ErrorCode::Dimension, "matrix dimensions must be >= 1");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (rows == 0 || cols == 0) throw Error(ErrorCode::Dimension, "matrix dimensions must be >= 1");
  if (data_.size() != rows * cols) {
    std::ostringstream os;
    os << "matrix data has " << data_.size() << " entries, expected " << rows * cols;
    throw Error(ErrorCode::Dimension, os.str());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::unit(std::size_t n, std::size_t i, std::size_t j) {
  Matrix m(n, n);
  m(i, j) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix Matrix::diagonal(std::initializer_list<double> diag) {
  return diagonal(std::span<const double>(diag.begin(), diag.size()));
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.begin()->size() : 0;
  std::vector<cplx> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw Error(ErrorCode::Dimension, "ragged rows in Matrix::from_rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(data));
}

Matrix Matrix::outer(std::span<const cplx> v) {
  Matrix m(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
  return m;
}

Matrix Matrix::column(std::span<const cplx> v) {
  return Matrix(v.size(), 1, std::vector<cplx>(v.begin(), v.end()));
}

Matrix Matrix::adjoint() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

Matrix Matrix::conj() const {
  Matrix out = *this;
  for (auto& z : out.data_) z = std::conj(z);
  return out;
}

cplx Matrix::trace() const {
  if (!is_square()) throw Error(ErrorCode::Dimension, "trace of a non-square matrix");
  cplx t{0.0, 0.0};
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double Matrix::max_abs() const {
  double s = 0.0;
  for (const auto& z : data_) s = std::max(s, std::abs(z));
  return s;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
  require_same_shape(*this, rhs, "operator+");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
  require_same_shape(*this, rhs, "operator-");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
Matrix operator-(Matrix m) { return m *= -1.0; }
Matrix operator*(cplx s, Matrix m) { return m *= s; }
Matrix operator*(Matrix m, cplx s) { return m *= s; }

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.cols() != rhs.rows()) {
    std::ostringstream os;
    os << "matmul: " << lhs.rows() << "x" << lhs.cols() << " times " << rhs.rows() << "x"
       << rhs.cols();
    throw Error(ErrorCode::Dimension, os.str());
  }
  Matrix out(lhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i)
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const cplx a = lhs(i, k);
      if (a == cplx{}) continue;
      for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

std::vector<cplx> operator*(const Matrix& m, std::span<const cplx> v) {
  if (m.cols() != v.size()) throw Error(ErrorCode::Dimension, "matvec: length mismatch");
  std::vector<cplx> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    cplx s{};
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

cplx inner(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "inner");
  cplx s{};
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t k = 0; k < da.size(); ++k) s += std::conj(da[k]) * db[k];
  return s;
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::Dimension, "dot: length mismatch");
  cplx s{};
  for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
  return s;
}

double norm2(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

std::vector<cplx> vec(const Matrix& m) { return {m.data().begin(), m.data().end()}; }

Matrix unvec(std::span<const cplx> v, std::size_t rows, std::size_t cols) {
  return Matrix(rows, cols, std::vector<cplx>(v.begin(), v.end()));
}

// ---------------------------------------------------------------------------
// HermitianMatrix

HermitianMatrix::HermitianMatrix(Matrix m) {
  if (!m.is_square()) throw Error(ErrorCode::Dimension, "Hermitian matrix must be square");
  const std::size_t n = m.rows();
  double anti = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    anti += 4.0 * m(i, i).imag() * m(i, i).imag();
    m(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx a = m(i, j);
      const cplx b = std::conj(m(j, i));
      anti += 2.0 * std::norm(a - b);
      const cplx avg = 0.5 * (a + b);
      m(i, j) = avg;
      m(j, i) = std::conj(avg);
    }
  }
  const double scale = m.frobenius_norm();
  defect_ = scale > 0.0 ? 0.5 * std::sqrt(anti) / scale : (anti > 0.0 ? 1.0 : 0.0);
  m_ = std::move(m);
}

HermitianMatrix HermitianMatrix::checked(Matrix m, double tol) {
  HermitianMatrix h(std::move(m));
  if (h.defect_ > tol) {
    std::ostringstream os;
    os << "matrix is not Hermitian: relative anti-Hermitian part " << h.defect_;
    throw Error(ErrorCode::Contract, os.str(), h.defect_);
  }
  return h;
}

HermitianMatrix HermitianMatrix::transpose() const { return HermitianMatrix(m_.transpose()); }

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& rhs) {
  m_ += rhs.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& rhs) {
  m_ -= rhs.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

HermitianMatrix operator+(HermitianMatrix lhs, const HermitianMatrix& rhs) { return lhs += rhs; }
HermitianMatrix operator-(HermitianMatrix lhs, const HermitianMatrix& rhs) { return lhs -= rhs; }
HermitianMatrix operator*(double s, HermitianMatrix m) { return m *= s; }

HermitianMatrix congruence(const Matrix& x, const HermitianMatrix& a) {
  return HermitianMatrix(x * a.matrix() * x.adjoint());
}

// ---------------------------------------------------------------------------
// Eigensolver

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Annihilates a(p,q) with the unitary V = diag(1, e^{-i theta}) * R(c, s) on
// rows/columns p, q and accumulates V into u.
void jacobi_rotate(Matrix& a, Matrix& u, std::size_t p, std::size_t q) {
  const cplx apq = a(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const cplx phase = apq / r;  // e^{i theta}
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * r);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const cplx vpp = c;
  const cplx vpq = s;
  const cplx vqp = -s * std::conj(phase);
  const cplx vqq = c * std::conj(phase);

  const std::size_t n = a.rows();
  // A <- A V (columns)
  for (std::size_t k = 0; k < n; ++k) {
    const cplx akp = a(k, p);
    const cplx akq = a(k, q);
    a(k, p) = akp * vpp + akq * vqp;
    a(k, q) = akp * vpq + akq * vqq;
  }
  // A <- V^dagger A (rows)
  for (std::size_t k = 0; k < n; ++k) {
    const cplx apk = a(p, k);
    const cplx aqk = a(q, k);
    a(p, k) = std::conj(vpp) * apk + std::conj(vqp) * aqk;
    a(q, k) = std::conj(vpq) * apk + std::conj(vqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (std::size_t k = 0; k < n; ++k) {
    const cplx ukp = u(k, p);
    const cplx ukq = u(k, q);
    u(k, p) = ukp * vpp + ukq * vqp;
    u(k, q) = ukp * vpq + ukq * vqq;
  }
}

}  // namespace

EigenDecomposition eigh(const HermitianMatrix& h, JacobiOptions opts) {
  const std::size_t n = h.dim();
  Matrix a = h.matrix();
  Matrix u = Matrix::identity(n);
  const double scale = a.frobenius_norm();
  const double target = opts.rel_tol * scale;

  int sweeps = 0;
  double off = off_diagonal_norm(a);
  while (off > target) {
    if (sweeps == opts.max_sweeps) {
      std::ostringstream os;
      os << "Jacobi eigensolver did not converge after " << sweeps
         << " sweeps; off-diagonal residual " << off;
      throw Error(ErrorCode::SolverFailure, os.str(), off);
    }
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, u, p, q);
    ++sweeps;
    off = off_diagonal_norm(a);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x).real() < a(y, y).real();
  });

  EigenDecomposition out{std::vector<double>(n), Matrix(n, n), sweeps};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = u(i, order[k]);
  }
  return out;
}

double min_eigenvalue(const HermitianMatrix& h) { return eigh(h).values.front(); }
double max_eigenvalue(const HermitianMatrix& h) { return eigh(h).values.back(); }

double trace_norm(const HermitianMatrix& h) {
  double s = 0.0;
  for (double v : eigh(h).values) s += std::abs(v);
  return s;
}

double operator_norm(const HermitianMatrix& h) {
  const auto e = eigh(h);
  return std::max(std::abs(e.values.front()), std::abs(e.values.back()));
}

HermCalculus herm_calculus(const HermitianMatrix& h, double rank_tol) {
  auto e = eigh(h);
  const double lmax = std::max(e.values.back(), 0.0);
  const double cutoff = rank_tol * lmax;
  if (e.values.front() < -cutoff) {
    std::ostringstream os;
    os << "matrix is not positive semidefinite: eigenvalue " << e.values.front();
    throw Error(ErrorCode::NotPsd, os.str(), e.values.front());
  }
  HermCalculus out;
  auto on_support = [&](double v) { return lmax > 0.0 && v > cutoff; };
  out.sqrt = spectral_apply(e, [](double v) { return v > 0.0 ? std::sqrt(v) : 0.0; });
  out.pinv_sqrt = spectral_apply(e, [&](double v) { return on_support(v) ? 1.0 / std::sqrt(v) : 0.0; });
  out.support = spectral_apply(e, [&](double v) { return on_support(v) ? 1.0 : 0.0; });
  out.rank = static_cast<std::size_t>(std::count_if(e.values.begin(), e.values.end(), on_support));
  out.eig = std::move(e);
  return out;
}

// ---------------------------------------------------------------------------
// Tensor legs

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix(kron(a.matrix(), b.matrix()));
}

Matrix partial_transpose(const Matrix& m, std::size_t dimA, std::size_t dimB, Leg leg) {
  require_bipartite(m, dimA, dimB, "partial_transpose");
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < dimA; ++i)
    for (std::size_t k = 0; k < dimB; ++k)
      for (std::size_t j = 0; j < dimA; ++j)
        for (std::size_t l = 0; l < dimB; ++l) {
          const std::size_t row = i * dimB + k;
          const std::size_t col = j * dimB + l;
          out(row, col) = leg == Leg::B ? m(i * dimB + l, j * dimB + k)
                                        : m(j * dimB + k, i * dimB + l);
        }
  return out;
}

HermitianMatrix partial_transpose(const HermitianMatrix& m, std::size_t dimA, std::size_t dimB,
                                  Leg leg) {
  return HermitianMatrix(partial_transpose(m.matrix(), dimA, dimB, leg));
}

Matrix partial_trace(const Matrix& m, std::size_t dimA, std::size_t dimB, Leg leg) {
  require_bipartite(m, dimA, dimB, "partial_trace");
  if (leg == Leg::A) {
    Matrix out(dimB, dimB);
    for (std::size_t k = 0; k < dimB; ++k)
      for (std::size_t l = 0; l < dimB; ++l)
        for (std::size_t i = 0; i < dimA; ++i) out(k, l) += m(i * dimB + k, i * dimB + l);
    return out;
  }
  Matrix out(dimA, dimA);
  for (std::size_t i = 0; i < dimA; ++i)
    for (std::size_t j = 0; j < dimA; ++j)
      for (std::size_t k = 0; k < dimB; ++k) out(i, j) += m(i * dimB + k, j * dimB + k);
  return out;
}

HermitianMatrix partial_trace(const HermitianMatrix& m, std::size_t dimA, std::size_t dimB,
                              Leg leg) {
  return HermitianMatrix(partial_trace(m.matrix(), dimA, dimB, leg));
}

HermitianMatrix psd_project(const HermitianMatrix& h) {
  return spectral_apply(eigh(h), [](double v) { return v > 0.0 ? v : 0.0; });
}

}  // namespace qprep
