#include "qprep/prep.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "detail.hpp"
#include "qprep/random.hpp"

namespace qprep {

namespace {

void require_dim(const Matrix& m, std::size_t n, const char* what) {
  if (!m.is_square() || m.rows() != n) {
    std::ostringstream os;
    os << what << ": expected " << n << "x" << n << ", got " << m.rows() << "x" << m.cols();
    throw Error(ErrorCode::Dimension, os.str());
  }
}

// Real basis of the Hermitian n x n matrices: E_ii, E_ij + E_ji, i(E_ij - E_ji).
std::vector<Matrix> hermitian_basis(std::size_t n) {
  std::vector<Matrix> out;
  out.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(Matrix::unit(n, i, i));
    for (std::size_t j = i + 1; j < n; ++j) {
      out.push_back(Matrix::unit(n, i, j) + Matrix::unit(n, j, i));
      Matrix m(n, n);
      m(i, j) = cplx{0.0, 1.0};
      m(j, i) = cplx{0.0, -1.0};
      out.push_back(std::move(m));
    }
  }
  return out;
}

cplx eval_raw(const Matrix& c, std::size_t dimA, std::size_t dimB, const Matrix& q,
              const Matrix& r) {
  // sum_{ij} Q_ij Tr(M_ij R), M_ij(k, l) = C((i,k),(j,l)).
  cplx total{};
  for (std::size_t i = 0; i < dimA; ++i)
    for (std::size_t j = 0; j < dimA; ++j) {
      const cplx qij = q(i, j);
      if (qij == cplx{}) continue;
      cplx tr{};
      for (std::size_t k = 0; k < dimB; ++k)
        for (std::size_t l = 0; l < dimB; ++l) tr += c(i * dimB + k, j * dimB + l) * r(l, k);
      total += qij * tr;
    }
  return total;
}

}  // namespace

Matrix apply_map(const PositiveMapDescriptor& u, const Matrix& x) {
  require_dim(x, u.dim_in, "apply_map input");
  Matrix out(u.dim_out, u.dim_out);
  const Matrix& c = u.choi.matrix();
  for (std::size_t i = 0; i < u.dim_in; ++i)
    for (std::size_t j = 0; j < u.dim_in; ++j) {
      const cplx xij = x(i, j);
      if (xij == cplx{}) continue;
      for (std::size_t k = 0; k < u.dim_out; ++k)
        for (std::size_t l = 0; l < u.dim_out; ++l)
          out(k, l) += xij * c(i * u.dim_out + k, j * u.dim_out + l);
    }
  return out;
}

HermitianMatrix apply_map(const PositiveMapDescriptor& u, const HermitianMatrix& x) {
  return HermitianMatrix(apply_map(u, x.matrix()));
}

namespace prep {

ValidPreparation from_positive_map(const PositiveMapDescriptor& u, const HermitianMatrix& d) {
  if (u.choi.dim() != u.dim_in * u.dim_out)
    throw Error(ErrorCode::Dimension, "positive map: Choi matrix size does not match dims");
  require_dim(d, u.dim_out, "from_positive_map state");

  const Matrix one_out = Matrix::identity(u.dim_out);
  const double unital_defect =
      (apply_map(u, Matrix::identity(u.dim_in)) - one_out).frobenius_norm();
  if (unital_defect > 1e-10) {
    std::ostringstream os;
    os << "map '" << u.label << "' is not unital: ||u(1) - 1||_F = " << unital_defect;
    throw Error(ErrorCode::Contract, os.str(), unital_defect);
  }
  if (std::abs(d.trace() - 1.0) > kNormalizationTol) {
    std::ostringstream os;
    os << "state has trace " << d.trace() << ", expected 1";
    throw Error(ErrorCode::Contract, os.str(), d.trace());
  }
  HermCalculus calc;
  try {
    calc = herm_calculus(d);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotPsd) throw;
    throw Error(ErrorCode::Contract, std::string("state is not a density matrix: ") + e.what(),
                e.value());
  }
  const Matrix lift = kron(Matrix::identity(u.dim_in), calc.sqrt.matrix());
  return detail::PreparationAccess::make(u.dim_in, u.dim_out, congruence(lift, u.choi));
}

ValidPreparation from_explicit(const Matrix& blocks, std::size_t dimA, std::size_t dimB,
                               bool renormalize) {
  if (dimA == 0 || dimB == 0 || !blocks.is_square() || blocks.rows() != dimA * dimB) {
    std::ostringstream os;
    os << "blocks of size " << blocks.rows() << "x" << blocks.cols() << " do not match dims "
       << dimA << "*" << dimB;
    throw Error(ErrorCode::Dimension, os.str());
  }

  double max_imag = 0.0;
  const auto basis_a = hermitian_basis(dimA);
  const auto basis_b = hermitian_basis(dimB);
  for (const auto& q : basis_a)
    for (const auto& r : basis_b)
      max_imag = std::max(max_imag, std::abs(eval_raw(blocks, dimA, dimB, q, r).imag()));
  if (max_imag > kRealTol) {
    std::ostringstream os;
    os << "omega takes a non-real value on a Hermitian pair (|Im| = " << max_imag << ")";
    throw Error(ErrorCode::Contract, os.str(), max_imag);
  }

  HermitianMatrix c(blocks);
  const double norm = c.trace();
  if (std::abs(norm - 1.0) > kNormalizationTol) {
    if (renormalize && norm >= 0.9 && norm <= 1.1) {
      c *= 1.0 / norm;
    } else {
      std::ostringstream os;
      os << "preparation is not normalized: omega(1,1) = " << norm;
      throw Error(ErrorCode::Contract, os.str(), norm);
    }
  }
  return detail::PreparationAccess::make(dimA, dimB, std::move(c));
}

cplx eval_complex(const ValidPreparation& p, const Matrix& q, const Matrix& r) {
  require_dim(q, p.dimA(), "eval Q");
  require_dim(r, p.dimB(), "eval R");
  return eval_raw(p.blocks().matrix(), p.dimA(), p.dimB(), q, r);
}

double eval(const ValidPreparation& p, const HermitianMatrix& q, const HermitianMatrix& r) {
  const cplx v = eval_complex(p, q.matrix(), r.matrix());
  const double scale = std::max(1.0, q.frobenius_norm() * r.frobenius_norm());
  if (std::abs(v.imag()) > kRealTol * scale) {
    std::ostringstream os;
    os << "omega(Q,R) has imaginary residue " << v.imag() << " on Hermitian inputs";
    throw Error(ErrorCode::NumericalFailure, os.str(), v.imag());
  }
  return v.real();
}

Marginals marginals(const ValidPreparation& p) {
  HermitianMatrix bob = partial_trace(p.blocks(), p.dimA(), p.dimB(), Leg::A);
  HermitianMatrix alice = partial_trace(p.blocks(), p.dimA(), p.dimB(), Leg::B).transpose();
  for (const auto* m : {&bob, &alice}) {
    const double lmin = min_eigenvalue(*m);
    if (lmin < -1e-10) {
      std::ostringstream os;
      os << (m == &bob ? "Bob" : "Alice") << " marginal is not PSD: eigenvalue " << lmin;
      throw Error(ErrorCode::InvalidPreparation, os.str(), lmin);
    }
  }
  return {std::move(bob), std::move(alice)};
}

PositivityReport sample_pure_tensor_positivity(const ValidPreparation& p, std::size_t n,
                                               std::uint64_t seed, std::uint64_t stream,
                                               double tol) {
  if (n == 0) throw Error(ErrorCode::Contract, "sample count must be >= 1");
  Rng rng(seed, stream);
  const Matrix& c = p.blocks().matrix();
  PositivityReport rep;
  rep.n_samples = n;
  rep.min_value = std::numeric_limits<double>::infinity();
  std::vector<cplx> w(p.dimA() * p.dimB());
  for (std::size_t s = 0; s < n; ++s) {
    auto psi = random_unit_vector(rng, p.dimA());
    auto chi = random_unit_vector(rng, p.dimB());
    // omega(|psi><psi|, |chi><chi|) = w^dagger C w with w = conj(psi) (x) chi.
    for (std::size_t i = 0; i < p.dimA(); ++i)
      for (std::size_t k = 0; k < p.dimB(); ++k) w[i * p.dimB() + k] = std::conj(psi[i]) * chi[k];
    const double value = dot(w, c * std::span<const cplx>(w)).real();
    if (value < rep.min_value) {
      rep.min_value = value;
      rep.argmin = {std::move(psi), std::move(chi)};
    }
  }
  rep.passed = rep.min_value >= -tol;
  return rep;
}

}  // namespace prep
}  // namespace qprep
