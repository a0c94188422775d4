#include "qprep/gnsmod.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qprep/random.hpp"

namespace qprep {

std::vector<cplx> ConjLinearOp::apply(std::span<const cplx> v) const {
  std::vector<cplx> c(v.begin(), v.end());
  for (auto& z : c) z = std::conj(z);
  return a_ * std::span<const cplx>(c);
}

std::vector<cplx> GNSSpace::lambda(const Matrix& x) const { return vec(x * sqrt_d.matrix()); }

Matrix GNSSpace::unlambda(std::span<const cplx> v) const {
  return unvec(v, n, n) * inv_sqrt_d.matrix();
}

Matrix GNSSpace::left_multiplication(const Matrix& x) const {
  // vec_rowmajor(x X) = (x (x) 1) vec_rowmajor(X)
  return kron(x, Matrix::identity(n));
}

namespace gns {

namespace {

// Matrix of a linear map given on coordinates, built from its action on e_k.
template <typename F>
Matrix matrix_from_columns(std::size_t dim, F&& column) {
  Matrix out(dim, dim);
  std::vector<cplx> e(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    std::fill(e.begin(), e.end(), cplx{});
    e[k] = 1.0;
    const std::vector<cplx> col = column(std::span<const cplx>(e));
    for (std::size_t i = 0; i < dim; ++i) out(i, k) = col[i];
  }
  return out;
}

double relative(double residual, double scale) { return residual / std::max(1.0, scale); }

}  // namespace

GNSSpace gns_space(const HermitianMatrix& d, double rank_tol) {
  if (std::abs(d.trace() - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "GNS state has trace " << d.trace() << ", expected 1";
    throw Error(ErrorCode::Contract, os.str(), d.trace());
  }
  HermCalculus calc = herm_calculus(d, rank_tol);
  if (calc.rank < d.dim()) {
    std::ostringstream os;
    os << "state is not faithful (rank " << calc.rank << " of " << d.dim()
       << "); restrict to the support of d first";
    throw Error(ErrorCode::Faithfulness, os.str(), calc.eig.values.front());
  }
  GNSSpace g;
  g.n = d.dim();
  g.d = d;
  g.sqrt_d = std::move(calc.sqrt);
  g.inv_sqrt_d = std::move(calc.pinv_sqrt);

  const std::size_t dim = g.n * g.n;
  const Matrix lambda_map = matrix_from_columns(dim, [&](std::span<const cplx> e) {
    return g.lambda(unvec(e, g.n, g.n));
  });
  g.gram = HermitianMatrix(lambda_map.adjoint() * lambda_map);
  return g;
}

ModularData modular_data(const GNSSpace& g) {
  const std::size_t dim = g.n * g.n;
  const Matrix& d = g.d.matrix();
  const Matrix& sd = g.sqrt_d.matrix();
  const Matrix& isd = g.inv_sqrt_d.matrix();
  const Matrix inv_d = isd * isd;

  // Columns come from the basis vectors e_k = Lambda(E_ab d^{-1/2}); for a
  // conjugate-linear K, column k of its matrix is K(e_k) since e_k is real.
  auto x_of = [&](std::span<const cplx> e) { return g.unlambda(e); };

  ModularData m;
  m.S = ConjLinearOp(matrix_from_columns(dim, [&](std::span<const cplx> e) {
    return g.lambda(x_of(e).adjoint());
  }));
  m.J = ConjLinearOp(matrix_from_columns(dim, [&](std::span<const cplx> e) {
    return g.lambda(sd * x_of(e).adjoint() * isd);
  }));
  m.Delta = HermitianMatrix(matrix_from_columns(dim, [&](std::span<const cplx> e) {
    return g.lambda(d * x_of(e) * inv_d);
  }));
  m.Delta_sqrt = herm_calculus(m.Delta).sqrt;

  const Matrix polar = m.J.compose(m.Delta_sqrt.matrix()).matrix();
  m.polar_residual =
      relative((m.S.matrix() - polar).frobenius_norm(), m.S.matrix().frobenius_norm());
  if (m.polar_residual > 1e-8) {
    std::ostringstream os;
    os << "polar identity S = J Delta^{1/2} fails with residual " << m.polar_residual;
    throw Error(ErrorCode::NumericalFailure, os.str(), m.polar_residual);
  }
  return m;
}

HermitianMatrix embed(const HermitianMatrix& d, const HermitianMatrix& x) {
  if (d.dim() != x.dim()) throw Error(ErrorCode::Dimension, "embed: dimension mismatch");
  return congruence(herm_calculus(d).sqrt.matrix(), x);
}

HermitianMatrix choi_of_v(const HermitianMatrix& d) {
  const std::size_t n = d.dim();
  const Matrix sd = herm_calculus(d).sqrt.matrix();
  Matrix c(n * n, n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Matrix block = sd * Matrix::unit(n, i, j) * sd;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) c(i * n + k, j * n + l) = block(k, l);
    }
  return HermitianMatrix(std::move(c));
}

TomitaReport verify_tomita(const GNSSpace& g, const ModularData& m, std::size_t samples,
                           std::uint64_t seed, double tol) {
  const std::size_t dim = g.n * g.n;
  TomitaReport rep;
  rep.samples = samples;

  const Matrix polar = m.J.compose(m.Delta_sqrt.matrix()).matrix();
  rep.polar.residual =
      relative((m.S.matrix() - polar).frobenius_norm(), m.S.matrix().frobenius_norm());

  rep.j_involution.residual = (m.J.compose(m.J) - Matrix::identity(dim)).frobenius_norm();

  const std::vector<cplx> vac = g.lambda(Matrix::identity(g.n));
  std::vector<cplx> jvac = m.J.apply(vac);
  double vac_res = 0.0;
  for (std::size_t k = 0; k < dim; ++k) vac_res += std::norm(jvac[k] - vac[k]);
  rep.j_vacuum.residual = std::sqrt(vac_res);

  Rng rng(seed);
  double comm = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    Matrix x = random_matrix(rng, g.n, g.n);
    Matrix y = random_matrix(rng, g.n, g.n);
    x *= 1.0 / x.frobenius_norm();
    y *= 1.0 / y.frobenius_norm();
    const Matrix lx = g.left_multiplication(x);
    const Matrix jyj = m.J.compose(g.left_multiplication(y) * m.J);
    comm = std::max(comm, (jyj * lx - lx * jyj).frobenius_norm());
  }
  rep.commutation.residual = comm;

  for (CheckItem* item : {&rep.polar, &rep.j_involution, &rep.j_vacuum, &rep.commutation})
    item->passed = item->residual <= tol;
  rep.passed = rep.polar.passed && rep.j_involution.passed && rep.j_vacuum.passed &&
               rep.commutation.passed;
  return rep;
}

double delta_spectrum_residual(const GNSSpace& g, const ModularData& m) {
  const auto lam = eigh(g.d).values;
  std::vector<double> ratios;
  ratios.reserve(g.n * g.n);
  for (double li : lam)
    for (double lj : lam) ratios.push_back(li / lj);
  std::sort(ratios.begin(), ratios.end());
  const auto spec = eigh(m.Delta).values;
  double worst = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k)
    worst = std::max(worst, std::abs(spec[k] - ratios[k]) / std::max(1.0, ratios[k]));
  return worst;
}

InclusionReport verify_inclusion(const HermitianMatrix& d, std::size_t samples,
                                 std::uint64_t seed) {
  const std::size_t n = d.dim();
  const Matrix sd = herm_calculus(d).sqrt.matrix();
  auto phi = [&](const HermitianMatrix& x) { return congruence(sd, x); };

  Rng rng(seed);
  InclusionReport rep;
  rep.samples = samples;
  rep.contractivity_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    const HermitianMatrix x = random_hermitian(rng, n);
    const HermitianMatrix y = random_hermitian(rng, n);
    const double lhs = (phi(x).matrix() * y.matrix()).trace().real();
    const double rhs = (x.matrix() * phi(y).matrix()).trace().real();
    rep.duality_residual = std::max(rep.duality_residual, std::abs(lhs - rhs));

    rep.contractivity_excess =
        std::max(rep.contractivity_excess, trace_norm(phi(x)) - operator_norm(x));

    const HermitianMatrix e = random_effect(rng, n);
    const double phi_e = (d.matrix() * e.matrix()).trace().real();
    rep.positive_norm_residual =
        std::max(rep.positive_norm_residual, std::abs(trace_norm(phi(e)) - phi_e));

    // Shift so the smallest eigenvalue is exactly -1/2.
    HermitianMatrix neg = x;
    neg -= (min_eigenvalue(x) + 0.5) * HermitianMatrix::identity(n);
    if (min_eigenvalue(phi(neg)) >= 0.0) rep.order_detected = false;
  }
  return rep;
}

}  // namespace gns
}  // namespace qprep
