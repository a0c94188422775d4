#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qprep/gnsmod.hpp"
#include "qprep/random.hpp"
#include "test_support.hpp"

using namespace qprep;
using namespace qprep::testing;

namespace {

cplx phi(const HermitianMatrix& d, const Matrix& x) { return (d.matrix() * x).trace(); }

cplx coord_inner(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// Largest |(J L(y) J) L(x) - L(x) (J L(y) J)| entry.
double commutator(const GNSSpace& g, const ModularData& m, const Matrix& x, const Matrix& y) {
  const Matrix& a = m.J.matrix();
  const Matrix jyj = a * g.left_multiplication(y).conj() * a.conj();
  const Matrix lx = g.left_multiplication(x);
  return (jyj * lx - lx * jyj).max_abs();
}

}  // namespace

TEST_CASE("GNS inner product reproduces phi(y* x)") {
  Rng rng(11);
  for (std::size_t n : {2, 3, 4}) {
    const HermitianMatrix d = random_state(rng, n);
    const GNSSpace g = gns::gns_space(d);
    for (int rep = 0; rep < 20; ++rep) {
      const Matrix x = random_matrix(rng, n, n), y = random_matrix(rng, n, n);
      const cplx want = phi(d, y.adjoint() * x);
      CHECK(std::abs(coord_inner(g.lambda(y), g.lambda(x)) - want) <= 1e-12);
      // Gram form in matrix-unit coordinates.
      const auto vx = vec(x), vy = vec(y);
      CHECK(std::abs(coord_inner(vy, g.gram.matrix() * vx) - want) <= 1e-12);
      CHECK(max_abs_diff(g.unlambda(g.lambda(x)), x) <= 1e-12);
    }
  }
}

TEST_CASE("tracial state: Gram matrix is identity / n") {
  const HermitianMatrix d = (1.0 / 3.0) * HermitianMatrix::identity(3);
  const GNSSpace g = gns::gns_space(d);
  CHECK(max_abs_diff(g.gram, Matrix::identity(9) * (1.0 / 3.0)) <= 1e-15);
  const ModularData m = gns::modular_data(g);
  CHECK(max_abs_diff(m.Delta, Matrix::identity(9)) <= 1e-13);
}

TEST_CASE("phi(E_11) for d = diag(3/4, 1/4)") {
  const HermitianMatrix d = HermitianMatrix::diagonal({0.75, 0.25});
  const GNSSpace g = gns::gns_space(d);
  const auto v = g.lambda(Matrix::unit(2, 0, 0));
  CHECK(coord_inner(v, v).real() == doctest::Approx(0.75));
}

TEST_CASE("Delta acts on matrix units by lambda_i / lambda_j") {
  const std::vector<double> lam{0.6, 0.3, 0.1};
  const HermitianMatrix d = HermitianMatrix::diagonal({0.6, 0.3, 0.1});
  const GNSSpace g = gns::gns_space(d);
  const ModularData m = gns::modular_data(g);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const auto v = g.lambda(Matrix::unit(3, i, j));
      const auto dv = m.Delta.matrix() * v;
      const double ratio = lam[i] / lam[j];
      for (std::size_t k = 0; k < v.size(); ++k) CHECK(std::abs(dv[k] - ratio * v[k]) <= 1e-12);
    }
  }
  CHECK(gns::delta_spectrum_residual(g, m) <= 1e-12);
}

TEST_CASE("S acts as Lambda(x) -> Lambda(x*) and the polar identity holds") {
  Rng rng(12);
  for (int rep = 0; rep < 10; ++rep) {
    const HermitianMatrix d = random_state(rng, 3);
    const GNSSpace g = gns::gns_space(d);
    const ModularData m = gns::modular_data(g);
    const Matrix x = random_matrix(rng, 3, 3);
    CHECK(max_abs_diff(g.unlambda(m.S.apply(g.lambda(x))), x.adjoint()) <= 1e-10);

    const Matrix jd = m.J.matrix() * m.Delta_sqrt.matrix().conj();
    CHECK((jd - m.S.matrix()).frobenius_norm() <= 1e-9 * m.S.matrix().frobenius_norm());
    CHECK(m.polar_residual <= 1e-9);

    // J is an antiunitary involution fixing the vacuum.
    CHECK(max_abs_diff(m.J.compose(m.J), Matrix::identity(9)) <= 1e-10);
    const auto one = g.lambda(Matrix::identity(3));
    const auto j_one = m.J.apply(one);
    for (std::size_t k = 0; k < one.size(); ++k) CHECK(std::abs(j_one[k] - one[k]) <= 1e-10);
    const Matrix ja = m.J.matrix();
    CHECK(max_abs_diff(ja * ja.adjoint(), Matrix::identity(9)) <= 1e-10);

    // Delta is positive with Delta_sqrt^2 = Delta.
    CHECK(oracle_min_eigenvalue(m.Delta) > 0.0);
    CHECK(max_abs_diff(m.Delta_sqrt.matrix() * m.Delta_sqrt.matrix(), m.Delta) <= 1e-9);
  }
}

TEST_CASE("J M J lies in the commutant") {
  Rng rng(13);
  const HermitianMatrix d = random_state(rng, 3);
  const GNSSpace g = gns::gns_space(d);
  const ModularData m = gns::modular_data(g);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix x = random_matrix(rng, 3, 3), y = random_matrix(rng, 3, 3);
    CHECK(commutator(g, m, x, y) <= 1e-9);
  }
}

TEST_CASE("verify_tomita on tracial and non-tracial states") {
  for (const HermitianMatrix& d : {0.5 * HermitianMatrix::identity(2), HermitianMatrix::diagonal({0.7, 0.2, 0.1})}) {
    const GNSSpace g = gns::gns_space(d);
    const ModularData m = gns::modular_data(g);
    const auto rep = gns::verify_tomita(g, m, 30, 5);
    CHECK(rep.passed);
    CHECK(rep.samples == 30);
    CHECK(rep.polar.residual <= 1e-9);
    CHECK(rep.j_involution.residual <= 1e-9);
    CHECK(rep.j_vacuum.residual <= 1e-9);
    CHECK(rep.commutation.residual <= 1e-9);
  }
}

TEST_CASE("verify_tomita fails on a corrupted J") {
  const GNSSpace g = gns::gns_space(HermitianMatrix::diagonal({0.7, 0.2, 0.1}));
  ModularData m = gns::modular_data(g);
  Matrix broken = m.J.matrix();
  broken(0, 0) += 0.1;
  m.J = ConjLinearOp(broken);
  CHECK_FALSE(gns::verify_tomita(g, m, 10, 1).passed);
}

TEST_CASE("gns_space rejects non-faithful states") {
  try {
    (void)gns::gns_space(HermitianMatrix::diagonal({1.0, 0.0}));
    FAIL("expected a faithfulness error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Faithfulness);
  }
  CHECK_THROWS_AS(gns::gns_space(HermitianMatrix::diagonal({0.5, 0.6})), Error);
}

TEST_CASE("embed: unit goes to d, positivity and duality") {
  Rng rng(14);
  const HermitianMatrix d = random_state(rng, 3);
  const HermitianMatrix phi1 = gns::embed(d, HermitianMatrix::identity(3));
  CHECK(max_abs_diff(phi1, d) <= 1e-12);
  CHECK(trace_norm(phi1) == doctest::Approx(1.0).epsilon(1e-12));

  for (int rep = 0; rep < 100; ++rep) {
    const HermitianMatrix x = random_hermitian(rng, 3), y = random_hermitian(rng, 3);
    // <phi_x, y> = phi_x(y) = Tr(d^{1/2} x d^{1/2} y), symmetric under x <-> y.
    const double a = (gns::embed(d, x).matrix() * y.matrix()).trace().real();
    const double b = (gns::embed(d, y).matrix() * x.matrix()).trace().real();
    CHECK(std::abs(a - b) <= 1e-12);

    const HermitianMatrix e = random_effect(rng, 3);
    CHECK(oracle_min_eigenvalue(gns::embed(d, e)) >= -1e-12);
    // Order-preserving and contractive: ||phi_x||_1 <= ||x||_inf.
    CHECK(trace_norm(gns::embed(d, x)) <= operator_norm(x) + 1e-12);
  }
}

TEST_CASE("verify_inclusion") {
  Rng rng(15);
  for (std::size_t n : {2, 3, 4}) {
    const auto rep = gns::verify_inclusion(random_state(rng, n), 50, 7);
    CHECK(rep.samples == 50);
    CHECK(rep.duality_residual <= 1e-12);
    CHECK(rep.contractivity_excess <= 1e-12);
    CHECK(rep.positive_norm_residual <= 1e-12);
    CHECK(rep.order_detected);
  }
}

TEST_CASE("choi_of_v: closed form and complete positivity") {
  const HermitianMatrix half = 0.5 * HermitianMatrix::identity(2);
  CHECK(max_abs_diff(gns::choi_of_v(half), 0.5 * max_entangled(2)) <= 1e-14);

  Rng rng(16);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 2 + static_cast<std::size_t>(rep % 3);
    const HermitianMatrix d = random_state(rng, n);
    const HermitianMatrix c = gns::choi_of_v(d);
    const auto ev = oracle_eigenvalues(c);
    CHECK(ev.front() >= -1e-12);
    // Rank one: the map is conjugation by a single Kraus operator.
    CHECK(std::count_if(ev.begin(), ev.end(), [](double v) { return v > 1e-10; }) == 1);
    // Choi of y -> s y s with s = d^{1/2}: sum_ij E_ij (x) s E_ij s.
    const HermitianMatrix s = herm_calculus(d).sqrt;
    Matrix want(n * n, n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        want = want + kron(Matrix::unit(n, i, j), s.matrix() * Matrix::unit(n, i, j) * s.matrix());
    CHECK(max_abs_diff(c, want) <= 1e-12);
  }
}
