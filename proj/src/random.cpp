#include "qprep/random.hpp"

#include <cmath>

namespace qprep {

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double Rng::uniform() { return uniform_(engine_); }
double Rng::normal() { return normal_(engine_); }

cplx Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return cplx{re, im} * std::sqrt(0.5);
}

std::vector<cplx> random_unit_vector(Rng& rng, std::size_t n) {
  std::vector<cplx> v(n);
  double nrm = 0.0;
  while (nrm == 0.0) {
    for (auto& z : v) z = rng.complex_normal();
    nrm = norm2(v);
  }
  for (auto& z : v) z /= nrm;
  return v;
}

Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (auto& z : m.data()) z = rng.complex_normal();
  return m;
}

HermitianMatrix random_hermitian(Rng& rng, std::size_t n) {
  const Matrix g = random_matrix(rng, n, n);
  return HermitianMatrix(0.5 * (g + g.adjoint()));
}

Matrix random_unitary(Rng& rng, std::size_t n) {
  // Gram-Schmidt on a Ginibre matrix.
  Matrix g = random_matrix(rng, n, n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      cplx proj{};
      for (std::size_t i = 0; i < n; ++i) proj += std::conj(g(i, j)) * g(i, k);
      for (std::size_t i = 0; i < n; ++i) g(i, k) -= proj * g(i, j);
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) nrm += std::norm(g(i, k));
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < n; ++i) g(i, k) /= nrm;
  }
  return g;
}

HermitianMatrix random_state(Rng& rng, std::size_t n) { return random_state_of_rank(rng, n, n); }

HermitianMatrix random_state_of_rank(Rng& rng, std::size_t n, std::size_t rank) {
  if (rank == 0 || rank > n) throw Error(ErrorCode::Contract, "random_state_of_rank: bad rank");
  const Matrix g = random_matrix(rng, n, rank);
  HermitianMatrix rho(g * g.adjoint());
  rho *= 1.0 / rho.trace();
  return rho;
}

HermitianMatrix random_effect(Rng& rng, std::size_t n) {
  const Matrix u = random_unitary(rng, n);
  std::vector<double> spec(n);
  for (auto& s : spec) s = rng.uniform();
  return congruence(u, HermitianMatrix(Matrix::diagonal(spec)));
}

HermitianMatrix random_pure_projector(Rng& rng, std::size_t n) {
  return HermitianMatrix(Matrix::outer(random_unit_vector(rng, n)));
}

}  // namespace qprep
