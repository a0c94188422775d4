#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qprep/matkernel.hpp"

namespace qprep {

/// Seeded generator. Independent streams come from distinct (seed, stream) pairs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  double uniform();  // [0, 1)
  double normal();
  cplx complex_normal();  // E|z|^2 = 1

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

std::vector<cplx> random_unit_vector(Rng& rng, std::size_t n);
Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols);
HermitianMatrix random_hermitian(Rng& rng, std::size_t n);
Matrix random_unitary(Rng& rng, std::size_t n);
/// Ginibre density matrix, full rank with probability one.
HermitianMatrix random_state(Rng& rng, std::size_t n);
/// Density matrix of exactly the given rank.
HermitianMatrix random_state_of_rank(Rng& rng, std::size_t n, std::size_t rank);
/// Random PSD matrix with spectrum uniform in [0, 1] (a POVM effect).
HermitianMatrix random_effect(Rng& rng, std::size_t n);
/// Rank-1 projector onto a random unit vector.
HermitianMatrix random_pure_projector(Rng& rng, std::size_t n);

}  // namespace qprep
