#pragma once

// Valid preparations: bilinear functionals omega(Q, R) on M_dimA x M_dimB that
// are normalized and positive on pure tensors, stored as a block matrix.
//
// Storage: C = sum_ij E_ij (x) M_ij where M_ij represents the functional
// y -> omega(E_ij, y) through f(y) = Tr(M y). Evaluation is then
// omega(Q, R) = Tr(C (Q^T (x) R)).

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qprep/matkernel.hpp"

namespace qprep {

namespace detail {
struct PreparationAccess;
}

/// A linear map M_dim_in -> M_dim_out given by its Choi matrix
/// sum_ij E_ij (x) u(E_ij) (input leg is the slow index).
struct PositiveMapDescriptor {
  std::size_t dim_in = 0;
  std::size_t dim_out = 0;
  HermitianMatrix choi;
  std::string label;
  bool unital = false;
};

/// u(x) = Tr_in[C_u (x^T (x) 1)].
HermitianMatrix apply_map(const PositiveMapDescriptor& u, const HermitianMatrix& x);
Matrix apply_map(const PositiveMapDescriptor& u, const Matrix& x);

class ValidPreparation {
 public:
  std::size_t dimA() const noexcept { return dimA_; }
  std::size_t dimB() const noexcept { return dimB_; }
  /// The block matrix C_omega, size dimA*dimB.
  const HermitianMatrix& blocks() const noexcept { return blocks_; }

 private:
  friend struct detail::PreparationAccess;
  ValidPreparation(std::size_t dimA, std::size_t dimB, HermitianMatrix blocks)
      : dimA_(dimA), dimB_(dimB), blocks_(std::move(blocks)) {}

  std::size_t dimA_;
  std::size_t dimB_;
  HermitianMatrix blocks_;
};

struct PositivityReport {
  std::size_t n_samples = 0;
  double min_value = 0.0;
  std::pair<std::vector<cplx>, std::vector<cplx>> argmin;
  bool passed = false;
};

namespace prep {

inline constexpr double kNormalizationTol = 1e-10;
inline constexpr double kRealTol = 1e-10;

/// omega(x, y) = Tr(d^{1/2} u(x) d^{1/2} y). Throws Contract for a non-unital u
/// or a d that is not a density matrix of size u.dim_out.
ValidPreparation from_positive_map(const PositiveMapDescriptor& u, const HermitianMatrix& d);

/// Ingests raw block data. Rejects (Contract, value = measured omega(1,1)) when
/// the normalization is off, and rejects when omega takes a non-real value on a
/// pair of Hermitian basis elements. With `renormalize`, blocks are divided by
/// omega(1,1) if it lies in [0.9, 1.1].
ValidPreparation from_explicit(const Matrix& blocks, std::size_t dimA, std::size_t dimB,
                               bool renormalize = false);

/// omega(Q, R) for Hermitian Q, R.
double eval(const ValidPreparation& p, const HermitianMatrix& q, const HermitianMatrix& r);
/// omega(Q, R) for arbitrary matrices; complex in general.
cplx eval_complex(const ValidPreparation& p, const Matrix& q, const Matrix& r);

struct Marginals {
  HermitianMatrix bob_state;         // matrix of omega^(1)
  HermitianMatrix alice_functional;  // matrix of x -> omega(x, 1)
};

/// Throws InvalidPreparation when either marginal is not PSD within 1e-10.
Marginals marginals(const ValidPreparation& p);

/// Minimum of omega over n random pairs of rank-one projectors.
PositivityReport sample_pure_tensor_positivity(const ValidPreparation& p, std::size_t n,
                                               std::uint64_t seed, std::uint64_t stream = 0,
                                               double tol = 1e-10);

}  // namespace prep
}  // namespace qprep
