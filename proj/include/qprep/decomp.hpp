#pragma once

// Positive-map zoo, CP / co-CP tests, and a feasibility solver for
// decomposability C = P + Gamma(Q) with P, Q PSD, where Gamma is the partial
// transpose on the output leg of the Choi matrix.
//
// A matrix W with W >= 0 and Gamma(W) >= 0 satisfies
//   <W, P + Gamma(Q)> = <W, P> + <Gamma(W), Q> >= 0
// for every decomposable Choi matrix, so <W, C> < 0 refutes decomposability of C.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "qprep/matkernel.hpp"
#include "qprep/prep.hpp"

namespace qprep {

enum class DecompStatus { Feasible, Infeasible, Undecided };

std::string_view to_string(DecompStatus s);

struct DecompOutcome {
  DecompStatus status = DecompStatus::Undecided;
  std::optional<HermitianMatrix> P;
  std::optional<HermitianMatrix> Q;
  std::optional<HermitianMatrix> W;
  double violation = 0.0;  // -<W, C> for infeasible outcomes
  std::size_t iterations = 0;
  /// Feasible: ||P + Gamma(Q) - C||_F. Otherwise: last gap norm between the two sets.
  double residual = 0.0;
  /// Number of certificate candidates tried.
  std::size_t certificate_attempts = 0;
};

struct DecompOptions {
  std::size_t max_iter = 50'000;
  double tol_feas = 1e-8;
  double gap_tol = 1e-6;
  double tol_cert = 1e-9;
  /// Seed for the random perturbations used when retrying certificate extraction.
  std::uint64_t seed = 0;
};

struct ZooParams {
  std::size_t n = 0;
  double lambda = 0.0;
};

struct Decision {
  bool flag = false;
  double value = 0.0;
};

namespace decomp {

PositiveMapDescriptor identity_map(std::size_t n);
PositiveMapDescriptor transpose_map(std::size_t n);
/// x -> (1 - lambda) x + lambda Tr(x) 1/n.
PositiveMapDescriptor depolarizing_map(std::size_t n, double lambda);
/// x -> (Tr(x) 1 - x) / (n - 1).
PositiveMapDescriptor reduction_map(std::size_t n);
/// Choi's positive, non-decomposable map on M_3, halved so it is unital.
PositiveMapDescriptor choi_map();

/// Dispatch by name: identity, transpose, depolarizing, reduction, choi3.
PositiveMapDescriptor zoo(std::string_view name, ZooParams params = {});

/// Builds a descriptor from the action of a linear map on matrix units.
template <typename F>
PositiveMapDescriptor descriptor_from_action(std::size_t dim_in, std::size_t dim_out, F&& map,
                                             std::string label, bool unital) {
  Matrix c(dim_in * dim_out, dim_in * dim_out);
  for (std::size_t i = 0; i < dim_in; ++i)
    for (std::size_t j = 0; j < dim_in; ++j) {
      const Matrix block = map(Matrix::unit(dim_in, i, j));
      for (std::size_t k = 0; k < dim_out; ++k)
        for (std::size_t l = 0; l < dim_out; ++l) c(i * dim_out + k, j * dim_out + l) = block(k, l);
    }
  return {dim_in, dim_out, HermitianMatrix::checked(std::move(c)), std::move(label), unital};
}

/// flag: lambda_min(C_u) >= -tol; value: lambda_min(C_u).
Decision is_cp(const PositiveMapDescriptor& u, double tol);
/// flag: lambda_min(Gamma(C_u)) >= -tol; value: that eigenvalue.
Decision is_co_cp(const PositiveMapDescriptor& u, double tol);

/// Dykstra alternating projections between {P >= 0, Q >= 0} and the affine set
/// {P + Gamma(Q) = C}. Deterministic for fixed options.
DecompOutcome decompose(const HermitianMatrix& c, std::size_t dim_in, std::size_t dim_out,
                        const DecompOptions& opts = {});

/// flag: W >= 0, Gamma(W) >= 0 within tol and <W, C> < 0; value: -<W, C>.
Decision verify_certificate(const HermitianMatrix& w, const HermitianMatrix& c, std::size_t dim_in,
                            std::size_t dim_out, double tol);

}  // namespace decomp
}  // namespace qprep
