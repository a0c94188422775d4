#pragma once

// GNS construction and modular theory for (M_n, phi) with phi(x) = Tr(d x),
// d a faithful density matrix.
//
// Coordinates: Lambda(x) is stored as the row-major entries of x d^{1/2}. In
// these coordinates the GNS inner product (Lambda(x)|Lambda(y)) = phi(y^* x)
// is the standard inner product of C^{n^2}.
//
// Conjugate-linear operators are stored as a matrix A acting by v -> A conj(v).
// Composition rules (L linear, K conjugate-linear):
//   K1 . K2 = linear   A1 conj(A2)
//   K  . L  = conj-lin A conj(L)
//   L  . K  = conj-lin L A

#include <cstdint>
#include <vector>

#include "qprep/matkernel.hpp"

namespace qprep {

class ConjLinearOp {
 public:
  ConjLinearOp() = default;
  explicit ConjLinearOp(Matrix a) : a_(std::move(a)) {}

  const Matrix& matrix() const noexcept { return a_; }
  std::vector<cplx> apply(std::span<const cplx> v) const;

  /// this . other, with other conjugate-linear: a linear operator.
  Matrix compose(const ConjLinearOp& other) const { return a_ * other.a_.conj(); }
  /// this . l, with l linear.
  ConjLinearOp compose(const Matrix& l) const { return ConjLinearOp(a_ * l.conj()); }
  /// l . this
  friend ConjLinearOp operator*(const Matrix& l, const ConjLinearOp& k) {
    return ConjLinearOp(l * k.a_);
  }

 private:
  Matrix a_;
};

struct GNSSpace {
  std::size_t n = 0;
  HermitianMatrix d;
  HermitianMatrix sqrt_d;
  HermitianMatrix inv_sqrt_d;
  /// Gram matrix of the GNS form in the matrix-unit basis of M_n:
  /// (Lambda(x)|Lambda(y)) = vec(y)^dagger gram vec(x).
  HermitianMatrix gram;

  /// Coordinates of Lambda(x).
  std::vector<cplx> lambda(const Matrix& x) const;
  /// Inverse of lambda.
  Matrix unlambda(std::span<const cplx> v) const;
  /// Left multiplication x Lambda(y) = Lambda(xy) on the coordinate space.
  Matrix left_multiplication(const Matrix& x) const;
};

struct ModularData {
  ConjLinearOp S;
  ConjLinearOp J;
  HermitianMatrix Delta;
  HermitianMatrix Delta_sqrt;
  /// Relative Frobenius residual of S - J Delta^{1/2} measured at construction.
  double polar_residual = 0.0;
};

namespace gns {

/// Throws Faithfulness when d has eigenvalues at or below rank_tol * lambda_max;
/// the caller is expected to restrict to the support of d first.
GNSSpace gns_space(const HermitianMatrix& d, double rank_tol = kDefaultRankTol);

/// Builds S, J, Delta from their closed forms column by column; throws
/// NumericalFailure if the polar identity S = J Delta^{1/2} fails by more than 1e-8.
ModularData modular_data(const GNSSpace& g);

/// d^{1/2} x d^{1/2}, the matrix representing phi_x.
HermitianMatrix embed(const HermitianMatrix& d, const HermitianMatrix& x);

/// Choi matrix of y -> d^{1/2} y d^{1/2}.
HermitianMatrix choi_of_v(const HermitianMatrix& d);

struct CheckItem {
  double residual = 0.0;
  bool passed = false;
};

struct TomitaReport {
  CheckItem polar;         // S = J Delta^{1/2}
  CheckItem j_involution;  // J^2 = 1
  CheckItem j_vacuum;      // J Lambda(1) = Lambda(1)
  CheckItem commutation;   // max ||[J y J, x]|| over samples
  std::size_t samples = 0;
  bool passed = false;
};

inline constexpr double kTomitaTol = 1e-9;

TomitaReport verify_tomita(const GNSSpace& g, const ModularData& m, std::size_t samples,
                           std::uint64_t seed, double tol = kTomitaTol);

/// Multiset distance between spec(Delta) and {lambda_i / lambda_j}, as the
/// largest relative deviation after sorting.
double delta_spectrum_residual(const GNSSpace& g, const ModularData& m);

struct InclusionReport {
  double duality_residual = 0.0;     // max |<phi_x, y> - <x, phi_y>|
  double contractivity_excess = 0.0; // max (||phi_x||_1 - ||x||_inf), <= 0 when contractive
  double positive_norm_residual = 0.0;  // max | ||phi_x||_1 - phi(x) | for x >= 0
  bool order_detected = true;        // x with a negative eigenvalue gives phi_x with one too
  std::size_t samples = 0;
};

/// Sampled checks of the inclusion x -> phi_x on random Hermitian inputs.
InclusionReport verify_inclusion(const HermitianMatrix& d, std::size_t samples,
                                 std::uint64_t seed);

}  // namespace gns
}  // namespace qprep
