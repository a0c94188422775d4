#pragma once

// Quantum simulation of a valid preparation.
//
// With d = phi's density restricted to its support and d = sum_i l_i |e_i><e_i|,
// the model uses
//   Omega    = sum_i sqrt(l_i) |e_i>|e_i>
//   nu_A(Q)  = u(Q) (x) 1,           u(x) = d^{-1/2} omega^(x) d^{-1/2}
//   nu_B(R)  = 1 (x) (V^dagger R V)^{T_e}
// where V is the isometry onto the support and T_e the transpose in the
// eigenbasis e_i. Then <Omega| nu_A(Q) nu_B(R) |Omega> = omega(Q, R).

#include <cstdint>
#include <string>
#include <vector>

#include "qprep/matkernel.hpp"
#include "qprep/prep.hpp"

namespace qprep {

using Povm = std::vector<HermitianMatrix>;

struct SimulationModel {
  std::size_t dimA = 0;
  std::size_t dimB = 0;          // Bob's original dimension
  std::size_t support_dim = 0;   // rank of d
  std::vector<cplx> omega_vec;   // on C^{support_dim} (x) C^{support_dim}
  PositiveMapDescriptor u;       // M_dimA -> M_support_dim, unital
  Matrix basisU;                 // eigenbasis of the restricted d (columns)
  Matrix isometry;               // dimB x support_dim
  std::string provenance;

  HermitianMatrix nu_A(const HermitianMatrix& q) const;
  HermitianMatrix nu_B(const HermitianMatrix& r) const;
};

struct RestrictedPreparation {
  ValidPreparation prep;
  HermitianMatrix projector;  // support of d on Bob's original space
  Matrix isometry;            // dimB x rank; columns span the support
};

/// p(a, b | x, y), stored with index ((x * nY + y) * nA + a) * nB + b.
struct Behavior {
  std::size_t nX = 0, nY = 0, nA = 0, nB = 0;
  std::vector<double> p;

  double operator()(std::size_t a, std::size_t b, std::size_t x, std::size_t y) const {
    return p[((x * nY + y) * nA + a) * nB + b];
  }
  double& operator()(std::size_t a, std::size_t b, std::size_t x, std::size_t y) {
    return p[((x * nY + y) * nA + a) * nB + b];
  }
};

struct NsReport {
  double max_spread_bob = 0.0;    // spread over x of sum_a p(a,b|x,y)
  double max_spread_alice = 0.0;  // spread over y of sum_b p(a,b|x,y)
  bool passed = false;
};

namespace sim {

inline constexpr double kConditioningGuard = 1e-8;
inline constexpr double kPovmTol = 1e-10;

/// Compresses Bob's side to the support of d. A full-rank d returns the input
/// unchanged with an identity isometry. Throws Degenerate for rank 0.
RestrictedPreparation restrict_support(const ValidPreparation& prep,
                                       double rank_tol = kDefaultRankTol);

/// u(x) = d^{-1/2} omega^(x) d^{-1/2}. Throws IllConditioned when
/// lambda_min(d) / lambda_max(d) < 1e-8.
PositiveMapDescriptor extract_u(const ValidPreparation& prep);

SimulationModel build_simulation(const ValidPreparation& prep, std::string provenance = {});

/// <Omega| nu_A(Q) (x) nu_B(R) |Omega>.
double simulate_value(const SimulationModel& m, const HermitianMatrix& q,
                      const HermitianMatrix& r);

/// Throws Contract naming the offending element when a POVM is invalid.
void validate_povm(const Povm& povm, std::size_t dim, const std::string& name,
                   double tol = kPovmTol);

Behavior behavior_of(const SimulationModel& m, const std::vector<Povm>& alice,
                     const std::vector<Povm>& bob);
Behavior behavior_of(const ValidPreparation& prep, const std::vector<Povm>& alice,
                     const std::vector<Povm>& bob);

NsReport ns_check(const Behavior& b, double tol);

/// CHSH functional sum_{x,y} (-1)^{xy} E_xy with E_xy = sum_ab (-1)^{a+b} p(a,b|x,y).
double chsh_value(const Behavior& b);

/// The eight signed CHSH expressions, in a fixed order.
std::vector<double> chsh_family(const Behavior& b);

/// Membership in the 2-input/2-output local polytope: all eight CHSH
/// expressions at most 2 + tol. Requires a non-signalling behavior.
bool is_local_2222(const Behavior& b, double tol);

/// Two-outcome projective measurement {(1 + O)/2, (1 - O)/2} for a +-1 observable O.
Povm observable_povm(const HermitianMatrix& observable);

/// Qubit observable cos(theta) sigma_z + sin(theta) sigma_x.
HermitianMatrix xz_observable(double theta);

/// Deterministic local box with outputs a = alice[x], b = bob[y].
Behavior deterministic_box(const std::vector<std::size_t>& alice, const std::vector<std::size_t>& bob,
                           std::size_t nA, std::size_t nB);

/// p(a,b|x,y) = 1/2 when a xor b = x and y.
Behavior pr_box();

}  // namespace sim
}  // namespace qprep
