#include "qprep/simfactory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "detail.hpp"

namespace qprep {

namespace {

HermitianMatrix transpose_in_basis(const Matrix& u, const Matrix& r) {
  return HermitianMatrix(u * (u.adjoint() * r * u).transpose() * u.adjoint());
}

}  // namespace

HermitianMatrix SimulationModel::nu_A(const HermitianMatrix& q) const {
  return kron(apply_map(u, q), HermitianMatrix::identity(support_dim));
}

HermitianMatrix SimulationModel::nu_B(const HermitianMatrix& r) const {
  if (r.dim() != dimB) throw Error(ErrorCode::Dimension, "nu_B: dimension mismatch");
  const Matrix compressed = isometry.adjoint() * r.matrix() * isometry;
  return kron(HermitianMatrix::identity(support_dim), transpose_in_basis(basisU, compressed));
}

namespace sim {

RestrictedPreparation restrict_support(const ValidPreparation& prep, double rank_tol) {
  const auto marg = prep::marginals(prep);
  HermCalculus calc = herm_calculus(marg.bob_state, rank_tol);
  if (calc.rank == 0) throw Error(ErrorCode::Degenerate, "Bob marginal has rank 0");
  const std::size_t n = prep.dimB();
  if (calc.rank == n) {
    return {prep, HermitianMatrix::identity(n), Matrix::identity(n)};
  }

  const std::size_t r = calc.rank;
  Matrix v(n, r);
  for (std::size_t k = 0; k < r; ++k)
    for (std::size_t i = 0; i < n; ++i) v(i, k) = calc.eig.vectors(i, n - r + k);

  const Matrix lift = kron(Matrix::identity(prep.dimA()), v.adjoint());
  HermitianMatrix blocks = congruence(lift, prep.blocks());
  return {detail::PreparationAccess::make(prep.dimA(), r, std::move(blocks)),
          std::move(calc.support), std::move(v)};
}

PositiveMapDescriptor extract_u(const ValidPreparation& prep) {
  const auto marg = prep::marginals(prep);
  HermCalculus calc = herm_calculus(marg.bob_state);
  const double lmin = calc.eig.values.front();
  const double lmax = calc.eig.values.back();
  if (!(lmax > 0.0) || lmin / lmax < kConditioningGuard) {
    std::ostringstream os;
    os << "Bob marginal is ill-conditioned: lambda_min / lambda_max = " << lmin / lmax
       << "; restrict to its support first";
    throw Error(ErrorCode::IllConditioned, os.str(), lmin / lmax);
  }
  const Matrix lift = kron(Matrix::identity(prep.dimA()), calc.pinv_sqrt.matrix());
  PositiveMapDescriptor u;
  u.dim_in = prep.dimA();
  u.dim_out = prep.dimB();
  u.choi = congruence(lift, prep.blocks());
  u.label = "extracted";
  u.unital = true;
  return u;
}

SimulationModel build_simulation(const ValidPreparation& prep, std::string provenance) {
  RestrictedPreparation restricted = restrict_support(prep);
  const auto marg = prep::marginals(restricted.prep);
  const auto eig = eigh(marg.bob_state);
  const std::size_t r = restricted.prep.dimB();

  SimulationModel m;
  m.dimA = prep.dimA();
  m.dimB = prep.dimB();
  m.support_dim = r;
  m.u = extract_u(restricted.prep);
  m.basisU = eig.vectors;
  m.isometry = std::move(restricted.isometry);
  m.provenance = std::move(provenance);

  m.omega_vec.assign(r * r, cplx{});
  for (std::size_t i = 0; i < r; ++i) {
    const double w = std::sqrt(std::max(eig.values[i], 0.0));
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b)
        m.omega_vec[a * r + b] += w * eig.vectors(a, i) * eig.vectors(b, i);
  }
  const double nrm = norm2(m.omega_vec);
  for (auto& z : m.omega_vec) z /= nrm;
  return m;
}

double simulate_value(const SimulationModel& m, const HermitianMatrix& q,
                      const HermitianMatrix& r) {
  if (q.dim() != m.dimA || r.dim() != m.dimB)
    throw Error(ErrorCode::Dimension, "simulate_value: dimension mismatch");
  const std::size_t s = m.support_dim;
  const Matrix a = apply_map(m.u, q.matrix());
  const Matrix b = transpose_in_basis(m.basisU, m.isometry.adjoint() * r.matrix() * m.isometry);
  // <Omega| a (x) b |Omega> = sum conj(W_ik) a_ij b_kl W_jl with W the r x r
  // reshaping of Omega.
  const Matrix w = unvec(m.omega_vec, s, s);
  const Matrix t = a * w * b.transpose();
  const cplx v = inner(w, t);
  return v.real();
}

void validate_povm(const Povm& povm, std::size_t dim, const std::string& name, double tol) {
  if (povm.empty()) throw Error(ErrorCode::Contract, name + ": POVM has no elements");
  Matrix sum(dim, dim);
  for (std::size_t k = 0; k < povm.size(); ++k) {
    const auto& e = povm[k];
    std::ostringstream where;
    where << name << "[" << k << "]";
    if (e.dim() != dim)
      throw Error(ErrorCode::Dimension, where.str() + ": effect has wrong dimension");
    const double lmin = min_eigenvalue(e);
    if (lmin < -tol) {
      std::ostringstream os;
      os << where.str() << ": effect is not PSD (eigenvalue " << lmin << ")";
      throw Error(ErrorCode::Contract, os.str(), lmin);
    }
    sum += e.matrix();
  }
  const double defect = (sum - Matrix::identity(dim)).frobenius_norm();
  if (defect > tol) {
    std::ostringstream os;
    os << name << ": effects sum to identity only within " << defect;
    throw Error(ErrorCode::Contract, os.str(), defect);
  }
}

namespace {

template <typename Value>
Behavior tabulate(const std::vector<Povm>& alice, const std::vector<Povm>& bob, std::size_t dimA,
                  std::size_t dimB, Value&& value) {
  if (alice.empty() || bob.empty())
    throw Error(ErrorCode::Contract, "measurement lists must be non-empty");
  Behavior b;
  b.nX = alice.size();
  b.nY = bob.size();
  b.nA = alice.front().size();
  b.nB = bob.front().size();
  for (std::size_t x = 0; x < b.nX; ++x) {
    const std::string name = "A[" + std::to_string(x) + "]";
    validate_povm(alice[x], dimA, name);
    if (alice[x].size() != b.nA)
      throw Error(ErrorCode::Contract, name + ": all Alice POVMs need the same outcome count");
  }
  for (std::size_t y = 0; y < b.nY; ++y) {
    const std::string name = "B[" + std::to_string(y) + "]";
    validate_povm(bob[y], dimB, name);
    if (bob[y].size() != b.nB)
      throw Error(ErrorCode::Contract, name + ": all Bob POVMs need the same outcome count");
  }
  b.p.assign(b.nX * b.nY * b.nA * b.nB, 0.0);
  for (std::size_t x = 0; x < b.nX; ++x)
    for (std::size_t y = 0; y < b.nY; ++y)
      for (std::size_t a = 0; a < b.nA; ++a)
        for (std::size_t o = 0; o < b.nB; ++o) b(a, o, x, y) = value(alice[x][a], bob[y][o]);
  return b;
}

}  // namespace

Behavior behavior_of(const SimulationModel& m, const std::vector<Povm>& alice,
                     const std::vector<Povm>& bob) {
  return tabulate(alice, bob, m.dimA, m.dimB, [&](const auto& q, const auto& r) {
    return simulate_value(m, q, r);
  });
}

Behavior behavior_of(const ValidPreparation& prep, const std::vector<Povm>& alice,
                     const std::vector<Povm>& bob) {
  return tabulate(alice, bob, prep.dimA(), prep.dimB(), [&](const auto& q, const auto& r) {
    return prep::eval(prep, q, r);
  });
}

NsReport ns_check(const Behavior& b, double tol) {
  NsReport rep;
  for (std::size_t y = 0; y < b.nY; ++y)
    for (std::size_t o = 0; o < b.nB; ++o) {
      double lo = 0.0, hi = 0.0;
      for (std::size_t x = 0; x < b.nX; ++x) {
        double s = 0.0;
        for (std::size_t a = 0; a < b.nA; ++a) s += b(a, o, x, y);
        lo = x == 0 ? s : std::min(lo, s);
        hi = x == 0 ? s : std::max(hi, s);
      }
      rep.max_spread_bob = std::max(rep.max_spread_bob, hi - lo);
    }
  for (std::size_t x = 0; x < b.nX; ++x)
    for (std::size_t a = 0; a < b.nA; ++a) {
      double lo = 0.0, hi = 0.0;
      for (std::size_t y = 0; y < b.nY; ++y) {
        double s = 0.0;
        for (std::size_t o = 0; o < b.nB; ++o) s += b(a, o, x, y);
        lo = y == 0 ? s : std::min(lo, s);
        hi = y == 0 ? s : std::max(hi, s);
      }
      rep.max_spread_alice = std::max(rep.max_spread_alice, hi - lo);
    }
  rep.passed = rep.max_spread_bob <= tol && rep.max_spread_alice <= tol;
  return rep;
}

namespace {

void require_2222(const Behavior& b) {
  if (b.nX != 2 || b.nY != 2 || b.nA != 2 || b.nB != 2)
    throw Error(ErrorCode::Contract, "CHSH needs 2 inputs and 2 outputs on each side");
}

double correlator(const Behavior& b, std::size_t x, std::size_t y) {
  double e = 0.0;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t o = 0; o < 2; ++o) e += ((a + o) % 2 == 0 ? 1.0 : -1.0) * b(a, o, x, y);
  return e;
}

}  // namespace

double chsh_value(const Behavior& b) {
  require_2222(b);
  return correlator(b, 0, 0) + correlator(b, 0, 1) + correlator(b, 1, 0) - correlator(b, 1, 1);
}

std::vector<double> chsh_family(const Behavior& b) {
  require_2222(b);
  const double e[2][2] = {{correlator(b, 0, 0), correlator(b, 0, 1)},
                          {correlator(b, 1, 0), correlator(b, 1, 1)}};
  std::vector<double> out;
  out.reserve(8);
  // The minus sign sits on term (mx, my); overall sign +-.
  for (int sign : {1, -1})
    for (std::size_t mx = 0; mx < 2; ++mx)
      for (std::size_t my = 0; my < 2; ++my) {
        double s = 0.0;
        for (std::size_t x = 0; x < 2; ++x)
          for (std::size_t y = 0; y < 2; ++y) s += (x == mx && y == my ? -1.0 : 1.0) * e[x][y];
        out.push_back(sign * s);
      }
  return out;
}

bool is_local_2222(const Behavior& b, double tol) {
  require_2222(b);
  const NsReport ns = ns_check(b, std::max(tol, 1e-10));
  if (!ns.passed) throw Error(ErrorCode::Contract, "is_local_2222 needs a non-signalling behavior");
  const auto family = chsh_family(b);
  return std::all_of(family.begin(), family.end(), [&](double v) { return v <= 2.0 + tol; });
}

Povm observable_povm(const HermitianMatrix& observable) {
  const std::size_t n = observable.dim();
  HermitianMatrix plus = HermitianMatrix::identity(n);
  HermitianMatrix minus = HermitianMatrix::identity(n);
  plus += observable;
  minus -= observable;
  plus *= 0.5;
  minus *= 0.5;
  return {std::move(plus), std::move(minus)};
}

HermitianMatrix xz_observable(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return HermitianMatrix(Matrix::from_rows({{c, s}, {s, -c}}));
}

Behavior deterministic_box(const std::vector<std::size_t>& alice, const std::vector<std::size_t>& bob,
                           std::size_t nA, std::size_t nB) {
  Behavior b{alice.size(), bob.size(), nA, nB, {}};
  b.p.assign(b.nX * b.nY * nA * nB, 0.0);
  for (std::size_t x = 0; x < b.nX; ++x)
    for (std::size_t y = 0; y < b.nY; ++y) b(alice[x], bob[y], x, y) = 1.0;
  return b;
}

Behavior pr_box() {
  Behavior b{2, 2, 2, 2, std::vector<double>(16, 0.0)};
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t o = 0; o < 2; ++o)
          if ((a ^ o) == (x & y)) b(a, o, x, y) = 0.5;
  return b;
}

}  // namespace sim
}  // namespace qprep
