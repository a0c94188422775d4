#include "qprep/decomp.hpp"

#include <cmath>
#include <deque>
#include <sstream>

#include "qprep/random.hpp"

namespace qprep {

std::string_view to_string(DecompStatus s) {
  switch (s) {
    case DecompStatus::Feasible: return "feasible";
    case DecompStatus::Infeasible: return "infeasible";
    case DecompStatus::Undecided: return "undecided";
  }
  return "undecided";
}

namespace decomp {

PositiveMapDescriptor identity_map(std::size_t n) {
  return descriptor_from_action(n, n, [](const Matrix& x) { return x; },
                                "identity(" + std::to_string(n) + ")", true);
}

PositiveMapDescriptor transpose_map(std::size_t n) {
  return descriptor_from_action(n, n, [](const Matrix& x) { return x.transpose(); },
                                "transpose(" + std::to_string(n) + ")", true);
}

PositiveMapDescriptor depolarizing_map(std::size_t n, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    std::ostringstream os;
    os << "depolarizing parameter " << lambda << " outside [0, 1]";
    throw Error(ErrorCode::Contract, os.str(), lambda);
  }
  std::ostringstream label;
  label << "depolarizing(" << n << "," << lambda << ")";
  return descriptor_from_action(
      n, n,
      [&](const Matrix& x) {
        return (1.0 - lambda) * x + (lambda * x.trace() / static_cast<double>(n)) * Matrix::identity(n);
      },
      label.str(), true);
}

PositiveMapDescriptor reduction_map(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::Contract, "reduction map needs n >= 2");
  const double scale = 1.0 / static_cast<double>(n - 1);
  return descriptor_from_action(
      n, n, [&](const Matrix& x) { return scale * (x.trace() * Matrix::identity(n) - x); },
      "reduction(" + std::to_string(n) + ")", true);
}

PositiveMapDescriptor choi_map() {
  // Phi(A) = [[a11 + a33, -a12, -a13], [-a21, a22 + a11, -a23], [-a31, -a32, a33 + a22]]
  // and Phi(1) = 2 * 1, hence the factor 1/2.
  return descriptor_from_action(
      3, 3,
      [](const Matrix& a) {
        Matrix out = -a;
        out(0, 0) = a(0, 0) + a(2, 2);
        out(1, 1) = a(1, 1) + a(0, 0);
        out(2, 2) = a(2, 2) + a(1, 1);
        return 0.5 * out;
      },
      "choi3", true);
}

PositiveMapDescriptor zoo(std::string_view name, ZooParams params) {
  auto need_n = [&] {
    if (params.n == 0) throw Error(ErrorCode::Contract, std::string(name) + " needs n >= 1");
    return params.n;
  };
  if (name == "identity") return identity_map(need_n());
  if (name == "transpose") return transpose_map(need_n());
  if (name == "depolarizing") return depolarizing_map(need_n(), params.lambda);
  if (name == "reduction") return reduction_map(need_n());
  if (name == "choi3") {
    if (params.n != 0 && params.n != 3) throw Error(ErrorCode::Contract, "choi3 acts on M_3");
    return choi_map();
  }
  throw Error(ErrorCode::Contract, "unknown map '" + std::string(name) + "'");
}

Decision is_cp(const PositiveMapDescriptor& u, double tol) {
  const double lmin = min_eigenvalue(u.choi);
  return {lmin >= -tol, lmin};
}

Decision is_co_cp(const PositiveMapDescriptor& u, double tol) {
  const double lmin = min_eigenvalue(partial_transpose(u.choi, u.dim_in, u.dim_out, Leg::B));
  return {lmin >= -tol, lmin};
}

Decision verify_certificate(const HermitianMatrix& w, const HermitianMatrix& c, std::size_t dim_in,
                            std::size_t dim_out, double tol) {
  if (w.dim() != c.dim() || c.dim() != dim_in * dim_out)
    throw Error(ErrorCode::Dimension, "verify_certificate: shape mismatch");
  const double pairing = inner(w.matrix(), c.matrix()).real();
  const bool psd = min_eigenvalue(w) >= -tol;
  const bool co_psd = min_eigenvalue(partial_transpose(w, dim_in, dim_out, Leg::B)) >= -tol;
  return {psd && co_psd && pairing < 0.0, -pairing};
}

namespace {

struct Pair {
  HermitianMatrix P;
  HermitianMatrix Q;
};

double pair_norm(const Pair& a) {
  const double p = a.P.frobenius_norm();
  const double q = a.Q.frobenius_norm();
  return std::sqrt(p * p + q * q);
}

class Problem {
 public:
  Problem(const HermitianMatrix& c, std::size_t dim_in, std::size_t dim_out)
      : c_(c), dim_in_(dim_in), dim_out_(dim_out) {}

  HermitianMatrix gamma(const HermitianMatrix& m) const {
    return partial_transpose(m, dim_in_, dim_out_, Leg::B);
  }

  // Orthogonal projection onto {P + Gamma(Q) = C}.
  Pair project_affine(const Pair& x) const {
    HermitianMatrix r = x.P + gamma(x.Q) - c_;
    Pair out{x.P - 0.5 * r, x.Q - 0.5 * gamma(r)};
    return out;
  }

  const HermitianMatrix& c() const { return c_; }
  std::size_t dim_in() const { return dim_in_; }
  std::size_t dim_out() const { return dim_out_; }

 private:
  const HermitianMatrix& c_;
  std::size_t dim_in_;
  std::size_t dim_out_;
};

// Dykstra projection of w onto {W >= 0} intersected with {Gamma(W) >= 0}, then
// shifted by a multiple of the identity (Gamma(1) = 1) so both cone
// conditions hold, and normalized to unit Frobenius norm.
HermitianMatrix polish_certificate(const Problem& prob, HermitianMatrix w) {
  const std::size_t n = w.dim();
  HermitianMatrix corr_a(Matrix(n, n));
  HermitianMatrix corr_b(Matrix(n, n));
  for (int it = 0; it < 200; ++it) {
    HermitianMatrix ya = psd_project(w + corr_a);
    corr_a = w + corr_a - ya;
    HermitianMatrix yb = prob.gamma(psd_project(prob.gamma(ya + corr_b)));
    corr_b = ya + corr_b - yb;
    w = std::move(yb);
  }
  const double shift = std::max({0.0, -min_eigenvalue(w), -min_eigenvalue(prob.gamma(w))});
  if (shift > 0.0) w += (shift * (1.0 + 1e-6)) * HermitianMatrix::identity(n);
  const double nrm = w.frobenius_norm();
  if (nrm > 0.0) w *= 1.0 / nrm;
  return w;
}

std::optional<HermitianMatrix> extract_certificate(const Problem& prob, const Pair& displacement,
                                                   const DecompOptions& opts,
                                                   std::size_t& attempts) {
  HermitianMatrix base = displacement.P;
  const double nrm = base.frobenius_norm();
  if (!(nrm > 0.0)) return std::nullopt;
  base *= 1.0 / nrm;

  auto accept = [&](const HermitianMatrix& w) {
    ++attempts;
    const Decision d =
        verify_certificate(w, prob.c(), prob.dim_in(), prob.dim_out(), opts.tol_cert);
    return d.flag && d.value > 0.0;
  };

  HermitianMatrix w = polish_certificate(prob, base);
  if (accept(w)) return w;

  Rng rng(opts.seed, 0x63657274ULL);
  for (int retry = 0; retry < 20; ++retry) {
    HermitianMatrix noise = random_hermitian(rng, base.dim());
    noise *= 1e-2 / noise.frobenius_norm();
    HermitianMatrix candidate = polish_certificate(prob, base + noise);
    if (accept(candidate)) return candidate;
  }
  return std::nullopt;
}

}  // namespace

DecompOutcome decompose(const HermitianMatrix& c, std::size_t dim_in, std::size_t dim_out,
                        const DecompOptions& opts) {
  if (c.dim() != dim_in * dim_out || dim_in == 0 || dim_out == 0)
    throw Error(ErrorCode::Dimension, "decompose: Choi matrix size does not match dims");
  const Problem prob(c, dim_in, dim_out);
  const std::size_t n = c.dim();
  constexpr std::size_t kWindow = 100;
  constexpr double kStallRel = 1e-12;
  constexpr std::size_t kRetryGap = 1000;

  Pair x{psd_project(c), HermitianMatrix(Matrix(n, n))};
  Pair corr{HermitianMatrix(Matrix(n, n)), HermitianMatrix(Matrix(n, n))};
  std::deque<double> gaps;
  std::size_t last_attempt = 0;
  bool attempted = false;

  DecompOutcome out;
  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    Pair y = prob.project_affine(x);
    if (min_eigenvalue(y.P) >= -opts.tol_feas && min_eigenvalue(y.Q) >= -opts.tol_feas) {
      out.status = DecompStatus::Feasible;
      out.iterations = it;
      out.residual = (y.P + prob.gamma(y.Q) - c).frobenius_norm();
      out.P = std::move(y.P);
      out.Q = std::move(y.Q);
      return out;
    }

    // Dykstra step onto the cone; the affine set needs no correction term.
    Pair z{y.P + corr.P, y.Q + corr.Q};
    Pair x_new{psd_project(z.P), psd_project(z.Q)};
    corr = Pair{z.P - x_new.P, z.Q - x_new.Q};

    Pair displacement{x_new.P - y.P, x_new.Q - y.Q};
    const double gap = pair_norm(displacement);
    out.residual = gap;
    out.iterations = it;

    gaps.push_back(gap);
    if (gaps.size() > kWindow + 1) gaps.pop_front();
    const bool stalled = gaps.size() == kWindow + 1 &&
                         std::abs(gap - gaps.front()) < kStallRel * gap;
    if (stalled && gap > opts.gap_tol && (!attempted || it - last_attempt >= kRetryGap)) {
      attempted = true;
      last_attempt = it;
      if (auto w = extract_certificate(prob, displacement, opts, out.certificate_attempts)) {
        out.status = DecompStatus::Infeasible;
        out.violation = -inner(w->matrix(), c.matrix()).real();
        out.W = std::move(*w);
        return out;
      }
    }
    x = std::move(x_new);
  }
  out.status = DecompStatus::Undecided;
  return out;
}

}  // namespace decomp
}  // namespace qprep
