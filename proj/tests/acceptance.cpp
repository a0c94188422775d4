// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero if
// any criterion fails. An optional argument names a directory of scenario
// files to include in the determinism check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qprep/decomp.hpp"
#include "qprep/gnsmod.hpp"
#include "qprep/json_io.hpp"
#include "qprep/prep.hpp"
#include "qprep/random.hpp"
#include "qprep/scenario.hpp"
#include "qprep/simfactory.hpp"

using namespace qprep;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

HermitianMatrix maximally_mixed(std::size_t n) {
  return (1.0 / static_cast<double>(n)) * HermitianMatrix::identity(n);
}

// The five zoo maps, with the input dimension chosen by k for the families.
PositiveMapDescriptor zoo_map(int which, std::size_t n) {
  switch (which) {
    case 0: return decomp::identity_map(n);
    case 1: return decomp::transpose_map(n);
    case 2: return decomp::depolarizing_map(n, 0.35);
    case 3: return decomp::reduction_map(n);
    default: return decomp::choi_map();
  }
}

double max_reproduction_residual(const ValidPreparation& p, Rng& rng, int pairs) {
  const auto model = sim::build_simulation(p);
  double worst = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const HermitianMatrix q = random_effect(rng, p.dimA());
    const HermitianMatrix r = random_effect(rng, p.dimB());
    worst = std::max(worst, std::abs(prep::eval(p, q, r) - sim::simulate_value(model, q, r)));
  }
  return worst;
}

Outcome reproduction() {
  Rng rng(1001);
  double worst = 0.0, worst_min_eig = 1.0;
  int runs = 0;
  for (int which = 0; which < 5; ++which) {
    for (int k = 0; k < 10; ++k) {
      const std::size_t n = which == 4 ? 3 : 2 + static_cast<std::size_t>(k % 3);
      const auto u = zoo_map(which, n);
      const HermitianMatrix d = random_state(rng, u.dim_out);
      worst_min_eig = std::min(worst_min_eig, min_eigenvalue(d));
      const auto p = prep::from_positive_map(u, d);
      worst = std::max(worst, max_reproduction_residual(p, rng, 500));
      ++runs;
    }
  }
  return {worst <= 1e-9 && worst_min_eig > 0.0 && runs == 50,
          std::to_string(runs) + " preparations x 500 pairs, max residual " + fmt("%.3e", worst)};
}

Outcome transpose_half() {
  const auto p = prep::from_positive_map(decomp::transpose_map(2), maximally_mixed(2));
  const double lmin = min_eigenvalue(p.blocks());
  Rng rng(1002);
  const double residual = max_reproduction_residual(p, rng, 500);
  return {lmin <= -0.1 && residual <= 1e-9,
          "lambda_min(C) " + fmt("%.3f", lmin) + ", max residual " + fmt("%.3e", residual)};
}

Outcome modular_suite() {
  Rng rng(1003);
  double worst = 0.0;
  bool order = true;
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = 2 + static_cast<std::size_t>(k % 3);
    const HermitianMatrix d = random_state(rng, n);
    const GNSSpace g = gns::gns_space(d);
    const ModularData m = gns::modular_data(g);
    const auto t = gns::verify_tomita(g, m, 30, 100 + k);
    const auto inc = gns::verify_inclusion(d, 30, 200 + k);
    for (double r : {t.polar.residual, t.j_involution.residual, t.j_vacuum.residual,
                     t.commutation.residual, gns::delta_spectrum_residual(g, m), inc.duality_residual,
                     inc.contractivity_excess})
      worst = std::max(worst, r);
    order = order && inc.order_detected;
  }
  return {worst <= 1e-9 && order, "20 states, max residual " + fmt("%.3e", worst)};
}

Outcome cp_of_v() {
  Rng rng(1004);
  double worst = 1.0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = 2 + static_cast<std::size_t>(k % 3);
    worst = std::min(worst, min_eigenvalue(gns::choi_of_v(random_state(rng, n))));
  }
  return {worst >= -1e-12, "50 states, min eigenvalue " + fmt("%.3e", worst)};
}

Povm random_projective(Rng& rng) {
  const HermitianMatrix p = random_pure_projector(rng, 2);
  return {p, HermitianMatrix::identity(2) - p};
}

Outcome tsirelson() {
  const auto p = prep::from_positive_map(decomp::identity_map(2), maximally_mixed(2));
  const auto model = sim::build_simulation(p);
  const double bound = 2.0 * std::sqrt(2.0);

  Rng rng(1005);
  double random_max = 0.0;
  for (int k = 0; k < 200; ++k) {
    const std::vector<Povm> a{random_projective(rng), random_projective(rng)};
    const std::vector<Povm> b{random_projective(rng), random_projective(rng)};
    for (double v : sim::chsh_family(sim::behavior_of(model, a, b))) random_max = std::max(random_max, v);
  }

  const double pi = std::acos(-1.0);
  const std::vector<Povm> alice{sim::observable_povm(sim::xz_observable(0.0)),
                                sim::observable_povm(sim::xz_observable(pi / 2))};
  const std::vector<Povm> bob{sim::observable_povm(sim::xz_observable(pi / 4)),
                              sim::observable_povm(sim::xz_observable(-pi / 4))};
  const double optimal = sim::chsh_value(sim::behavior_of(model, alice, bob));

  const Behavior pr = sim::pr_box();
  const double pr_value = sim::chsh_value(pr);
  const bool pr_nonlocal = !sim::is_local_2222(pr, 1e-9);

  double det_max = -1e9;
  for (std::size_t k = 0; k < 16; ++k) {
    const Behavior d = sim::deterministic_box({k & 1, (k >> 1) & 1}, {(k >> 2) & 1, (k >> 3) & 1}, 2, 2);
    for (double v : sim::chsh_family(d)) det_max = std::max(det_max, v);
  }

  const bool ok = random_max <= bound + 1e-9 && optimal >= bound - 1e-6 &&
                  std::abs(pr_value - 4.0) <= 1e-12 && pr_nonlocal && det_max <= 2.0 + 1e-12;
  return {ok, "random max " + fmt("%.6f", random_max) + ", optimal " + fmt("%.9f", optimal) +
                  ", PR " + fmt("%.1f", pr_value) + (pr_nonlocal ? " (nonlocal)" : " (LOCAL)") +
                  ", deterministic max " + fmt("%.1f", det_max)};
}

bool split_verified(const DecompOutcome& o, const HermitianMatrix& c, std::size_t din, std::size_t dout,
                    double tol) {
  if (o.status != DecompStatus::Feasible || !o.P || !o.Q) return false;
  const Matrix recon = o.P->matrix() + partial_transpose(*o.Q, din, dout, Leg::B);
  return (recon - c.matrix()).frobenius_norm() <= tol && min_eigenvalue(*o.P) >= -tol &&
         min_eigenvalue(*o.Q) >= -tol;
}

Outcome decomposability() {
  std::ostringstream detail;
  bool ok = true;
  for (std::size_t n : {2, 3}) {
    const auto t = decomp::transpose_map(n);
    const auto o = decomp::decompose(t.choi, n, n);
    const bool f = split_verified(o, t.choi, n, n, 1e-8);
    ok = ok && f;
    detail << "transpose(" << n << ") " << (f ? "feasible" : "NOT feasible") << " res "
           << fmt("%.1e", o.residual) << "; ";
  }
  for (const auto& u : {decomp::identity_map(3), decomp::depolarizing_map(3, 0.5)}) {
    const auto o = decomp::decompose(u.choi, u.dim_in, u.dim_out);
    const bool f = split_verified(o, u.choi, u.dim_in, u.dim_out, 1e-8) && o.iterations <= 10;
    ok = ok && f;
    detail << u.label << " " << o.iterations << " it; ";
  }

  // The refutation is checked from the serialized report alone.
  const cli::Report rep = cli::execute(cli::parse_scenario(
      R"({"schema_version": 1, "kind": "decompose", "map": {"name": "choi3"}, "expect": "infeasible"})"));
  const json j = json::parse(rep.to_json().dump());
  const json& res = j.at("results");
  bool refuted = res.at("outcome").at("status") == "infeasible" && res.at("outcome").contains("W");
  double violation = 0.0;
  if (refuted) {
    const HermitianMatrix w = json_io::hermitian_from_json(res["outcome"]["W"], "W");
    const HermitianMatrix c = json_io::hermitian_from_json(res["map"]["choi"], "choi");
    const auto v = decomp::verify_certificate(w, c, 3, 3, 1e-9);
    violation = v.value;
    refuted = v.flag && violation > 0.0 &&
              std::abs(violation - res["outcome"]["violation"].get<double>()) <= 1e-12;
  }
  ok = ok && refuted;
  detail << "choi3 " << (refuted ? "refuted" : "NOT refuted") << ", violation " << fmt("%.6f", violation);
  return {ok, detail.str()};
}

Outcome exclusion() {
  int checked = 0, good = 0;
  std::string bad;
  for (const auto& spec : cli::default_zoo()) {
    const auto u = cli::build_map(spec);
    const auto o = decomp::decompose(u.choi, u.dim_in, u.dim_out);
    const bool feasible = split_verified(o, u.choi, u.dim_in, u.dim_out, 1e-8);
    const bool certified =
        o.W && decomp::verify_certificate(*o.W, u.choi, u.dim_in, u.dim_out, 1e-9).flag;
    ++checked;
    if (feasible != certified) {
      ++good;
    } else {
      bad += " " + u.label;
    }
  }
  return {good == checked && checked > 0,
          std::to_string(good) + "/" + std::to_string(checked) + " maps exclusive" + bad};
}

std::vector<std::string> scenario_texts(const char* dir) {
  std::vector<std::string> texts{
      R"({"schema_version": 1, "kind": "simulate", "seed": 5,
          "preparation": {"positive_map_state": {"map": "choi3", "state": "maximally_mixed"}}})",
      R"({"schema_version": 1, "kind": "verify_modular", "seed": 9,
          "preparation": {"positive_map_state": {"map": "transpose", "params": {"n": 3},
            "state": {"rows": 3, "cols": 3, "data": [[0.5,0],[0,0],[0,0],[0,0],[0.3,0],[0,0],[0,0],[0,0],[0.2,0]]}}}})",
      R"({"schema_version": 1, "kind": "decompose", "map": {"name": "choi3"}})",
      R"({"schema_version": 1, "kind": "zoo_report", "seed": 4})"};
  if (dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
      if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      std::ifstream in(f);
      std::ostringstream ss;
      ss << in.rdbuf();
      texts.push_back(ss.str());
    }
  }
  return texts;
}

Outcome determinism(const char* dir) {
  const auto texts = scenario_texts(dir);
  std::size_t same = 0;
  for (const auto& t : texts) {
    const std::string a = cli::deterministic_payload(cli::execute(cli::parse_scenario(t)));
    const std::string b = cli::deterministic_payload(cli::execute(cli::parse_scenario(t)));
    if (a == b) ++same;
  }
  return {same == texts.size(),
          std::to_string(same) + "/" + std::to_string(texts.size()) + " scenarios byte-identical"};
}

}  // namespace

int main(int argc, char** argv) {
  const char* dir = argc > 1 ? argv[1] : nullptr;
  const std::vector<Criterion> criteria{
      {1, "reproduction on the zoo", 30.0, reproduction},
      {2, "positive, non-CP transpose preparation is simulated", 30.0, transpose_half},
      {3, "modular theory residuals", 10.0, modular_suite},
      {4, "complete positivity of y -> d^1/2 y d^1/2", 5.0, cp_of_v},
      {5, "Tsirelson bound, PR box, deterministic boxes", 10.0, tsirelson},
      {6, "decomposability decisions and serialized certificate", 60.0, decomposability},
      {7, "certificate / decomposition mutual exclusion", 60.0, exclusion},
      {8, "deterministic reports", 60.0, [dir] { return determinism(dir); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && secs < c.budget_s;
    if (!pass) ++failures;
    std::printf("[%s] %d. %s: %s (%.2f s, budget %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.title,
                o.detail.c_str(), secs, c.budget_s);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
