#include "qprep/scenario.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "qprep/gnsmod.hpp"
#include "qprep/json_io.hpp"
#include "qprep/random.hpp"

namespace qprep::cli {

using nlohmann::json;
using json_io::require;
using json_io::to_json;

std::string_view to_string(Kind k) {
  switch (k) {
    case Kind::Simulate: return "simulate";
    case Kind::VerifyModular: return "verify_modular";
    case Kind::Decompose: return "decompose";
    case Kind::Chsh: return "chsh";
    case Kind::ZooReport: return "zoo_report";
  }
  return "simulate";
}

std::optional<Kind> kind_from_string(std::string_view s) {
  if (s == "simulate") return Kind::Simulate;
  if (s == "verify_modular" || s == "verify-modular") return Kind::VerifyModular;
  if (s == "decompose") return Kind::Decompose;
  if (s == "chsh") return Kind::Chsh;
  if (s == "zoo_report" || s == "zoo-report") return Kind::ZooReport;
  return std::nullopt;
}

void Tolerances::scale(double factor) {
  for (double* t : {&reproduction, &ns, &modular, &positivity, &local, &povm}) *t *= factor;
}

std::vector<MapSpec> default_zoo() {
  return {{"identity", {2, 0.0}},     {"identity", {3, 0.0}},  {"transpose", {2, 0.0}},
          {"transpose", {3, 0.0}},    {"depolarizing", {2, 0.5}}, {"depolarizing", {3, 1.0}},
          {"reduction", {2, 0.0}},    {"reduction", {3, 0.0}}, {"choi3", {3, 0.0}}};
}

PositiveMapDescriptor build_map(const MapSpec& spec) { return decomp::zoo(spec.name, spec.params); }

ValidPreparation build_preparation(const std::variant<PositiveMapState, ExplicitBlocks>& src) {
  if (const auto* pms = std::get_if<PositiveMapState>(&src))
    return prep::from_positive_map(build_map(pms->map), pms->state);
  const auto& ex = std::get<ExplicitBlocks>(src);
  return prep::from_explicit(ex.blocks, ex.dimA, ex.dimB, ex.renormalize);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& msg) {
  throw Error(ErrorCode::Schema, path + ": " + msg);
}

std::size_t positive_count(const json& v, const std::string& path) {
  if (!v.is_number_unsigned() || v.get<std::size_t>() == 0)
    schema_error(path, "expected a positive integer");
  return v.get<std::size_t>();
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) schema_error(path, "expected a number");
  return v.get<double>();
}

MapSpec parse_map_spec(const json& j, const std::string& path, const json* name_node = nullptr) {
  MapSpec spec;
  const json& name = name_node ? *name_node : require(j, "name", path);
  if (!name.is_string()) schema_error(path + (name_node ? ".map" : ".name"), "expected a string");
  spec.name = name.get<std::string>();
  if (auto it = j.find("params"); it != j.end()) {
    if (!it->is_object()) schema_error(path + ".params", "expected an object");
    if (auto n = it->find("n"); n != it->end()) spec.params.n = positive_count(*n, path + ".params.n");
    if (auto l = it->find("lambda"); l != it->end())
      spec.params.lambda = number(*l, path + ".params.lambda");
  }
  if (spec.name == "choi3" && spec.params.n == 0) spec.params.n = 3;
  return spec;
}

std::variant<PositiveMapState, ExplicitBlocks> parse_preparation(const json& j,
                                                                 const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected an object");
  const bool has_pms = j.contains("positive_map_state");
  const bool has_explicit = j.contains("explicit");
  if (has_pms == has_explicit)
    schema_error(path, "exactly one of 'positive_map_state' or 'explicit' is required");

  if (has_pms) {
    const std::string p = path + ".positive_map_state";
    const json& node = j.at("positive_map_state");
    if (!node.is_object()) schema_error(p, "expected an object");
    MapSpec spec = parse_map_spec(node, p, &require(node, "map", p));
    const json& state = require(node, "state", p);

    std::optional<HermitianMatrix> rho;
    if (state.is_string()) {
      if (state.get<std::string>() != "maximally_mixed")
        schema_error(p + ".state", "expected a matrix or \"maximally_mixed\"");
    } else {
      rho = json_io::hermitian_from_json(state, p + ".state");
    }
    if (spec.params.n == 0) {
      if (!rho) schema_error(p + ".params.n", "required when the state is \"maximally_mixed\"");
      spec.params.n = rho->dim();
    }
    PositiveMapDescriptor u;
    try {
      u = build_map(spec);
    } catch (const Error& e) {
      schema_error(p + ".map", e.what());
    }
    if (!rho) {
      rho = HermitianMatrix::identity(u.dim_out);
      *rho *= 1.0 / static_cast<double>(u.dim_out);
    }
    if (rho->dim() != u.dim_out) {
      std::ostringstream os;
      os << p << ".state: dimension " << rho->dim() << " does not match map output dimension "
         << u.dim_out;
      throw Error(ErrorCode::Dimension, os.str());
    }
    return PositiveMapState{std::move(spec), std::move(*rho)};
  }

  const std::string p = path + ".explicit";
  const json& node = j.at("explicit");
  ExplicitBlocks ex;
  ex.dimA = positive_count(require(node, "dimA", p), p + ".dimA");
  ex.dimB = positive_count(require(node, "dimB", p), p + ".dimB");
  ex.blocks = json_io::matrix_from_json(require(node, "blocks", p), p + ".blocks");
  if (ex.blocks.rows() != ex.dimA * ex.dimB || ex.blocks.cols() != ex.dimA * ex.dimB) {
    std::ostringstream os;
    os << p << ".blocks: size " << ex.blocks.rows() << "x" << ex.blocks.cols()
       << " does not match dimA*dimB = " << ex.dimA * ex.dimB;
    throw Error(ErrorCode::Dimension, os.str());
  }
  if (auto r = node.find("renormalize"); r != node.end()) {
    if (!r->is_boolean()) schema_error(p + ".renormalize", "expected a boolean");
    ex.renormalize = r->get<bool>();
  }
  return ex;
}

std::vector<Povm> parse_povm_list(const json& j, const std::string& path, std::size_t dim) {
  if (!j.is_array() || j.empty()) schema_error(path, "expected a non-empty array of POVMs");
  std::vector<Povm> out;
  for (std::size_t x = 0; x < j.size(); ++x) {
    const std::string px = path + "[" + std::to_string(x) + "]";
    if (!j[x].is_array() || j[x].empty()) schema_error(px, "expected a non-empty array of effects");
    Povm povm;
    for (std::size_t a = 0; a < j[x].size(); ++a) {
      const std::string pa = px + "[" + std::to_string(a) + "]";
      HermitianMatrix e = json_io::hermitian_from_json(j[x][a], pa);
      if (dim != 0 && e.dim() != dim) {
        std::ostringstream os;
        os << pa << ": effect dimension " << e.dim() << " does not match " << dim;
        throw Error(ErrorCode::Dimension, os.str());
      }
      povm.push_back(std::move(e));
    }
    out.push_back(std::move(povm));
  }
  return out;
}

std::pair<std::size_t, std::size_t> preparation_dims(
    const std::variant<PositiveMapState, ExplicitBlocks>& src) {
  if (const auto* pms = std::get_if<PositiveMapState>(&src)) {
    const auto u = build_map(pms->map);
    return {u.dim_in, u.dim_out};
  }
  const auto& ex = std::get<ExplicitBlocks>(src);
  return {ex.dimA, ex.dimB};
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) schema_error("$", "scenario must be a JSON object");

  Scenario s;
  s.echo = root;

  if (auto v = root.find("schema_version"); v != root.end()) {
    if (!v->is_number_integer() || v->get<int>() != kSchemaVersion)
      schema_error("schema_version", "unsupported schema version (expected 1)");
  }
  const json& kind = require(root, "kind", "");
  if (!kind.is_string()) schema_error("kind", "expected a string");
  const auto k = kind_from_string(kind.get<std::string>());
  if (!k) schema_error("kind", "unknown kind '" + kind.get<std::string>() + "'");
  s.kind = *k;

  if (auto v = root.find("seed"); v != root.end()) {
    if (!v->is_number_integer()) schema_error("seed", "expected an integer");
    s.seed = v->get<std::uint64_t>();
  }
  if (auto v = root.find("samples"); v != root.end()) s.samples = positive_count(*v, "samples");

  std::pair<std::size_t, std::size_t> dims{0, 0};
  if (auto v = root.find("preparation"); v != root.end()) {
    s.preparation = parse_preparation(*v, "preparation");
    dims = preparation_dims(*s.preparation);
  }
  if (auto v = root.find("measurements"); v != root.end()) {
    Measurements m;
    m.alice = parse_povm_list(require(*v, "alice", "measurements"), "measurements.alice", dims.first);
    m.bob = parse_povm_list(require(*v, "bob", "measurements"), "measurements.bob", dims.second);
    s.measurements = std::move(m);
  }
  if (auto v = root.find("behavior"); v != root.end())
    s.behavior = json_io::behavior_from_json(*v, "behavior");
  if (auto v = root.find("map"); v != root.end()) {
    s.map = parse_map_spec(*v, "map");
    try {
      (void)build_map(*s.map);
    } catch (const Error& e) {
      schema_error("map", e.what());
    }
  }
  if (auto v = root.find("choi"); v != root.end()) s.choi = json_io::map_from_json(*v, "choi");
  if (auto v = root.find("zoo"); v != root.end()) {
    if (!v->is_array()) schema_error("zoo", "expected an array of maps");
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string p = "zoo[" + std::to_string(i) + "]";
      s.zoo.push_back(parse_map_spec((*v)[i], p));
      try {
        (void)build_map(s.zoo.back());
      } catch (const Error& e) {
        schema_error(p, e.what());
      }
    }
  }
  if (auto v = root.find("expect"); v != root.end()) {
    const std::string e = v->is_string() ? v->get<std::string>() : "";
    if (e == "feasible") s.expect = Expectation::Feasible;
    else if (e == "infeasible") s.expect = Expectation::Infeasible;
    else if (e == "any") s.expect = Expectation::Any;
    else schema_error("expect", "expected \"feasible\", \"infeasible\" or \"any\"");
  }
  if (auto v = root.find("solver_opts"); v != root.end()) {
    if (!v->is_object()) schema_error("solver_opts", "expected an object");
    if (auto f = v->find("max_iter"); f != v->end())
      s.solver.max_iter = positive_count(*f, "solver_opts.max_iter");
    if (auto f = v->find("tol_feas"); f != v->end()) s.solver.tol_feas = number(*f, "solver_opts.tol_feas");
    if (auto f = v->find("gap_tol"); f != v->end()) s.solver.gap_tol = number(*f, "solver_opts.gap_tol");
    if (auto f = v->find("tol_cert"); f != v->end()) s.solver.tol_cert = number(*f, "solver_opts.tol_cert");
  }
  if (auto v = root.find("tolerances"); v != root.end()) {
    if (!v->is_object()) schema_error("tolerances", "expected an object");
    auto& t = s.tolerances;
    const std::pair<const char*, double*> fields[] = {
        {"reproduction", &t.reproduction}, {"ns", &t.ns},       {"modular", &t.modular},
        {"positivity", &t.positivity},     {"local", &t.local}, {"povm", &t.povm}};
    for (const auto& [name, slot] : fields)
      if (auto f = v->find(name); f != v->end()) *slot = number(*f, std::string("tolerances.") + name);
  }

  switch (s.kind) {
    case Kind::Simulate:
    case Kind::VerifyModular:
      if (!s.preparation) schema_error("preparation", "missing required field");
      break;
    case Kind::Decompose:
      if (!s.map && !s.choi) schema_error("map", "decompose needs 'map' or 'choi'");
      break;
    case Kind::Chsh:
      if (!s.behavior && !(s.preparation && s.measurements))
        schema_error("behavior", "chsh needs 'behavior' or 'preparation' with 'measurements'");
      break;
    case Kind::ZooReport:
      break;
  }
  return s;
}

void apply_overrides(Scenario& s, const Overrides& o) {
  if (o.seed) {
    s.seed = *o.seed;
    s.echo["seed"] = *o.seed;
  }
  if (o.tol_multiplier) {
    s.tolerances.scale(*o.tol_multiplier);
    s.solver.tol_feas *= *o.tol_multiplier;
    s.solver.tol_cert *= *o.tol_multiplier;
    s.echo["tol_multiplier"] = *o.tol_multiplier;
  }
  if (o.max_iter) {
    s.solver.max_iter = *o.max_iter;
    s.echo["solver_opts"]["max_iter"] = *o.max_iter;
  }
}

// ---------------------------------------------------------------------------
// Execution

namespace {

json check(double value, double tol, bool passed) {
  return {{"value", value}, {"tol", tol}, {"passed", passed}};
}

json check_le(double value, double tol) { return check(value, tol, value <= tol); }

json behavior_checks(const Behavior& b, const Tolerances& tol, bool& pass) {
  double min_p = 0.0;
  double norm_defect = 0.0;
  for (double v : b.p) min_p = std::min(min_p, v);
  for (std::size_t x = 0; x < b.nX; ++x)
    for (std::size_t y = 0; y < b.nY; ++y) {
      double s = 0.0;
      for (std::size_t a = 0; a < b.nA; ++a)
        for (std::size_t o = 0; o < b.nB; ++o) s += b(a, o, x, y);
      norm_defect = std::max(norm_defect, std::abs(s - 1.0));
    }
  const NsReport ns = sim::ns_check(b, tol.ns);
  json out = {{"behavior", to_json(b)},
              {"min_probability", check(min_p, 1e-12, min_p >= -1e-12)},
              {"normalization_defect", check_le(norm_defect, 1e-10)},
              {"ns",
               {{"max_spread_bob", ns.max_spread_bob},
                {"max_spread_alice", ns.max_spread_alice},
                {"tol", tol.ns},
                {"passed", ns.passed}}}};
  pass = pass && min_p >= -1e-12 && norm_defect <= 1e-10 && ns.passed;
  if (b.nX == 2 && b.nY == 2 && b.nA == 2 && b.nB == 2) {
    json c = {{"value", sim::chsh_value(b)}, {"family", sim::chsh_family(b)}};
    c["is_local"] = ns.passed ? json(sim::is_local_2222(b, tol.local)) : json(nullptr);
    out["chsh"] = std::move(c);
  }
  return out;
}

json run_simulate(const Scenario& s, bool& pass) {
  const ValidPreparation prep = build_preparation(*s.preparation);
  const SimulationModel model = sim::build_simulation(prep, std::string(to_string(s.kind)));
  json r;
  r["preparation"] = to_json(prep);
  const double blocks_min = min_eigenvalue(prep.blocks());
  r["blocks_min_eigenvalue"] = blocks_min;
  r["omega_hat_completely_positive"] = blocks_min >= -s.tolerances.positivity;
  r["model"] = {{"support_dim", model.support_dim},
                {"omega_vec", to_json(model.omega_vec)},
                {"u", to_json(model.u)}};

  const double unital = (apply_map(model.u, Matrix::identity(model.dimA)) -
                         Matrix::identity(model.support_dim))
                            .frobenius_norm();
  r["unital_residual"] = check_le(unital, 1e-9);
  pass = pass && unital <= 1e-9;

  const PositivityReport pos =
      prep::sample_pure_tensor_positivity(prep, s.samples, s.seed, 2, s.tolerances.positivity);
  r["positivity"] = {{"n_samples", pos.n_samples},
                     {"min_value", pos.min_value},
                     {"argmin", {to_json(pos.argmin.first), to_json(pos.argmin.second)}},
                     {"tol", s.tolerances.positivity},
                     {"passed", pos.passed}};
  pass = pass && pos.passed;

  Rng rng(s.seed, 1);
  double worst = 0.0;
  for (std::size_t k = 0; k < s.samples; ++k) {
    const HermitianMatrix q = random_effect(rng, prep.dimA());
    const HermitianMatrix rr = random_effect(rng, prep.dimB());
    worst = std::max(worst, std::abs(prep::eval(prep, q, rr) - sim::simulate_value(model, q, rr)));
  }
  r["reproduction"] = {{"samples", s.samples},
                       {"max_residual", worst},
                       {"tol", s.tolerances.reproduction},
                       {"passed", worst <= s.tolerances.reproduction}};
  pass = pass && worst <= s.tolerances.reproduction;

  if (s.measurements) {
    const Behavior b = sim::behavior_of(model, s.measurements->alice, s.measurements->bob);
    const Behavior direct = sim::behavior_of(prep, s.measurements->alice, s.measurements->bob);
    double diff = 0.0;
    for (std::size_t k = 0; k < b.p.size(); ++k) diff = std::max(diff, std::abs(b.p[k] - direct.p[k]));
    r["behavior_reproduction"] = check_le(diff, s.tolerances.reproduction);
    pass = pass && diff <= s.tolerances.reproduction;

    // nu_A and nu_B must carry each POVM to a POVM on the doubled space.
    double worst_psd = 0.0;
    double worst_sum = 0.0;
    const std::size_t big = model.support_dim * model.support_dim;
    auto push = [&](const std::vector<Povm>& povms, bool alice) {
      for (const auto& povm : povms) {
        Matrix sum(big, big);
        for (const auto& e : povm) {
          const HermitianMatrix img = alice ? model.nu_A(e) : model.nu_B(e);
          worst_psd = std::max(worst_psd, -min_eigenvalue(img));
          sum += img.matrix();
        }
        worst_sum = std::max(worst_sum, (sum - Matrix::identity(big)).frobenius_norm());
      }
    };
    push(s.measurements->alice, true);
    push(s.measurements->bob, false);
    r["measurement_preservation"] = {{"max_negative_eigenvalue", worst_psd},
                                     {"max_sum_defect", worst_sum},
                                     {"tol", s.tolerances.povm},
                                     {"passed", worst_psd <= s.tolerances.povm &&
                                                    worst_sum <= s.tolerances.povm}};
    pass = pass && worst_psd <= s.tolerances.povm && worst_sum <= s.tolerances.povm;
    r["measured"] = behavior_checks(b, s.tolerances, pass);
  }
  return r;
}

json run_verify_modular(const Scenario& s, bool& pass) {
  const ValidPreparation prep = build_preparation(*s.preparation);
  const RestrictedPreparation restricted = sim::restrict_support(prep);
  const HermitianMatrix d = prep::marginals(restricted.prep).bob_state;
  const GNSSpace g = gns::gns_space(d);
  const ModularData m = gns::modular_data(g);
  const double tol = s.tolerances.modular;
  const auto tomita = gns::verify_tomita(g, m, s.samples, s.seed, tol);
  const double spectrum = gns::delta_spectrum_residual(g, m);
  const auto incl = gns::verify_inclusion(d, s.samples, s.seed + 1);
  const double choi_v_min = min_eigenvalue(gns::choi_of_v(d));

  json r;
  r["state"] = to_json(d);
  r["support_dim"] = d.dim();
  r["gram_min_eigenvalue"] = min_eigenvalue(g.gram);
  r["polar"] = check_le(tomita.polar.residual, tol);
  r["j_involution"] = check_le(tomita.j_involution.residual, tol);
  r["j_vacuum"] = check_le(tomita.j_vacuum.residual, tol);
  r["commutation"] = check_le(tomita.commutation.residual, tol);
  r["delta_spectrum"] = check_le(spectrum, tol);
  r["duality"] = check_le(incl.duality_residual, tol);
  r["contractivity_excess"] = check_le(incl.contractivity_excess, tol);
  r["positive_norm"] = check_le(incl.positive_norm_residual, tol);
  r["order_detection"] = {{"passed", incl.order_detected}};
  r["choi_of_v_min_eigenvalue"] = check(choi_v_min, tol, choi_v_min >= -tol);
  r["samples"] = s.samples;
  pass = pass && tomita.passed && spectrum <= tol && incl.duality_residual <= tol &&
         incl.contractivity_excess <= tol && incl.positive_norm_residual <= tol &&
         incl.order_detected && choi_v_min >= -tol;
  return r;
}

json decompose_one(const PositiveMapDescriptor& u, const DecompOptions& opts, bool& decided,
                   bool& certified, bool& feasible) {
  const DecompOutcome out = decomp::decompose(u.choi, u.dim_in, u.dim_out, opts);
  json r;
  r["map"] = to_json(u);
  const Decision cp = decomp::is_cp(u, opts.tol_feas);
  const Decision cocp = decomp::is_co_cp(u, opts.tol_feas);
  r["is_cp"] = {{"flag", cp.flag}, {"min_eigenvalue", cp.value}};
  r["is_co_cp"] = {{"flag", cocp.flag}, {"min_eigenvalue", cocp.value}};
  r["outcome"] = to_json(out);

  feasible = false;
  certified = false;
  if (out.status == DecompStatus::Feasible) {
    const double res =
        (*out.P + partial_transpose(*out.Q, u.dim_in, u.dim_out, Leg::B) - u.choi).frobenius_norm();
    const double pmin = min_eigenvalue(*out.P);
    const double qmin = min_eigenvalue(*out.Q);
    feasible = res <= opts.tol_feas && pmin >= -opts.tol_feas && qmin >= -opts.tol_feas;
    r["feasibility_check"] = {{"residual", res},
                              {"P_min_eigenvalue", pmin},
                              {"Q_min_eigenvalue", qmin},
                              {"tol", opts.tol_feas},
                              {"passed", feasible}};
  } else if (out.status == DecompStatus::Infeasible) {
    const Decision v = decomp::verify_certificate(*out.W, u.choi, u.dim_in, u.dim_out, opts.tol_cert);
    certified = v.flag && v.value > 0.0;
    r["certificate_check"] = {{"passed", certified}, {"violation", v.value}, {"tol", opts.tol_cert}};
  }
  decided = feasible != certified;
  return r;
}

json run_decompose(const Scenario& s, bool& pass) {
  const PositiveMapDescriptor u = s.map ? build_map(*s.map) : *s.choi;
  bool decided = false, certified = false, feasible = false;
  json r = decompose_one(u, s.solver, decided, certified, feasible);
  const char* expect = s.expect == Expectation::Feasible     ? "feasible"
                       : s.expect == Expectation::Infeasible ? "infeasible"
                                                             : "any";
  const bool matched = s.expect == Expectation::Any ||
                       (s.expect == Expectation::Feasible && feasible) ||
                       (s.expect == Expectation::Infeasible && certified);
  r["expect"] = expect;
  r["expectation_met"] = matched;
  pass = pass && decided && matched;
  return r;
}

json run_chsh(const Scenario& s, bool& pass) {
  json r;
  Behavior b;
  if (s.behavior) {
    b = *s.behavior;
    r["source"] = "explicit";
  } else {
    const ValidPreparation prep = build_preparation(*s.preparation);
    const SimulationModel model = sim::build_simulation(prep, "chsh");
    b = sim::behavior_of(model, s.measurements->alice, s.measurements->bob);
    r["source"] = "simulation";
  }
  if (b.nX != 2 || b.nY != 2 || b.nA != 2 || b.nB != 2)
    throw Error(ErrorCode::Contract, "chsh needs a 2-input, 2-output behavior");
  r["measured"] = behavior_checks(b, s.tolerances, pass);
  r["tsirelson_bound"] = 2.0 * std::sqrt(2.0);
  return r;
}

json run_zoo_report(const Scenario& s, bool& pass) {
  const std::vector<MapSpec> specs = s.zoo.empty() ? default_zoo() : s.zoo;
  json entries = json::array();
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const PositiveMapDescriptor u = build_map(specs[k]);
    bool decided = false, certified = false, feasible = false;
    json e = decompose_one(u, s.solver, decided, certified, feasible);
    HermitianMatrix mixed = HermitianMatrix::identity(u.dim_out);
    mixed *= 1.0 / static_cast<double>(u.dim_out);
    const PositivityReport pos = prep::sample_pure_tensor_positivity(
        prep::from_positive_map(u, mixed), s.samples, s.seed, k, s.tolerances.positivity);
    e["positivity"] = {{"n_samples", pos.n_samples},
                       {"min_value", pos.min_value},
                       {"passed", pos.passed}};
    e["exclusive"] = decided;
    pass = pass && decided && pos.passed;
    entries.push_back(std::move(e));
  }
  return {{"maps", std::move(entries)}};
}

}  // namespace

json Report::to_json() const {
  json j = {{"schema_version", kSchemaVersion},
            {"tool", {{"name", kToolName}, {"version", kToolVersion}}},
            {"scenario", scenario_echo},
            {"results", results},
            {"pass", pass},
            {"wall_time", wall_time}};
  return j;
}

std::string deterministic_payload(const Report& r) {
  json j = r.to_json();
  j.erase("wall_time");
  return j.dump();
}

Report execute(const Scenario& s) {
  const auto t0 = std::chrono::steady_clock::now();
  Report rep;
  rep.scenario_echo = s.echo;
  bool pass = true;
  switch (s.kind) {
    case Kind::Simulate: rep.results = run_simulate(s, pass); break;
    case Kind::VerifyModular: rep.results = run_verify_modular(s, pass); break;
    case Kind::Decompose: rep.results = run_decompose(s, pass); break;
    case Kind::Chsh: rep.results = run_chsh(s, pass); break;
    case Kind::ZooReport: rep.results = run_zoo_report(s, pass); break;
  }
  if (auto it = rep.results.find("measured"); it != rep.results.end())
    rep.behavior = json_io::behavior_from_json((*it)["behavior"], "results.measured.behavior");
  rep.results["kind"] = std::string(to_string(s.kind));
  rep.results["seed"] = s.seed;
  rep.pass = pass;
  rep.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace qprep::cli
