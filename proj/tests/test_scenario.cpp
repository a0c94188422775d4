#include <doctest.h>

#include <sstream>
#include <string>

#include <json.hpp>

#include "qprep/decomp.hpp"
#include "qprep/json_io.hpp"
#include "qprep/random.hpp"
#include "qprep/scenario.hpp"
#include "test_support.hpp"

using namespace qprep;
using namespace qprep::testing;
using nlohmann::json;

namespace {

const char* kSimulate = R"({
  "schema_version": 1, "kind": "simulate", "seed": 11, "samples": 200,
  "preparation": {"positive_map_state": {"map": "reduction", "params": {"n": 3},
                                         "state": "maximally_mixed"}}
})";

Error parse_error(const std::string& text) {
  try {
    (void)cli::parse_scenario(text);
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected a parse error");
  return Error(ErrorCode::Parse, "unreachable");
}

bool contains(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("kind spellings") {
  CHECK(cli::kind_from_string("verify_modular") == cli::Kind::VerifyModular);
  CHECK(cli::kind_from_string("verify-modular") == cli::Kind::VerifyModular);
  CHECK(cli::kind_from_string("zoo-report") == cli::Kind::ZooReport);
  CHECK_FALSE(cli::kind_from_string("simulation"));
}

TEST_CASE("parse: minimal simulate scenario") {
  const cli::Scenario s = cli::parse_scenario(kSimulate);
  CHECK(s.kind == cli::Kind::Simulate);
  CHECK(s.seed == 11);
  CHECK(s.samples == 200);
  REQUIRE(s.preparation);
  const auto& pm = std::get<cli::PositiveMapState>(*s.preparation);
  CHECK(pm.map.name == "reduction");
  CHECK(max_abs_diff(pm.state, (1.0 / 3.0) * Matrix::identity(3)) <= 1e-15);
}

TEST_CASE("parse: errors name the offending field") {
  {
    const Error e = parse_error(
        R"({"schema_version": 1, "kind": "simulate",
            "preparation": {"positive_map_state": {"map": "transpose"}}})");
    CHECK(e.code() == ErrorCode::Schema);
    CHECK(contains(e.what(), "preparation.positive_map_state.state"));
  }
  {
    const Error e = parse_error(
        R"({"schema_version": 1, "kind": "simulate",
            "preparation": {"explicit": {"dimA": 2, "dimB": 2,
              "blocks": {"rows": 3, "cols": 3, "data": [[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]]}}}})");
    CHECK(e.code() == ErrorCode::Dimension);
  }
  {
    const Error e = parse_error(
        R"({"schema_version": 1, "kind": "simulate",
            "preparation": {"positive_map_state": {"map": "identity",
              "state": {"rows": 2, "cols": 2, "data": [[1,0],[0,0],[0,0]]}}}})");
    CHECK(contains(e.what(), "preparation.positive_map_state.state"));
  }
  CHECK(parse_error("{not json").code() == ErrorCode::Parse);
  CHECK(parse_error(R"({"schema_version": 2, "kind": "chsh"})").code() == ErrorCode::Schema);
  CHECK(parse_error(R"({"schema_version": 1, "kind": "dance"})").code() == ErrorCode::Schema);
  CHECK(contains(parse_error(R"({"schema_version": 1, "kind": "decompose"})").what(), "map"));
}

TEST_CASE("execute: simulate on a non-CP map") {
  const cli::Report r = cli::execute(cli::parse_scenario(kSimulate));
  CHECK(r.pass);
  const json j = r.to_json();
  CHECK(j["schema_version"] == 1);
  CHECK(j["tool"]["name"] == "qprep");
  CHECK(j["results"]["reproduction"]["max_residual"].get<double>() <= 1e-9);
  CHECK(j["results"]["reproduction"]["samples"] == 200);
  CHECK(j["results"]["positivity"]["passed"] == true);
  CHECK(j["results"]["blocks_min_eigenvalue"].get<double>() < -0.1);
  CHECK(j["results"]["omega_hat_completely_positive"] == false);
  CHECK(j["scenario"]["seed"] == 11);
  CHECK(j.contains("wall_time"));
}

TEST_CASE("execute: decompose refutes Choi's map and the report re-verifies") {
  const cli::Report r = cli::execute(cli::parse_scenario(
      R"({"schema_version": 1, "kind": "decompose", "map": {"name": "choi3"}, "expect": "infeasible"})"));
  CHECK(r.pass);
  // Round-trip through text, then check using only the serialized report.
  const json j = json::parse(r.to_json().dump());
  const auto& res = j["results"];
  CHECK(res["outcome"]["status"] == "infeasible");
  const HermitianMatrix w = json_io::hermitian_from_json(res["outcome"]["W"], "W");
  const HermitianMatrix c = json_io::hermitian_from_json(res["map"]["choi"], "choi");
  CHECK(max_abs_diff(c, decomp::choi_map().choi) == 0.0);
  CHECK(oracle_min_eigenvalue(w) >= -1e-9);
  CHECK(oracle_min_eigenvalue(partial_transpose(w, 3, 3, Leg::B)) >= -1e-9);
  CHECK((w.matrix() * c.matrix()).trace().real() < 0.0);
  CHECK(decomp::verify_certificate(w, c, 3, 3, 1e-9).flag);
}

TEST_CASE("execute: mismatched expectation fails the report") {
  const cli::Report r = cli::execute(cli::parse_scenario(
      R"({"schema_version": 1, "kind": "decompose", "map": {"name": "transpose", "params": {"n": 2}},
          "expect": "infeasible"})"));
  CHECK_FALSE(r.pass);
  CHECK(r.results["expectation_met"] == false);
}

TEST_CASE("execute: verify_modular, chsh and zoo_report") {
  const cli::Report m = cli::execute(cli::parse_scenario(
      R"({"schema_version": 1, "kind": "verify_modular", "samples": 20,
          "preparation": {"positive_map_state": {"map": "depolarizing", "params": {"lambda": 0.5},
            "state": {"rows": 2, "cols": 2, "data": [[0.8,0],[0.1,0.1],[0.1,-0.1],[0.2,0]]}}}})"));
  CHECK(m.pass);
  CHECK(m.results["polar"]["value"].get<double>() <= 1e-9);

  const cli::Report c = cli::execute(cli::parse_scenario(
      R"({"schema_version": 1, "kind": "chsh", "behavior": {"nX": 2, "nY": 2, "nA": 2, "nB": 2,
          "p": [0.25,0.25,0.25,0.25, 0.25,0.25,0.25,0.25, 0.25,0.25,0.25,0.25, 0.25,0.25,0.25,0.25]}})"));
  CHECK(c.pass);
  CHECK(c.results["measured"]["chsh"]["is_local"] == true);
  REQUIRE(c.behavior);

  const cli::Report z = cli::execute(cli::parse_scenario(R"({"schema_version": 1, "kind": "zoo_report"})"));
  CHECK(z.pass);
  CHECK(z.results["maps"].size() == cli::default_zoo().size());
  for (const auto& entry : z.results["maps"]) CHECK(entry["exclusive"] == true);
}

TEST_CASE("determinism: identical scenarios give identical payloads") {
  for (const char* text :
       {kSimulate, R"({"schema_version": 1, "kind": "decompose", "map": {"name": "choi3"}})",
        R"({"schema_version": 1, "kind": "zoo_report"})"}) {
    const auto s = cli::parse_scenario(text);
    const std::string a = cli::deterministic_payload(cli::execute(s));
    const std::string b = cli::deterministic_payload(cli::execute(s));
    CHECK(a == b);
    CHECK_FALSE(contains(a, "wall_time"));
  }
  cli::Scenario s1 = cli::parse_scenario(kSimulate);
  cli::Scenario s2 = s1;
  cli::apply_overrides(s2, {std::uint64_t{12}, std::nullopt, std::nullopt});
  CHECK(cli::deterministic_payload(cli::execute(s1)) != cli::deterministic_payload(cli::execute(s2)));
}

TEST_CASE("overrides") {
  cli::Scenario s = cli::parse_scenario(R"({"schema_version": 1, "kind": "decompose", "map": {"name": "choi3"}})");
  cli::apply_overrides(s, {std::nullopt, 10.0, std::size_t{7}});
  CHECK(s.solver.max_iter == 7);
  CHECK(s.tolerances.reproduction == doctest::Approx(1e-8));
  CHECK(s.tolerances.ns == doctest::Approx(1e-9));
}

TEST_CASE("behavior CSV export") {
  const std::string csv = json_io::behavior_csv(sim::pr_box());
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,y,a,b,p");
  int rows = 0;
  double total = 0.0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    total += std::stod(line.substr(line.rfind(',') + 1));
  }
  CHECK(rows == 16);
  CHECK(total == doctest::Approx(4.0));
}

TEST_CASE("JSON matrices round-trip exactly") {
  Rng rng(41);
  const Matrix m = random_matrix(rng, 3, 4);
  const json j = json::parse(json_io::to_json(m).dump());
  CHECK(max_abs_diff(json_io::matrix_from_json(j, "m"), m) == 0.0);
  CHECK_THROWS_AS(json_io::hermitian_from_json(json_io::to_json(m), "m"), Error);
}
