#pragma once

// Batch scenarios: a JSON file describing one pipeline run, and the report it
// produces. See README.md for the schema and examples of every kind.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qprep/decomp.hpp"
#include "qprep/prep.hpp"
#include "qprep/simfactory.hpp"

namespace qprep::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kToolName = "qprep";
inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Kind { Simulate, VerifyModular, Decompose, Chsh, ZooReport };

std::string_view to_string(Kind k);
/// Accepts both "verify_modular" and "verify-modular" spellings.
std::optional<Kind> kind_from_string(std::string_view s);

struct MapSpec {
  std::string name;
  ZooParams params;
};

struct PositiveMapState {
  MapSpec map;
  HermitianMatrix state;
};

struct ExplicitBlocks {
  Matrix blocks;
  std::size_t dimA = 0;
  std::size_t dimB = 0;
  bool renormalize = false;
};

struct Measurements {
  std::vector<Povm> alice;
  std::vector<Povm> bob;
};

struct Tolerances {
  double reproduction = 1e-9;
  double ns = 1e-10;
  double modular = 1e-9;
  double positivity = 1e-10;
  double local = 1e-9;
  double povm = 1e-9;

  void scale(double factor);
};

enum class Expectation { Any, Feasible, Infeasible };

struct Scenario {
  Kind kind = Kind::Simulate;
  std::uint64_t seed = 0;
  std::size_t samples = 500;
  std::optional<std::variant<PositiveMapState, ExplicitBlocks>> preparation;
  std::optional<Measurements> measurements;
  std::optional<Behavior> behavior;
  std::optional<MapSpec> map;
  std::optional<PositiveMapDescriptor> choi;
  std::vector<MapSpec> zoo;
  Expectation expect = Expectation::Any;
  DecompOptions solver;
  Tolerances tolerances;
  nlohmann::json echo;
};

/// Validates a UTF-8 JSON scenario. Errors are Parse (malformed JSON), Schema
/// (naming the first offending field by dotted path) or Dimension.
Scenario parse_scenario(std::string_view text);

/// Command-line overrides applied after parsing.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol_multiplier;
  std::optional<std::size_t> max_iter;
};

void apply_overrides(Scenario& s, const Overrides& o);

struct Report {
  nlohmann::json scenario_echo;
  nlohmann::json results;
  bool pass = false;
  double wall_time = 0.0;
  std::optional<Behavior> behavior;  // for CSV export

  nlohmann::json to_json() const;
};

Report execute(const Scenario& s);

/// Everything in a report except wall_time, serialized; identical for
/// identical scenarios.
std::string deterministic_payload(const Report& r);

/// The default zoo list used when a zoo_report scenario names none.
std::vector<MapSpec> default_zoo();

PositiveMapDescriptor build_map(const MapSpec& spec);
ValidPreparation build_preparation(const std::variant<PositiveMapState, ExplicitBlocks>& src);

}  // namespace qprep::cli
