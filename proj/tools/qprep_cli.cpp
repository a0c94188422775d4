// qprep: batch scenario runner.
//
// Exit codes: 0 all checks passed, 2 a check failed (checked negative result),
// 1 execution error (malformed input, solver failure, ...).

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qprep/json_io.hpp"
#include "qprep/scenario.hpp"

namespace {

using nlohmann::json;
using namespace qprep;

struct Options {
  std::string in;
  std::string out;
  std::string csv;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<std::size_t> max_iter;
};

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Parse, "cannot open scenario file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << '\n';
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Parse, "cannot open output file '" + path + "'");
  f << text << '\n';
}

int run(std::optional<cli::Kind> kind, const Options& opt) {
  try {
    std::string text;
    if (opt.in.empty() && kind == cli::Kind::ZooReport) {
      text = R"({"schema_version": 1, "kind": "zoo_report"})";
    } else {
      text = read_input(opt.in);
    }
    cli::Scenario s = cli::parse_scenario(text);
    if (kind && s.kind != *kind) {
      throw Error(ErrorCode::Schema, "kind: scenario declares '" + std::string(cli::to_string(s.kind)) +
                                         "' but subcommand is '" +
                                         std::string(cli::to_string(*kind)) + "'");
    }
    cli::apply_overrides(s, {opt.seed, opt.tol, opt.max_iter});
    const cli::Report rep = cli::execute(s);
    write_output(opt.out, rep.to_json().dump(2));
    if (!opt.csv.empty()) {
      if (!rep.behavior) throw Error(ErrorCode::Contract, "--csv: this scenario produced no behavior");
      std::ofstream f(opt.csv, std::ios::binary);
      f << json_io::behavior_csv(*rep.behavior);
    }
    return rep.pass ? 0 : 2;
  } catch (const Error& e) {
    json err = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    if (e.value()) err["value"] = *e.value();
    const json body = {{"schema_version", cli::kSchemaVersion},
                       {"tool", {{"name", cli::kToolName}, {"version", cli::kToolVersion}}},
                       {"error", err},
                       {"pass", false}};
    try {
      write_output(opt.out, body.dump(2));
    } catch (...) {
      std::cout << body.dump(2) << '\n';
    }
    std::cerr << "qprep: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "qprep: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate locally quantum non-signalling preparations and test decomposability"};
  app.set_version_flag("--version", std::string(cli::kToolVersion));
  app.require_subcommand(1);

  Options opt;
  int exit_code = 0;

  struct Entry {
    const char* name;
    std::optional<cli::Kind> kind;
    const char* help;
  };
  const Entry entries[] = {
      {"simulate", cli::Kind::Simulate, "Build the quantum simulation and check reproduction"},
      {"verify-modular", cli::Kind::VerifyModular, "GNS / modular-theory checks on Bob's marginal"},
      {"decompose", cli::Kind::Decompose, "Decide CP + co-CP decomposability of a map"},
      {"chsh", cli::Kind::Chsh, "CHSH value, non-signalling and locality of a behavior"},
      {"zoo-report", cli::Kind::ZooReport, "Positivity, CP, co-CP and decomposability of the map zoo"},
      {"run", std::nullopt, "Run a scenario of any kind"},
  };
  for (const auto& entry : entries) {
    CLI::App* sub = app.add_subcommand(entry.name, entry.help);
    sub->add_option("--in", opt.in, "Scenario JSON file ('-' for stdin)");
    sub->add_option("--out", opt.out, "Report file (default stdout)");
    sub->add_option("--csv", opt.csv, "Also write the measured behavior as CSV");
    sub->add_option("--seed", opt.seed, "Override the scenario seed");
    sub->add_option("--tol", opt.tol, "Multiply every tolerance by this factor")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-iter", opt.max_iter, "Override the solver iteration cap")
        ->check(CLI::PositiveNumber);
    const auto kind = entry.kind;
    sub->callback([&exit_code, &opt, kind] { exit_code = run(kind, opt); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  return exit_code;
}
