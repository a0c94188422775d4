#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qprep {

enum class ErrorCode {
  Dimension,
  SolverFailure,
  NotPsd,
  Contract,
  Faithfulness,
  IllConditioned,
  Degenerate,
  NumericalFailure,
  InvalidPreparation,
  Parse,
  Schema,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library. `value` carries the offending
// number when there is one (residual, eigenvalue, measured normalization).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::optional<double> value = std::nullopt)
      : std::runtime_error(what), code_(code), value_(value) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<double> value() const noexcept { return value_; }

 private:
  ErrorCode code_;
  std::optional<double> value_;
};

}  // namespace qprep
