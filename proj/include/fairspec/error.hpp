#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fairspec
{

/// Runtime failures raised while loading data, binding or evaluating metrics, and
/// writing generated code. Static spec problems are reported as Diagnostics instead.
enum class ErrorCode : std::uint8_t {
  IoError,
  CsvError,
  DuplicateColumn,
  ReservedColumnName,
  EmptyColumn,
  NonNumericColumn,
  MissingColumn,
  TypeMismatch,
  EmptyCondition,
  UndefinedRatio,
  MissingLabels,
  DegenerateBenefit,
  DivisionByZero,
  DomainError,
  NonFiniteValue,
  UnknownAnalysis,
  UnsupportedConstruct,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string & message)
  : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message)
  {
  }

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }
  /// Message without the code prefix.
  [[nodiscard]] const std::string & detail() const noexcept { return detail_; }

private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace fairspec
