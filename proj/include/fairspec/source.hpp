#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace fairspec
{

/// Location of a node or token inside a spec source file. Line and column are 1-based;
/// column counts bytes.
struct SourceSpan
{
  std::shared_ptr<const std::string> file;
  std::size_t offset = 0;
  std::uint32_t line = 0;
  std::uint32_t column = 0;
  std::uint32_t length = 0;

  [[nodiscard]] bool valid() const noexcept { return line != 0; }
  [[nodiscard]] std::string_view file_name() const noexcept
  {
    return file ? std::string_view(*file) : std::string_view("<input>");
  }
};

/// Smallest span covering both arguments (assumes same file, a before b).
SourceSpan join(const SourceSpan & a, const SourceSpan & b);

enum class DiagCode : std::uint8_t {
  LexError,
  ParseError,
  UnresolvedReference,
  MissingBinding,
  KindMismatch,
  DuplicateName,
  NegativeTolerance,
  InvalidFraction,
  InvalidRange,
  InvalidGroup,
  UnknownMetric,
  InvalidParameter,
  MissingLabels,
  OutcomeColumnMismatch,
};

std::string_view to_string(DiagCode code) noexcept;

struct Diagnostic
{
  DiagCode code;
  std::string message;
  SourceSpan span;
  std::string hint;  // e.g. "expected '}'"; may be empty
};

/// `file:line:col: error[Code]: message (hint)`
std::string format_diagnostic(const Diagnostic & d, bool color = false);

using Diagnostics = std::vector<Diagnostic>;

}  // namespace fairspec
