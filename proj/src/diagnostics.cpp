#include "fairspec/error.hpp"
#include "fairspec/source.hpp"

namespace fairspec
{

SourceSpan join(const SourceSpan & a, const SourceSpan & b)
{
  if (!a.valid()) return b;
  if (!b.valid()) return a;
  SourceSpan out = a;
  const std::size_t end = b.offset + b.length;
  out.length = static_cast<std::uint32_t>(end > a.offset ? end - a.offset : a.length);
  return out;
}

std::string_view to_string(DiagCode code) noexcept
{
  switch (code) {
    case DiagCode::LexError: return "LexError";
    case DiagCode::ParseError: return "ParseError";
    case DiagCode::UnresolvedReference: return "UnresolvedReference";
    case DiagCode::MissingBinding: return "MissingBinding";
    case DiagCode::KindMismatch: return "KindMismatch";
    case DiagCode::DuplicateName: return "DuplicateName";
    case DiagCode::NegativeTolerance: return "NegativeTolerance";
    case DiagCode::InvalidFraction: return "InvalidFraction";
    case DiagCode::InvalidRange: return "InvalidRange";
    case DiagCode::InvalidGroup: return "InvalidGroup";
    case DiagCode::UnknownMetric: return "UnknownMetric";
    case DiagCode::InvalidParameter: return "InvalidParameter";
    case DiagCode::MissingLabels: return "MissingLabels";
    case DiagCode::OutcomeColumnMismatch: return "OutcomeColumnMismatch";
  }
  return "Unknown";
}

std::string_view to_string(ErrorCode code) noexcept
{
  switch (code) {
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::CsvError: return "CsvError";
    case ErrorCode::DuplicateColumn: return "DuplicateColumn";
    case ErrorCode::ReservedColumnName: return "ReservedColumnName";
    case ErrorCode::EmptyColumn: return "EmptyColumn";
    case ErrorCode::NonNumericColumn: return "NonNumericColumn";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::EmptyCondition: return "EmptyCondition";
    case ErrorCode::UndefinedRatio: return "UndefinedRatio";
    case ErrorCode::MissingLabels: return "MissingLabels";
    case ErrorCode::DegenerateBenefit: return "DegenerateBenefit";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::UnknownAnalysis: return "UnknownAnalysis";
    case ErrorCode::UnsupportedConstruct: return "UnsupportedConstruct";
  }
  return "Unknown";
}

std::string format_diagnostic(const Diagnostic & d, bool color)
{
  std::string out;
  out += d.span.file_name();
  if (d.span.valid()) {
    out += ':' + std::to_string(d.span.line) + ':' + std::to_string(d.span.column);
  }
  out += ": ";
  if (color) out += "\x1b[1;31m";
  out += "error[";
  out += to_string(d.code);
  out += "]";
  if (color) out += "\x1b[0m";
  out += ": " + d.message;
  if (!d.hint.empty()) out += " (" + d.hint + ")";
  return out;
}

}  // namespace fairspec
