#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "fairspec/dsl/ast.hpp"
#include "fairspec/expr.hpp"
#include "fairspec/source.hpp"

namespace fairspec::dsl
{

template <class T>
struct ParseResult
{
  std::optional<T> value;  // set iff diagnostics is empty
  Diagnostics diagnostics;

  [[nodiscard]] bool ok() const noexcept { return value.has_value(); }
};

/// Parses a whole spec. Recovers at `bias` blocks so several errors can be reported at once.
ParseResult<RawSpec> parse_spec(std::string_view text, std::string file_name = "<input>");

/// Parses a standalone predicate such as `frequency == 0 and ranking == 1`.
ParseResult<Predicate> parse_predicate(std::string_view text);

/// Parses a standalone metric body such as `group_size(a == 1) / group_size(b == 1)`.
ParseResult<FunctionExpr> parse_function(std::string_view text);

/// Parses standalone row arithmetic such as `2 * yhat - 1`.
ParseResult<RowExpr> parse_row_expr(std::string_view text);

/// Canonical source text for a spec; parse_spec(print_spec(s)) is structurally equal to s.
std::string print_spec(const RawSpec & spec);

}  // namespace fairspec::dsl
