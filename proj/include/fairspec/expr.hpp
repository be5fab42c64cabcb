#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fairspec/source.hpp"

namespace fairspec
{

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };
enum class ArithOp { Add, Sub, Mul, Div };

std::string_view to_string(CmpOp op) noexcept;
char to_char(ArithOp op) noexcept;

/// Literal on the right-hand side of a comparison: number or text.
using Literal = std::variant<double, std::string>;

/// Boolean row filter: `col op literal`, `and`, `or`, `not`.
struct Predicate
{
  enum class Kind { Compare, And, Or, Not };

  Kind kind = Kind::Compare;
  std::string column;
  CmpOp op = CmpOp::Eq;
  Literal literal = 0.0;
  std::vector<Predicate> operands;  // And/Or: 2, Not: 1
  SourceSpan span;

  static Predicate compare(std::string column, CmpOp op, Literal lit, SourceSpan span = {});
  static Predicate conj(Predicate lhs, Predicate rhs, SourceSpan span = {});
  static Predicate disj(Predicate lhs, Predicate rhs, SourceSpan span = {});
  static Predicate negate(Predicate operand, SourceSpan span = {});
};

/// Per-row arithmetic over numeric columns and constants.
struct RowExpr
{
  enum class Kind { Number, Column, Binary };

  Kind kind = Kind::Number;
  double number = 0.0;
  std::string column;
  ArithOp op = ArithOp::Add;
  std::vector<RowExpr> operands;  // Binary: 2
  SourceSpan span;

  static RowExpr constant(double v, SourceSpan span = {});
  static RowExpr col(std::string name, SourceSpan span = {});
  static RowExpr binary(ArithOp op, RowExpr lhs, RowExpr rhs, SourceSpan span = {});
};

/// Composable metric body evaluated over a whole bound table.
struct FunctionExpr
{
  enum class Kind { Constant, Binary, Log, Sum, Expected, GroupSize, Probability };

  Kind kind = Kind::Constant;
  double number = 0.0;  // Constant value, or Log base
  ArithOp op = ArithOp::Add;
  std::vector<FunctionExpr> operands;  // Binary: 2, Log: 1
  std::optional<Predicate> predicate;  // Sum filter, GroupSize filter, Probability event
  std::optional<Predicate> given;      // Expected / Probability condition
  std::optional<RowExpr> row;          // Sum / Expected body
  SourceSpan span;

  static FunctionExpr constant(double v, SourceSpan span = {});
  static FunctionExpr binary(ArithOp op, FunctionExpr lhs, FunctionExpr rhs, SourceSpan span = {});
  static FunctionExpr log(double base, FunctionExpr arg, SourceSpan span = {});
  static FunctionExpr sum(Predicate over, RowExpr body, SourceSpan span = {});
  static FunctionExpr expected(RowExpr body, std::optional<Predicate> given, SourceSpan span = {});
  static FunctionExpr group_size(Predicate pred, SourceSpan span = {});
  static FunctionExpr probability(Predicate event, std::optional<Predicate> given, SourceSpan span = {});
};

// Structural equality; spans are ignored.
bool same_structure(const Predicate & a, const Predicate & b);
bool same_structure(const RowExpr & a, const RowExpr & b);
bool same_structure(const FunctionExpr & a, const FunctionExpr & b);

/// Shortest decimal text that parses back to exactly `v` (never uses exponent notation).
std::string format_number(double v);
/// Double-quoted with `\"` and `\\` escapes.
std::string quote_string(std::string_view s);

// Canonical concrete syntax with minimal parentheses. The output reparses to the same tree.
std::string to_source(const Predicate & p);
std::string to_source(const RowExpr & e);
std::string to_source(const FunctionExpr & f);

/// Every column referenced by the expression, in first-occurrence order.
std::vector<std::string> referenced_columns(const FunctionExpr & f);
void collect_columns(const Predicate & p, std::vector<std::string> & out);
void collect_columns(const RowExpr & e, std::vector<std::string> & out);

}  // namespace fairspec
