#include "fairspec/expr.hpp"

#include <algorithm>
#include <array>
#include <charconv>

namespace fairspec
{

std::string_view to_string(CmpOp op) noexcept
{
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

char to_char(ArithOp op) noexcept
{
  switch (op) {
    case ArithOp::Add: return '+';
    case ArithOp::Sub: return '-';
    case ArithOp::Mul: return '*';
    case ArithOp::Div: return '/';
  }
  return '?';
}

Predicate Predicate::compare(std::string column, CmpOp op, Literal lit, SourceSpan span)
{
  Predicate p;
  p.kind = Kind::Compare;
  p.column = std::move(column);
  p.op = op;
  p.literal = std::move(lit);
  p.span = std::move(span);
  return p;
}

Predicate Predicate::conj(Predicate lhs, Predicate rhs, SourceSpan span)
{
  Predicate p;
  p.kind = Kind::And;
  p.operands.push_back(std::move(lhs));
  p.operands.push_back(std::move(rhs));
  p.span = std::move(span);
  return p;
}

Predicate Predicate::disj(Predicate lhs, Predicate rhs, SourceSpan span)
{
  Predicate p = conj(std::move(lhs), std::move(rhs), std::move(span));
  p.kind = Kind::Or;
  return p;
}

Predicate Predicate::negate(Predicate operand, SourceSpan span)
{
  Predicate p;
  p.kind = Kind::Not;
  p.operands.push_back(std::move(operand));
  p.span = std::move(span);
  return p;
}

RowExpr RowExpr::constant(double v, SourceSpan span)
{
  RowExpr e;
  e.kind = Kind::Number;
  e.number = v;
  e.span = std::move(span);
  return e;
}

RowExpr RowExpr::col(std::string name, SourceSpan span)
{
  RowExpr e;
  e.kind = Kind::Column;
  e.column = std::move(name);
  e.span = std::move(span);
  return e;
}

RowExpr RowExpr::binary(ArithOp op, RowExpr lhs, RowExpr rhs, SourceSpan span)
{
  RowExpr e;
  e.kind = Kind::Binary;
  e.op = op;
  e.operands.push_back(std::move(lhs));
  e.operands.push_back(std::move(rhs));
  e.span = std::move(span);
  return e;
}

FunctionExpr FunctionExpr::constant(double v, SourceSpan span)
{
  FunctionExpr f;
  f.kind = Kind::Constant;
  f.number = v;
  f.span = std::move(span);
  return f;
}

FunctionExpr FunctionExpr::binary(ArithOp op, FunctionExpr lhs, FunctionExpr rhs, SourceSpan span)
{
  FunctionExpr f;
  f.kind = Kind::Binary;
  f.op = op;
  f.operands.push_back(std::move(lhs));
  f.operands.push_back(std::move(rhs));
  f.span = std::move(span);
  return f;
}

FunctionExpr FunctionExpr::log(double base, FunctionExpr arg, SourceSpan span)
{
  FunctionExpr f;
  f.kind = Kind::Log;
  f.number = base;
  f.operands.push_back(std::move(arg));
  f.span = std::move(span);
  return f;
}

FunctionExpr FunctionExpr::sum(Predicate over, RowExpr body, SourceSpan span)
{
  FunctionExpr f;
  f.kind = Kind::Sum;
  f.predicate = std::move(over);
  f.row = std::move(body);
  f.span = std::move(span);
  return f;
}

FunctionExpr FunctionExpr::expected(RowExpr body, std::optional<Predicate> given, SourceSpan span)
{
  FunctionExpr f;
  f.kind = Kind::Expected;
  f.row = std::move(body);
  f.given = std::move(given);
  f.span = std::move(span);
  return f;
}

FunctionExpr FunctionExpr::group_size(Predicate pred, SourceSpan span)
{
  FunctionExpr f;
  f.kind = Kind::GroupSize;
  f.predicate = std::move(pred);
  f.span = std::move(span);
  return f;
}

FunctionExpr FunctionExpr::probability(
  Predicate event, std::optional<Predicate> given, SourceSpan span)
{
  FunctionExpr f;
  f.kind = Kind::Probability;
  f.predicate = std::move(event);
  f.given = std::move(given);
  f.span = std::move(span);
  return f;
}

namespace
{

template <class T>
bool same_optional(const std::optional<T> & a, const std::optional<T> & b)
{
  if (a.has_value() != b.has_value()) return false;
  return !a || same_structure(*a, *b);
}

template <class T>
bool same_operands(const std::vector<T> & a, const std::vector<T> & b)
{
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](const T & x, const T & y) {
    return same_structure(x, y);
  });
}

}  // namespace

bool same_structure(const Predicate & a, const Predicate & b)
{
  if (a.kind != b.kind) return false;
  if (a.kind == Predicate::Kind::Compare) {
    return a.column == b.column && a.op == b.op && a.literal == b.literal;
  }
  return same_operands(a.operands, b.operands);
}

bool same_structure(const RowExpr & a, const RowExpr & b)
{
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case RowExpr::Kind::Number: return a.number == b.number;
    case RowExpr::Kind::Column: return a.column == b.column;
    case RowExpr::Kind::Binary: return a.op == b.op && same_operands(a.operands, b.operands);
  }
  return false;
}

bool same_structure(const FunctionExpr & a, const FunctionExpr & b)
{
  if (a.kind != b.kind) return false;
  if (a.kind == FunctionExpr::Kind::Constant || a.kind == FunctionExpr::Kind::Log) {
    if (a.number != b.number) return false;
  }
  if (a.kind == FunctionExpr::Kind::Binary && a.op != b.op) return false;
  return same_operands(a.operands, b.operands) && same_optional(a.predicate, b.predicate) &&
         same_optional(a.given, b.given) && same_optional(a.row, b.row);
}

std::string format_number(double v)
{
  std::array<char, 512> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed);
  if (ec != std::errc{}) {
    // Only reachable for magnitudes beyond ~1e500, which doubles cannot hold.
    return "0";
  }
  return std::string(buf.data(), end);
}

std::string quote_string(std::string_view s)
{
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

namespace
{

int precedence(const Predicate & p)
{
  switch (p.kind) {
    case Predicate::Kind::Or: return 1;
    case Predicate::Kind::And: return 2;
    case Predicate::Kind::Not: return 3;
    case Predicate::Kind::Compare: return 4;
  }
  return 4;
}

void print(const Predicate & p, std::string & out);

void print_child(const Predicate & child, int parent_prec, bool right, std::string & out)
{
  const int prec = precedence(child);
  const bool parens = prec < parent_prec || (right && prec == parent_prec);
  if (parens) out += '(';
  print(child, out);
  if (parens) out += ')';
}

void print(const Predicate & p, std::string & out)
{
  switch (p.kind) {
    case Predicate::Kind::Compare:
      out += p.column;
      out += ' ';
      out += to_string(p.op);
      out += ' ';
      if (const auto * num = std::get_if<double>(&p.literal)) {
        out += format_number(*num);
      } else {
        out += quote_string(std::get<std::string>(p.literal));
      }
      return;
    case Predicate::Kind::Not:
      out += "not ";
      print_child(p.operands[0], 3, false, out);
      return;
    case Predicate::Kind::And:
    case Predicate::Kind::Or: {
      const int prec = precedence(p);
      print_child(p.operands[0], prec, false, out);
      out += p.kind == Predicate::Kind::And ? " and " : " or ";
      print_child(p.operands[1], prec, true, out);
      return;
    }
  }
}

int arith_precedence(ArithOp op) { return op == ArithOp::Add || op == ArithOp::Sub ? 1 : 2; }

template <class Node, class AtomFn>
void print_arith(const Node & n, std::string & out, AtomFn && atom)
{
  if (n.kind != Node::Kind::Binary) {
    atom(n, out);
    return;
  }
  const int prec = arith_precedence(n.op);
  auto child = [&](const Node & c, bool right) {
    const bool parens = c.kind == Node::Kind::Binary &&
                        (arith_precedence(c.op) < prec || (right && arith_precedence(c.op) == prec));
    if (parens) out += '(';
    print_arith(c, out, atom);
    if (parens) out += ')';
  };
  child(n.operands[0], false);
  out += ' ';
  out += to_char(n.op);
  out += ' ';
  child(n.operands[1], true);
}

void print_row_atom(const RowExpr & e, std::string & out)
{
  if (e.kind == RowExpr::Kind::Number) {
    out += format_number(e.number);
  } else {
    out += e.column;
  }
}

void print_function_atom(const FunctionExpr & f, std::string & out)
{
  switch (f.kind) {
    case FunctionExpr::Kind::Constant: out += format_number(f.number); return;
    case FunctionExpr::Kind::Log:
      out += "log(" + format_number(f.number) + ", " + to_source(f.operands[0]) + ")";
      return;
    case FunctionExpr::Kind::GroupSize: out += "group_size(" + to_source(*f.predicate) + ")"; return;
    case FunctionExpr::Kind::Probability:
      out += "probability(" + to_source(*f.predicate);
      if (f.given) out += " | " + to_source(*f.given);
      out += ")";
      return;
    case FunctionExpr::Kind::Expected:
      out += "expected(" + to_source(*f.row);
      if (f.given) out += " | " + to_source(*f.given);
      out += ")";
      return;
    case FunctionExpr::Kind::Sum:
      out += "sum(" + to_source(*f.predicate) + ", " + to_source(*f.row) + ")";
      return;
    case FunctionExpr::Kind::Binary: break;
  }
}

}  // namespace

std::string to_source(const Predicate & p)
{
  std::string out;
  print(p, out);
  return out;
}

std::string to_source(const RowExpr & e)
{
  std::string out;
  print_arith(e, out, print_row_atom);
  return out;
}

std::string to_source(const FunctionExpr & f)
{
  std::string out;
  print_arith(f, out, print_function_atom);
  return out;
}

void collect_columns(const Predicate & p, std::vector<std::string> & out)
{
  if (p.kind == Predicate::Kind::Compare) {
    if (std::find(out.begin(), out.end(), p.column) == out.end()) out.push_back(p.column);
    return;
  }
  for (const auto & o : p.operands) collect_columns(o, out);
}

void collect_columns(const RowExpr & e, std::vector<std::string> & out)
{
  if (e.kind == RowExpr::Kind::Column) {
    if (std::find(out.begin(), out.end(), e.column) == out.end()) out.push_back(e.column);
    return;
  }
  for (const auto & o : e.operands) collect_columns(o, out);
}

std::vector<std::string> referenced_columns(const FunctionExpr & f)
{
  std::vector<std::string> out;
  auto walk = [&](const FunctionExpr & node, auto & self) -> void {
    if (node.predicate) collect_columns(*node.predicate, out);
    if (node.row) collect_columns(*node.row, out);
    if (node.given) collect_columns(*node.given, out);
    for (const auto & o : node.operands) self(o, self);
  };
  walk(f, walk);
  return out;
}

}  // namespace fairspec
