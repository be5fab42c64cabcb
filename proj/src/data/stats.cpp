#include "fairspec/data/stats.hpp"

#include "fairspec/error.hpp"

namespace fairspec::data
{

namespace
{

template <class T>
bool compare(const T & lhs, CmpOp op, const T & rhs)
{
  switch (op) {
    case CmpOp::Eq: return lhs == rhs;
    case CmpOp::Ne: return lhs != rhs;
    case CmpOp::Lt: return lhs < rhs;
    case CmpOp::Le: return lhs <= rhs;
    case CmpOp::Gt: return lhs > rhs;
    case CmpOp::Ge: return lhs >= rhs;
  }
  return false;
}

std::size_t count_rows(const Table & t, const RowFilter & f)
{
  std::size_t n = 0;
  for (std::size_t r = 0; r < t.row_count(); ++r) n += f(r) ? 1 : 0;
  return n;
}

}  // namespace

RowFilter::RowFilter(const Table & table, const Predicate & pred) : table_(&table), root_(compile(pred)) {}

RowFilter::Node RowFilter::compile(const Predicate & p) const
{
  Node n;
  n.kind = p.kind;
  if (p.kind == Predicate::Kind::Compare) {
    n.column = table_->require_column(p.column);
    n.op = p.op;
    n.literal = p.literal;
    return n;
  }
  for (const auto & o : p.operands) n.operands.push_back(compile(o));
  return n;
}

bool RowFilter::eval(const Node & n, std::size_t row) const
{
  switch (n.kind) {
    case Predicate::Kind::And: return eval(n.operands[0], row) && eval(n.operands[1], row);
    case Predicate::Kind::Or: return eval(n.operands[0], row) || eval(n.operands[1], row);
    case Predicate::Kind::Not: return !eval(n.operands[0], row);
    case Predicate::Kind::Compare: break;
  }
  const Cell & cell = table_->cell(row, n.column);
  if (cell.is_missing()) return false;
  if (const auto * num = std::get_if<double>(&n.literal)) {
    if (!cell.is_number()) return n.op == CmpOp::Ne;
    return compare(cell.number, n.op, *num);
  }
  return compare(std::string_view(cell.text), n.op, std::string_view(std::get<std::string>(n.literal)));
}

std::size_t group_size(const BoundTable & bt, const Predicate & pred)
{
  return count_rows(bt.table, RowFilter(bt.table, pred));
}

double probability(const BoundTable & bt, const Predicate & event, const std::optional<Predicate> & given)
{
  const RowFilter ev(bt.table, event);
  if (!given) {
    const std::size_t n = bt.table.row_count();
    if (n == 0) throw Error(ErrorCode::EmptyCondition, "probability over an empty table");
    return static_cast<double>(count_rows(bt.table, ev)) / static_cast<double>(n);
  }
  const RowFilter cond(bt.table, *given);
  std::size_t both = 0;
  std::size_t denom = 0;
  for (std::size_t r = 0; r < bt.table.row_count(); ++r) {
    if (!cond(r)) continue;
    ++denom;
    if (ev(r)) ++both;
  }
  if (denom == 0) {
    throw Error(ErrorCode::EmptyCondition, "no rows satisfy condition `" + to_source(*given) + "`");
  }
  return static_cast<double>(both) / static_cast<double>(denom);
}

double eval_row(const Table & table, const RowExpr & body, std::size_t row)
{
  switch (body.kind) {
    case RowExpr::Kind::Number: return body.number;
    case RowExpr::Kind::Column: {
      const Cell & c = table.cell(row, table.require_column(body.column));
      if (!c.is_number()) {
        throw Error(
          ErrorCode::TypeMismatch, "column '" + body.column + "' has non-numeric value '" + c.text +
                                     "' in row " + std::to_string(row + 1));
      }
      return c.number;
    }
    case RowExpr::Kind::Binary: break;
  }
  const double lhs = eval_row(table, body.operands[0], row);
  const double rhs = eval_row(table, body.operands[1], row);
  switch (body.op) {
    case ArithOp::Add: return lhs + rhs;
    case ArithOp::Sub: return lhs - rhs;
    case ArithOp::Mul: return lhs * rhs;
    case ArithOp::Div:
      if (rhs == 0.0) {
        throw Error(
          ErrorCode::DivisionByZero,
          "`" + to_source(body.operands[1]) + "` is 0 in row " + std::to_string(row + 1));
      }
      return lhs / rhs;
  }
  return 0;
}

double expected_value(const BoundTable & bt, const RowExpr & body, const std::optional<Predicate> & given)
{
  std::optional<RowFilter> cond;
  if (given) cond.emplace(bt.table, *given);
  double total = 0;
  std::size_t n = 0;
  for (std::size_t r = 0; r < bt.table.row_count(); ++r) {
    if (cond && !(*cond)(r)) continue;
    total += eval_row(bt.table, body, r);
    ++n;
  }
  if (n == 0) {
    throw Error(
      ErrorCode::EmptyCondition,
      given ? "no rows satisfy condition `" + to_source(*given) + "`" : "expected value over an empty table");
  }
  return total / static_cast<double>(n);
}

double sum_over(const BoundTable & bt, const Predicate & over, const RowExpr & body)
{
  const RowFilter f(bt.table, over);
  double total = 0;
  for (std::size_t r = 0; r < bt.table.row_count(); ++r) {
    if (f(r)) total += eval_row(bt.table, body, r);
  }
  return total;
}

}  // namespace fairspec::data
