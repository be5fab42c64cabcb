#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "fairspec/data/bind.hpp"
#include "fairspec/expr.hpp"

namespace fairspec::data
{

/// Predicate with column names resolved against one table.
///
/// Comparison semantics: number literals compare numerically against numeric cells; string
/// literals compare byte-wise against the raw cell text. A missing cell fails every
/// comparison; a numeric literal against a text cell satisfies only `!=`.
class RowFilter
{
public:
  /// Throws MissingColumn if the predicate names a column the table lacks.
  RowFilter(const Table & table, const Predicate & pred);

  [[nodiscard]] bool operator()(std::size_t row) const { return eval(root_, row); }

private:
  struct Node
  {
    Predicate::Kind kind;
    std::size_t column = 0;
    CmpOp op = CmpOp::Eq;
    Literal literal;
    std::vector<Node> operands;
  };

  Node compile(const Predicate & p) const;
  bool eval(const Node & n, std::size_t row) const;

  const Table * table_;
  Node root_;
};

/// Row count of `bt` satisfying `pred`.
std::size_t group_size(const BoundTable & bt, const Predicate & pred);

/// |event and given| / |given|, or |event| / rows when `given` is absent.
/// Throws EmptyCondition when the denominator is zero.
double probability(const BoundTable & bt, const Predicate & event, const std::optional<Predicate> & given = {});

/// Mean of `body` over rows satisfying `given` (all rows when absent). Throws EmptyCondition
/// when no row qualifies and TypeMismatch when `body` touches a non-numeric cell.
double expected_value(const BoundTable & bt, const RowExpr & body, const std::optional<Predicate> & given = {});

/// Sum of `body` over rows satisfying `over` (0 when none do).
double sum_over(const BoundTable & bt, const Predicate & over, const RowExpr & body);

/// Value of `body` on one row.
double eval_row(const Table & table, const RowExpr & body, std::size_t row);

}  // namespace fairspec::data
