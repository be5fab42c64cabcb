#include "fairspec/metrics/engine.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "fairspec/data/stats.hpp"
#include "fairspec/error.hpp"

namespace fairspec::metrics
{

namespace
{

using model::BuiltinMetric;

Predicate flag(std::string_view column, double value = 1.0)
{
  return Predicate::compare(std::string(column), CmpOp::Eq, value);
}

// Internal consistency check on metric ranges; a violation is a bug, not a data problem.
void ensure_range(BuiltinMetric m, double v, double lo, double hi)
{
  constexpr double slack = 1e-12;
  if (!(v >= lo - slack && v <= hi + slack)) {
    throw std::logic_error(
      std::string(model::to_string(m)) + " produced out-of-range value " + format_number(v));
  }
}

void require_truth(const data::BoundTable & bt, BuiltinMetric m)
{
  if (!bt.table.column_index(model::k_truth_column)) {
    throw Error(
      ErrorCode::MissingLabels,
      std::string(model::to_string(m)) + " needs a bound ground-truth column");
  }
}

// P(yhat = 1 | group and y = truth)
double rate(const data::BoundTable & bt, std::string_view group, double truth)
{
  return data::probability(
    bt, flag(model::k_outcome_column), Predicate::conj(flag(group), flag(model::k_truth_column, truth)));
}

}  // namespace

std::string_view to_string(Verdict v) noexcept { return v == Verdict::Fair ? "Fair" : "Biased"; }

std::string format_value(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v + 0.0);
  return buf;
}

double eval_builtin_group(BuiltinMetric metric, const data::BoundTable & bt)
{
  const auto outcome = flag(model::k_outcome_column);
  const auto priv = flag(model::k_privileged_column);
  const auto unpriv = flag(model::k_unprivileged_column);
  switch (metric) {
    case BuiltinMetric::StatisticalParityDifference: {
      const double v = data::probability(bt, outcome, unpriv) - data::probability(bt, outcome, priv);
      ensure_range(metric, v, -1, 1);
      return v;
    }
    case BuiltinMetric::DisparateImpact: {
      const double pu = data::probability(bt, outcome, unpriv);
      const double pp = data::probability(bt, outcome, priv);
      if (pp == 0.0) {
        throw Error(
          ErrorCode::UndefinedRatio,
          "disparate_impact is undefined: privileged group has no positive outcomes");
      }
      const double v = pu / pp;
      ensure_range(metric, v, 0, INFINITY);
      return v;
    }
    case BuiltinMetric::EqualOpportunityDifference: {
      require_truth(bt, metric);
      const double v = rate(bt, model::k_unprivileged_column, 1) - rate(bt, model::k_privileged_column, 1);
      ensure_range(metric, v, -1, 1);
      return v;
    }
    case BuiltinMetric::AverageOddsDifference: {
      require_truth(bt, metric);
      const double tpr = rate(bt, model::k_unprivileged_column, 1) - rate(bt, model::k_privileged_column, 1);
      const double fpr = rate(bt, model::k_unprivileged_column, 0) - rate(bt, model::k_privileged_column, 0);
      const double v = 0.5 * (fpr + tpr);
      ensure_range(metric, v, -1, 1);
      return v;
    }
    case BuiltinMetric::GeneralizedEntropyIndex:
    case BuiltinMetric::TheilIndex: break;
  }
  throw Error(
    ErrorCode::UnsupportedConstruct,
    std::string(model::to_string(metric)) + " is not a group metric");
}

double eval_builtin_individual(
  BuiltinMetric metric, std::span<const double> params, const data::BoundTable & bt)
{
  if (model::is_group_metric(metric)) {
    throw Error(
      ErrorCode::UnsupportedConstruct,
      std::string(model::to_string(metric)) + " is not an individual metric");
  }
  require_truth(bt, metric);
  const auto & t = bt.table;
  const auto & yhat = t.column(t.require_column(model::k_outcome_column));
  const auto & y = t.column(t.require_column(model::k_truth_column));

  // Benefits are in {0, 1, 2}; tallying them keeps the result independent of row order.
  double counts[3] = {0, 0, 0};
  for (std::size_t r = 0; r < t.row_count(); ++r) {
    const int b = static_cast<int>(yhat[r].number) - static_cast<int>(y[r].number) + 1;
    counts[b] += 1;
  }
  const double n = counts[0] + counts[1] + counts[2];
  if (n == 0) throw Error(ErrorCode::EmptyCondition, "no rows to compute benefits over");
  const double mu = (counts[1] + 2 * counts[2]) / n;
  if (mu == 0.0) throw Error(ErrorCode::DegenerateBenefit, "mean benefit is 0");

  double v = 0;
  if (metric == BuiltinMetric::TheilIndex) {
    for (int b = 1; b <= 2; ++b) {
      const double x = b / mu;
      v += counts[b] * x * std::log(x);
    }
    v /= n;
  } else {
    const double alpha = params.empty() ? 2.0 : params.front();
    if (counts[0] > 0 && alpha < 0) {
      throw Error(ErrorCode::DegenerateBenefit, "zero benefit with negative alpha");
    }
    double total = 0;
    for (int b = 0; b <= 2; ++b) total += counts[b] * std::pow(b / mu, alpha);
    v = (total - n) / (n * alpha * (alpha - 1));
  }
  ensure_range(metric, v, 0, INFINITY);
  return std::max(v, 0.0);
}

double eval_function(const FunctionExpr & expr, const data::BoundTable & bt)
{
  using K = FunctionExpr::Kind;
  switch (expr.kind) {
    case K::Constant: return expr.number;
    case K::GroupSize: return static_cast<double>(data::group_size(bt, *expr.predicate));
    case K::Probability: return data::probability(bt, *expr.predicate, expr.given);
    case K::Expected: return data::expected_value(bt, *expr.row, expr.given);
    case K::Sum: return data::sum_over(bt, *expr.predicate, *expr.row);
    case K::Log: {
      const double arg = eval_function(expr.operands[0], bt);
      if (!(arg > 0.0)) {
        throw Error(
          ErrorCode::DomainError,
          "logarithm of non-positive value " + format_number(arg) + " from `" +
            to_source(expr.operands[0]) + "`");
      }
      return std::log(arg) / std::log(expr.number);
    }
    case K::Binary: break;
  }
  const double lhs = eval_function(expr.operands[0], bt);
  const double rhs = eval_function(expr.operands[1], bt);
  switch (expr.op) {
    case ArithOp::Add: return lhs + rhs;
    case ArithOp::Sub: return lhs - rhs;
    case ArithOp::Mul: return lhs * rhs;
    case ArithOp::Div: {
      if (rhs == 0.0) {
        const auto & denom = expr.operands[1];
        std::string where;
        if (denom.span.valid()) {
          where = " at " + std::string(denom.span.file_name()) + ":" + std::to_string(denom.span.line) +
                  ":" + std::to_string(denom.span.column);
        }
        throw Error(
          ErrorCode::DivisionByZero, "denominator `" + to_source(denom) + "`" + where + " evaluates to 0");
      }
      return lhs / rhs;
    }
  }
  return 0;
}

Verdict verdict(double value, const model::Comparator & cmp, double tolerance)
{
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::NonFiniteValue, "metric value " + std::to_string(value) + " is not finite");
  }
  using Op = model::Comparator::Op;
  bool fair = false;
  switch (cmp.op) {
    case Op::Eq: fair = std::abs(value - cmp.value) <= tolerance; break;
    case Op::Le: fair = value <= cmp.value + tolerance; break;
    case Op::Ge: fair = value >= cmp.value - tolerance; break;
    case Op::Lt: fair = value < cmp.value + tolerance; break;
    case Op::Gt: fair = value > cmp.value - tolerance; break;
    case Op::Range: fair = cmp.lower - tolerance <= value && value <= cmp.upper + tolerance; break;
  }
  return fair ? Verdict::Fair : Verdict::Biased;
}

}  // namespace fairspec::metrics
