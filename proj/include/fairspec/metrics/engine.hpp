#pragma once

#include <span>
#include <string>
#include <string_view>

#include "fairspec/data/bind.hpp"
#include "fairspec/expr.hpp"
#include "fairspec/model/spec_model.hpp"

namespace fairspec::metrics
{

enum class Verdict { Fair, Biased };

std::string_view to_string(Verdict v) noexcept;

/// Up to 12 significant digits (`%.12g`), with negative zero printed as `0`.
std::string format_value(double v);

/// Group metrics over `__outcome`, `__priv`, `__unpriv` (and `__truth` for the
/// label-based ones), always unprivileged minus (or over) privileged:
///   statistical_parity_difference = P(yhat=1 | unpriv) - P(yhat=1 | priv)
///   disparate_impact              = P(yhat=1 | unpriv) / P(yhat=1 | priv)
///   equal_opportunity_difference  = TPR_unpriv - TPR_priv
///   average_odds_difference       = ((FPR_unpriv - FPR_priv) + (TPR_unpriv - TPR_priv)) / 2
double eval_builtin_group(model::BuiltinMetric metric, const data::BoundTable & bt);

/// Individual metrics over the per-row benefit b = yhat - y + 1:
///   generalized_entropy_index(alpha) = sum((b/mu)^alpha - 1) / (n alpha (alpha - 1))
///   theil_index                      = sum((b/mu) ln(b/mu)) / n, with 0 ln 0 = 0
double eval_builtin_individual(
  model::BuiltinMetric metric, std::span<const double> params, const data::BoundTable & bt);

/// Recursive evaluation of a composed metric body. Division by a zero-valued subexpression
/// throws DivisionByZero naming that subexpression and its position.
double eval_function(const FunctionExpr & expr, const data::BoundTable & bt);

/// Fair iff the tolerance-widened condition holds:
///   == v: |x - v| <= t     <= v: x <= v + t     >= v: x >= v - t
///   <  v: x < v + t        >  v: x > v - t      in [lo, hi]: lo - t <= x <= hi + t
/// Throws NonFiniteValue for NaN or infinite values.
Verdict verdict(double value, const model::Comparator & cmp, double tolerance);

}  // namespace fairspec::metrics
