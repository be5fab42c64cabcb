#include "fairspec/model/validate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace fairspec::model
{

namespace
{

using dsl::Ident;

class Validator
{
public:
  explicit Validator(Diagnostics & diags) : diags_(diags) {}

  SpecModel run(const dsl::RawSpec & raw)
  {
    SpecModel model;
    std::set<std::string> bias_names;
    for (const auto & rb : raw.biases) {
      if (!bias_names.insert(rb.name.text).second) {
        report(DiagCode::DuplicateName, "duplicate bias name \"" + rb.name.text + "\"", rb.name.span);
      }
      model.biases.push_back(bias(rb));
    }
    return model;
  }

private:
  void report(DiagCode code, std::string message, const SourceSpan & span, std::string hint = {})
  {
    diags_.push_back({code, std::move(message), span, std::move(hint)});
  }

  BiasSpec bias(const dsl::RawBias & rb)
  {
    BiasSpec b;
    b.name = rb.name.text;
    b.kind = rb.kind.text == "individual" ? BiasKind::Individual : BiasKind::Group;
    b.domain = rb.domain.text;
    b.span = rb.span;
    for (const auto & s : rb.sources) b.sources.push_back(BiasSource::from_identifier(s.text));

    std::set<std::string> var_names;
    std::set<std::string> derived;
    for (const auto & rv : rb.variables) {
      if (!var_names.insert(rv.name.text).second) {
        report(
          DiagCode::DuplicateName, "duplicate sensitive variable '" + rv.name.text + "'",
          rv.name.span);
        continue;
      }
      SensitiveVariable v;
      v.name = rv.name.text;
      for (const auto & val : rv.values) {
        if (std::find(v.values.begin(), v.values.end(), val.text) != v.values.end()) {
          report(
            DiagCode::DuplicateName,
            "duplicate value '" + val.text + "' in sensitive variable '" + v.name + "'", val.span);
          continue;
        }
        if (!derived.insert(indicator_column(v.name, val.text)).second) {
          report(
            DiagCode::DuplicateName,
            "indicator column '" + indicator_column(v.name, val.text) +
              "' is derived from two different variable/value pairs",
            val.span, "rename the variable or the value");
        }
        v.values.push_back(val.text);
      }
      b.sensitive_variables.push_back(std::move(v));
    }
    b.positive_outcome = rb.positive_outcome.text;

    groups(rb, b);

    for (const auto & ra : rb.analyses) b.analyses.push_back(analysis(ra, b));
    return b;
  }

  void groups(const dsl::RawBias & rb, BiasSpec & b)
  {
    const dsl::RawGroup * priv = nullptr;
    const dsl::RawGroup * unpriv = nullptr;
    for (const auto & g : rb.groups) {
      auto & slot = g.privileged ? priv : unpriv;
      if (slot) {
        report(
          DiagCode::InvalidGroup,
          std::string("bias \"") + rb.name.text + "\" declares two " +
            (g.privileged ? "privileged" : "unprivileged") + " groups",
          g.span, "declare exactly one privileged and one unprivileged group");
        continue;
      }
      slot = &g;
      (g.privileged ? b.privileged : b.unprivileged) = group(g, b);
    }
    if (priv && unpriv) {
      auto pairs = [](const SensitiveGroup & g) {
        std::set<std::pair<std::string, std::string>> out;
        for (const auto & m : g.members) out.emplace(m.variable, m.value);
        return out;
      };
      if (!b.privileged.members.empty() && pairs(b.privileged) == pairs(b.unprivileged)) {
        report(
          DiagCode::InvalidGroup, "privileged and unprivileged groups are identical", unpriv->span);
      }
    }
  }

  SensitiveGroup group(const dsl::RawGroup & g, const BiasSpec & b)
  {
    SensitiveGroup out;
    std::set<std::string> seen;
    for (const auto & m : g.members) {
      const SensitiveVariable * var = b.find_variable(m.variable.text);
      if (!var) {
        report(
          DiagCode::UnresolvedReference,
          "group references undeclared sensitive variable '" + m.variable.text + "'",
          m.variable.span);
        continue;
      }
      if (std::find(var->values.begin(), var->values.end(), m.value.text) == var->values.end()) {
        report(
          DiagCode::UnresolvedReference,
          "value '" + m.value.text + "' is not declared for sensitive variable '" + var->name + "'",
          m.value.span);
        continue;
      }
      if (!seen.insert(var->name).second) {
        report(
          DiagCode::InvalidGroup,
          "group assigns more than one value to variable '" + var->name + "'", m.variable.span);
        continue;
      }
      out.members.push_back({var->name, m.value.text});
    }
    return out;
  }

  std::optional<ValueSelector> selector(const dsl::RawSelector & s)
  {
    using K = dsl::RawSelector::Kind;
    switch (s.kind) {
      case K::Number: return ValueSelector::absolute(s.number);
      case K::String: return ValueSelector::absolute(s.text);
      case K::Top:
      case K::Bottom:
        if (!(s.number > 0.0 && s.number < 1.0)) {
          report(
            DiagCode::InvalidFraction,
            "relative selector fraction " + format_number(s.number) + " is not strictly between 0 and 1",
            s.span);
          return std::nullopt;
        }
        return s.kind == K::Top ? ValueSelector::top(s.number) : ValueSelector::bottom(s.number);
    }
    return std::nullopt;
  }

  void check_column_name(const Ident & id)
  {
    if (id.text.rfind("__", 0) == 0) {
      report(
        DiagCode::UnresolvedReference,
        "column name '" + id.text + "' uses the reserved '__' prefix", id.span,
        "'__' columns are derived by fairspec");
    }
  }

  DatasetBinding dataset(const dsl::RawDataset & rd, const BiasSpec & b)
  {
    DatasetBinding d;
    d.file_path = rd.path.text;
    if (rd.prediction) {
      check_column_name(*rd.prediction);
      d.prediction_column = rd.prediction->text;
    }
    if (rd.ground_truth) {
      check_column_name(*rd.ground_truth);
      d.ground_truth_column = rd.ground_truth->text;
    }
    for (const auto & o : rd.other) {
      check_column_name(o);
      d.other_columns.push_back(o.text);
    }

    bool have_outcome = false;
    std::map<std::string, VariableBinding> by_var;
    for (const auto & m : rd.mappings) {
      check_column_name(m.column);
      if (m.outcome) {
        if (have_outcome) {
          report(DiagCode::DuplicateName, "positive outcome is mapped more than once", m.span);
          continue;
        }
        have_outcome = true;
        d.outcome.column = m.column.text;
        if (auto sel = selector(m.values.front().selector)) d.outcome.positive = *sel;
        const auto & label = d.prediction_column ? rd.prediction : rd.ground_truth;
        if (label && label->text != m.column.text) {
          report(
            DiagCode::OutcomeColumnMismatch,
            "positive outcome must be mapped on the " +
              std::string(d.prediction_column ? "prediction" : "ground_truth") + " column '" +
              label->text + "', not '" + m.column.text + "'",
            m.column.span);
        }
        continue;
      }
      const SensitiveVariable * var = b.find_variable(m.variable.text);
      if (!var) {
        report(
          DiagCode::UnresolvedReference,
          "mapping references undeclared sensitive variable '" + m.variable.text + "'",
          m.variable.span);
        continue;
      }
      if (by_var.count(var->name)) {
        report(
          DiagCode::DuplicateName, "sensitive variable '" + var->name + "' is mapped more than once",
          m.variable.span);
        continue;
      }
      VariableBinding vb;
      vb.variable = var->name;
      vb.column = m.column.text;
      std::map<std::string, ValueSelector> sel_by_value;
      for (const auto & v : m.values) {
        if (std::find(var->values.begin(), var->values.end(), v.value.text) == var->values.end()) {
          report(
            DiagCode::UnresolvedReference,
            "value '" + v.value.text + "' is not declared for sensitive variable '" + var->name + "'",
            v.value.span);
          continue;
        }
        if (sel_by_value.count(v.value.text)) {
          report(
            DiagCode::DuplicateName, "value '" + v.value.text + "' is mapped more than once",
            v.value.span);
          continue;
        }
        if (auto sel = selector(v.selector)) sel_by_value.emplace(v.value.text, *sel);
        else sel_by_value.emplace(v.value.text, ValueSelector{});
      }
      for (const auto & value : var->values) {
        auto it = sel_by_value.find(value);
        if (it == sel_by_value.end()) {
          report(
            DiagCode::MissingBinding,
            "value '" + value + "' of sensitive variable '" + var->name + "' has no selector",
            m.span);
          continue;
        }
        vb.values.push_back({value, it->second});
      }
      by_var.emplace(var->name, std::move(vb));
    }
    if (!have_outcome) {
      report(
        DiagCode::MissingBinding, "dataset does not map the positive outcome", rd.span,
        "add 'map outcome -> column <name> { positive = ... }'");
    }
    for (const auto & var : b.sensitive_variables) {
      auto it = by_var.find(var.name);
      if (it == by_var.end()) {
        report(
          DiagCode::MissingBinding,
          "sensitive variable '" + var.name + "' is not mapped to a dataset column", rd.span);
        continue;
      }
      d.variables.push_back(std::move(it->second));
    }
    return d;
  }

  static std::set<std::string> known_columns(const DatasetBinding & d, const BiasSpec & b)
  {
    std::set<std::string> cols = {
      std::string(k_outcome_column), std::string(k_privileged_column),
      std::string(k_unprivileged_column)};
    if (d.ground_truth_column) {
      cols.insert(std::string(k_truth_column));
      cols.insert(*d.ground_truth_column);
    }
    if (d.prediction_column) cols.insert(*d.prediction_column);
    if (!d.outcome.column.empty()) cols.insert(d.outcome.column);
    for (const auto & v : b.sensitive_variables) {
      for (const auto & val : v.values) cols.insert(indicator_column(v.name, val));
    }
    for (const auto & vb : d.variables) cols.insert(vb.column);
    cols.insert(d.other_columns.begin(), d.other_columns.end());
    return cols;
  }

  void check_predicate(const Predicate & p, const std::set<std::string> & cols)
  {
    if (p.kind == Predicate::Kind::Compare) {
      if (!cols.count(p.column)) {
        report(
          DiagCode::UnresolvedReference, "predicate references unknown column '" + p.column + "'",
          p.span, "declare it in the dataset block (prediction, ground_truth, map or other)");
      }
      return;
    }
    for (const auto & o : p.operands) check_predicate(o, cols);
  }

  void check_row(const RowExpr & e, const std::set<std::string> & cols)
  {
    if (e.kind == RowExpr::Kind::Column && !cols.count(e.column)) {
      report(
        DiagCode::UnresolvedReference, "expression references unknown column '" + e.column + "'",
        e.span, "declare it in the dataset block (prediction, ground_truth, map or other)");
    }
    for (const auto & o : e.operands) check_row(o, cols);
  }

  void check_function(const FunctionExpr & f, const std::set<std::string> & cols)
  {
    if (f.kind == FunctionExpr::Kind::Log && !(f.number > 0.0 && f.number != 1.0)) {
      report(
        DiagCode::InvalidParameter,
        "logarithm base must be positive and different from 1, got " + format_number(f.number),
        f.span);
    }
    if (f.predicate) check_predicate(*f.predicate, cols);
    if (f.row) check_row(*f.row, cols);
    if (f.given) check_predicate(*f.given, cols);
    for (const auto & o : f.operands) check_function(o, cols);
  }

  std::optional<BuiltinCall> builtin(
    const dsl::RawMetric & rm, const BiasSpec & b, const DatasetBinding & d)
  {
    const auto metric = builtin_from_name(rm.name.text);
    if (!metric) {
      report(
        DiagCode::UnknownMetric, "unknown built-in metric '" + rm.name.text + "'", rm.name.span,
        "define a custom metric with '= <expression>'");
      return std::nullopt;
    }
    BuiltinCall call{*metric, {}};
    const bool group_bias = b.kind == BiasKind::Group;
    if (is_group_metric(*metric) != group_bias) {
      report(
        DiagCode::KindMismatch,
        std::string(is_group_metric(*metric) ? "group" : "individual") + " metric '" +
          rm.name.text + "' cannot be used in an analysis of " +
          (group_bias ? "group" : "individual") + " bias \"" + b.name + "\"",
        rm.name.span);
    }
    if (*metric == BuiltinMetric::GeneralizedEntropyIndex) {
      if (rm.params.size() > 1) {
        report(
          DiagCode::InvalidParameter, "generalized_entropy_index takes a single alpha parameter",
          rm.params[1].span);
      }
      const double alpha = rm.params.empty() ? 2.0 : rm.params.front().value;
      if (alpha == 0.0 || alpha == 1.0) {
        report(
          DiagCode::InvalidParameter,
          "generalized_entropy_index alpha must differ from 0 and 1 (use theil_index for alpha = 1)",
          rm.params.front().span);
      }
      call.params.push_back(alpha);
    } else if (!rm.params.empty()) {
      report(
        DiagCode::InvalidParameter, "metric '" + rm.name.text + "' takes no parameters",
        rm.params.front().span);
    }
    if (needs_ground_truth(*metric)) {
      if (!d.prediction_column || !d.ground_truth_column) {
        report(
          DiagCode::MissingLabels,
          "metric '" + rm.name.text + "' needs both 'prediction' and 'ground_truth' columns",
          rm.name.span);
      }
    } else if (!d.prediction_column && !d.ground_truth_column) {
      report(
        DiagCode::MissingLabels,
        "metric '" + rm.name.text + "' needs a 'prediction' or 'ground_truth' column", rm.name.span);
    }
    return call;
  }

  AnalysisSpec analysis(const dsl::RawAnalysis & ra, const BiasSpec & b)
  {
    AnalysisSpec a;
    a.name = ra.name.text;
    a.span = ra.span;
    if (!analysis_names_.insert(a.name).second) {
      report(DiagCode::DuplicateName, "duplicate analysis name \"" + a.name + "\"", ra.name.span);
    }
    if (ra.scope) a.scope = ra.scope->text;
    a.dataset = dataset(ra.dataset, b);
    const auto cols = known_columns(a.dataset, b);

    std::set<std::string> metric_names;
    for (const auto & rm : ra.metrics) {
      MetricSpec m;
      m.name = rm.name.text;
      m.span = rm.span;
      if (!metric_names.insert(m.name).second) {
        report(
          DiagCode::DuplicateName, "duplicate metric name '" + m.name + "' in analysis \"" + a.name + "\"",
          rm.name.span);
      }
      if (rm.body) {
        if (!rm.params.empty()) {
          report(
            DiagCode::InvalidParameter, "custom metric '" + m.name + "' takes no parameters",
            rm.params.front().span);
        }
        check_function(*rm.body, cols);
        m.body = *rm.body;
      } else if (auto call = builtin(rm, b, a.dataset)) {
        m.body = std::move(*call);
      }

      const auto & rc = rm.require;
      using K = dsl::RawComparator::Kind;
      switch (rc.kind) {
        case K::Eq: m.comparator = Comparator::single(Comparator::Op::Eq, rc.value); break;
        case K::Le: m.comparator = Comparator::single(Comparator::Op::Le, rc.value); break;
        case K::Ge: m.comparator = Comparator::single(Comparator::Op::Ge, rc.value); break;
        case K::Lt: m.comparator = Comparator::single(Comparator::Op::Lt, rc.value); break;
        case K::Gt: m.comparator = Comparator::single(Comparator::Op::Gt, rc.value); break;
        case K::Range:
          if (rc.lower > rc.upper) {
            report(
              DiagCode::InvalidRange,
              "range lower bound " + format_number(rc.lower) + " exceeds upper bound " +
                format_number(rc.upper),
              rc.span);
          }
          m.comparator = Comparator::range(rc.lower, rc.upper);
          break;
      }
      if (rm.tolerance) {
        if (rm.tolerance->value < 0.0) {
          report(
            DiagCode::NegativeTolerance,
            "tolerance must be non-negative, got " + format_number(rm.tolerance->value),
            rm.tolerance->span);
        }
        m.tolerance = rm.tolerance->value;
      }
      a.metrics.push_back(std::move(m));
    }
    return a;
  }

  Diagnostics & diags_;
  std::set<std::string> analysis_names_;
};

}  // namespace

dsl::ParseResult<SpecModel> validate(const dsl::RawSpec & raw)
{
  dsl::ParseResult<SpecModel> result;
  Validator v(result.diagnostics);
  SpecModel model = v.run(raw);
  if (result.diagnostics.empty()) result.value = std::move(model);
  return result;
}

dsl::ParseResult<SpecModel> load_spec(std::string_view text, std::string file_name)
{
  auto parsed = dsl::parse_spec(text, std::move(file_name));
  if (!parsed.ok()) return {std::nullopt, std::move(parsed.diagnostics)};
  return validate(*parsed.value);
}

}  // namespace fairspec::model
