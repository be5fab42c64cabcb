#include "fairspec/metrics/evaluate.hpp"

#include "fairspec/data/table.hpp"

namespace fairspec::metrics
{

double evaluate_metric(const model::MetricSpec & metric, const data::BoundTable & bt)
{
  if (const auto * call = std::get_if<model::BuiltinCall>(&metric.body)) {
    if (model::is_group_metric(call->metric)) return eval_builtin_group(call->metric, bt);
    return eval_builtin_individual(call->metric, call->params, bt);
  }
  return eval_function(std::get<FunctionExpr>(metric.body), bt);
}

std::vector<EvaluationReport> evaluate_metrics(
  const model::AnalysisSpec & analysis, const data::BoundTable & bt)
{
  std::vector<EvaluationReport> out;
  for (const auto & m : analysis.metrics) {
    EvaluationReport r;
    r.analysis = analysis.name;
    r.metric = m.name;
    r.comparator = m.comparator;
    r.tolerance = m.tolerance;
    r.rows_used = bt.rows_used();
    r.rows_skipped = bt.rows_skipped;
    if (bt.rows_skipped > 0) {
      r.warnings.push_back(std::to_string(bt.rows_skipped) + " row(s) skipped for missing values");
    }
    try {
      const double v = evaluate_metric(m, bt);
      r.verdict = verdict(v, m.comparator, m.tolerance);
      r.value = v;
    } catch (const Error & e) {
      r.error = e.code();
      r.warnings.push_back(e.what());
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<EvaluationReport> evaluate_analysis(
  const model::SpecModel & spec, std::string_view analysis, const std::filesystem::path & base_dir)
{
  const auto ref = spec.find_analysis(analysis);
  if (!ref) throw Error(ErrorCode::UnknownAnalysis, "no analysis named '" + std::string(analysis) + "'");
  std::filesystem::path path = ref->analysis->dataset.file_path;
  if (path.is_relative()) path = base_dir / path;
  const data::Table table = data::load_table(path);
  const data::BoundTable bt = data::bind(table, *ref->bias, ref->analysis->dataset);
  return evaluate_metrics(*ref->analysis, bt);
}

}  // namespace fairspec::metrics
