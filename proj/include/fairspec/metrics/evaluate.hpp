#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fairspec/data/bind.hpp"
#include "fairspec/error.hpp"
#include "fairspec/metrics/engine.hpp"
#include "fairspec/model/spec_model.hpp"

namespace fairspec::metrics
{

struct EvaluationReport
{
  std::string analysis;
  std::string metric;
  std::optional<double> value;  // absent when the metric failed
  model::Comparator comparator;
  double tolerance = 0;
  std::optional<Verdict> verdict;
  std::size_t rows_used = 0;
  std::size_t rows_skipped = 0;
  std::vector<std::string> warnings;
  std::optional<ErrorCode> error;
};

/// Value of one metric on an already bound table.
double evaluate_metric(const model::MetricSpec & metric, const data::BoundTable & bt);

/// One report per metric, in declaration order. A failing metric yields a report with an
/// error and a warning instead of aborting its siblings.
std::vector<EvaluationReport> evaluate_metrics(
  const model::AnalysisSpec & analysis, const data::BoundTable & bt);

/// Loads the analysis dataset (relative paths resolve against `base_dir`), binds it once and
/// evaluates every metric. Throws UnknownAnalysis, load errors and bind errors.
std::vector<EvaluationReport> evaluate_analysis(
  const model::SpecModel & spec, std::string_view analysis, const std::filesystem::path & base_dir);

}  // namespace fairspec::metrics
