#include "fairspec/model/spec_model.hpp"

#include <algorithm>
#include <array>

namespace fairspec::model
{

namespace
{

struct BuiltinInfo
{
  BuiltinMetric metric;
  std::string_view name;
  bool group;
  bool ground_truth;
};

constexpr std::array<BuiltinInfo, 6> k_builtins = {{
  {BuiltinMetric::StatisticalParityDifference, "statistical_parity_difference", true, false},
  {BuiltinMetric::DisparateImpact, "disparate_impact", true, false},
  {BuiltinMetric::EqualOpportunityDifference, "equal_opportunity_difference", true, true},
  {BuiltinMetric::AverageOddsDifference, "average_odds_difference", true, true},
  {BuiltinMetric::GeneralizedEntropyIndex, "generalized_entropy_index", false, true},
  {BuiltinMetric::TheilIndex, "theil_index", false, true},
}};

const BuiltinInfo & info(BuiltinMetric m) noexcept
{
  return *std::find_if(
    k_builtins.begin(), k_builtins.end(), [&](const BuiltinInfo & i) { return i.metric == m; });
}

}  // namespace

BiasSource BiasSource::from_identifier(std::string_view id)
{
  if (id == "human_discrimination") return {Kind::HumanDiscrimination, {}};
  if (id == "wrong_data_sampling") return {Kind::WrongDataSampling, {}};
  if (id == "historical_bias") return {Kind::HistoricalBias, {}};
  return {Kind::Other, std::string(id)};
}

const VariableBinding * DatasetBinding::find(std::string_view variable) const
{
  auto it = std::find_if(variables.begin(), variables.end(), [&](const VariableBinding & b) {
    return b.variable == variable;
  });
  return it == variables.end() ? nullptr : &*it;
}

std::string_view to_string(BuiltinMetric m) noexcept { return info(m).name; }

std::optional<BuiltinMetric> builtin_from_name(std::string_view name) noexcept
{
  for (const auto & i : k_builtins) {
    if (i.name == name) return i.metric;
  }
  return std::nullopt;
}

bool is_group_metric(BuiltinMetric m) noexcept { return info(m).group; }

bool needs_ground_truth(BuiltinMetric m) noexcept { return info(m).ground_truth; }

std::string_view to_string(Comparator::Op op) noexcept
{
  switch (op) {
    case Comparator::Op::Eq: return "==";
    case Comparator::Op::Le: return "<=";
    case Comparator::Op::Ge: return ">=";
    case Comparator::Op::Lt: return "<";
    case Comparator::Op::Gt: return ">";
    case Comparator::Op::Range: return "in";
  }
  return "?";
}

std::string describe(const Comparator & c)
{
  if (c.op == Comparator::Op::Range) {
    return "in [" + format_number(c.lower) + ", " + format_number(c.upper) + "]";
  }
  return std::string(to_string(c.op)) + " " + format_number(c.value);
}

const SensitiveVariable * BiasSpec::find_variable(std::string_view n) const
{
  auto it = std::find_if(
    sensitive_variables.begin(), sensitive_variables.end(),
    [&](const SensitiveVariable & v) { return v.name == n; });
  return it == sensitive_variables.end() ? nullptr : &*it;
}

std::optional<SpecModel::AnalysisRef> SpecModel::find_analysis(std::string_view n) const
{
  for (const auto & b : biases) {
    for (const auto & a : b.analyses) {
      if (a.name == n) return AnalysisRef{&b, &a};
    }
  }
  return std::nullopt;
}

std::vector<SpecModel::AnalysisRef> SpecModel::analyses() const
{
  std::vector<AnalysisRef> out;
  for (const auto & b : biases) {
    for (const auto & a : b.analyses) out.push_back({&b, &a});
  }
  return out;
}

std::string indicator_column(std::string_view variable, std::string_view value)
{
  std::string out = "__sv_";
  out += variable;
  out += '_';
  out += value;
  return out;
}

}  // namespace fairspec::model
