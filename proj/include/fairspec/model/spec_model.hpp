#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fairspec/expr.hpp"
#include "fairspec/source.hpp"

namespace fairspec::model
{

enum class BiasKind { Group, Individual };

struct BiasSource
{
  enum class Kind { HumanDiscrimination, WrongDataSampling, HistoricalBias, Other };
  Kind kind = Kind::Other;
  std::string text;  // non-empty for Other

  /// `human_discrimination`, `wrong_data_sampling`, `historical_bias`; anything else is Other.
  static BiasSource from_identifier(std::string_view id);
};

struct SensitiveVariable
{
  std::string name;
  std::vector<std::string> values;
};

struct GroupMember
{
  std::string variable;
  std::string value;
};

/// Conjunction of `variable = value` pairs, at most one pair per variable.
struct SensitiveGroup
{
  std::vector<GroupMember> members;
};

struct ValueSelector
{
  enum class Kind { Absolute, RelativeTop, RelativeBottom };
  Kind kind = Kind::Absolute;
  Literal literal = 0.0;  // Absolute
  double fraction = 0.0;  // RelativeTop / RelativeBottom, in (0, 1)

  static ValueSelector absolute(Literal lit) { return {Kind::Absolute, std::move(lit), 0.0}; }
  static ValueSelector top(double p) { return {Kind::RelativeTop, 0.0, p}; }
  static ValueSelector bottom(double p) { return {Kind::RelativeBottom, 0.0, p}; }
};

struct ValueBinding
{
  std::string value;
  ValueSelector selector;
};

struct VariableBinding
{
  std::string variable;
  std::string column;
  std::vector<ValueBinding> values;  // one per declared value, in declaration order
};

struct OutcomeBinding
{
  std::string column;
  ValueSelector positive;
};

struct DatasetBinding
{
  std::string file_path;
  std::optional<std::string> prediction_column;
  std::optional<std::string> ground_truth_column;
  OutcomeBinding outcome;
  std::vector<VariableBinding> variables;  // one per sensitive variable, in declaration order
  std::vector<std::string> other_columns;

  [[nodiscard]] const VariableBinding * find(std::string_view variable) const;
};

enum class BuiltinMetric {
  StatisticalParityDifference,
  DisparateImpact,
  EqualOpportunityDifference,
  AverageOddsDifference,
  GeneralizedEntropyIndex,
  TheilIndex,
};

std::string_view to_string(BuiltinMetric m) noexcept;
std::optional<BuiltinMetric> builtin_from_name(std::string_view name) noexcept;
bool is_group_metric(BuiltinMetric m) noexcept;
/// True for metrics that compare predictions with ground truth.
bool needs_ground_truth(BuiltinMetric m) noexcept;

struct BuiltinCall
{
  BuiltinMetric metric;
  std::vector<double> params;  // GEI: {alpha}
};

struct Comparator
{
  enum class Op { Eq, Le, Ge, Lt, Gt, Range };
  Op op = Op::Eq;
  double value = 0;
  double lower = 0;
  double upper = 0;

  static Comparator single(Op op, double value) { return {op, value, 0, 0}; }
  static Comparator range(double lo, double hi) { return {Op::Range, 0, lo, hi}; }
};

/// `==`, `<=`, `>=`, `<`, `>` or `in`.
std::string_view to_string(Comparator::Op op) noexcept;
/// Human-readable, e.g. `== 0` or `in [0, 1]`.
std::string describe(const Comparator & c);

struct MetricSpec
{
  std::string name;
  std::variant<BuiltinCall, FunctionExpr> body;
  Comparator comparator;
  double tolerance = 0;
  SourceSpan span;

  [[nodiscard]] bool is_builtin() const noexcept { return std::holds_alternative<BuiltinCall>(body); }
};

struct AnalysisSpec
{
  std::string name;
  std::optional<std::string> scope;
  DatasetBinding dataset;
  std::vector<MetricSpec> metrics;
  SourceSpan span;
};

struct BiasSpec
{
  std::string name;
  BiasKind kind = BiasKind::Group;
  std::string domain;
  std::vector<BiasSource> sources;
  std::vector<SensitiveVariable> sensitive_variables;
  std::string positive_outcome;
  SensitiveGroup privileged;
  SensitiveGroup unprivileged;
  std::vector<AnalysisSpec> analyses;
  SourceSpan span;

  [[nodiscard]] const SensitiveVariable * find_variable(std::string_view name) const;
};

/// Resolved, validated spec. Immutable once built by `validate`.
struct SpecModel
{
  std::vector<BiasSpec> biases;

  struct AnalysisRef
  {
    const BiasSpec * bias;
    const AnalysisSpec * analysis;
  };

  /// Analysis names are unique across the whole spec.
  [[nodiscard]] std::optional<AnalysisRef> find_analysis(std::string_view name) const;
  [[nodiscard]] std::vector<AnalysisRef> analyses() const;
};

/// Name of the derived indicator column for one sensitive value.
std::string indicator_column(std::string_view variable, std::string_view value);

inline constexpr std::string_view k_outcome_column = "__outcome";
inline constexpr std::string_view k_truth_column = "__truth";
inline constexpr std::string_view k_privileged_column = "__priv";
inline constexpr std::string_view k_unprivileged_column = "__unpriv";

}  // namespace fairspec::model
