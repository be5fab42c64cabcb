#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fairspec/expr.hpp"
#include "fairspec/source.hpp"

// Unresolved syntax tree produced by the parser. Names are kept as written; the
// validator resolves them into the semantic model.
namespace fairspec::dsl
{

struct Ident
{
  std::string text;
  SourceSpan span;
};

struct RawString
{
  std::string text;
  SourceSpan span;
};

struct RawNumber
{
  double value = 0;
  SourceSpan span;
};

struct RawSensitiveVariable
{
  Ident name;
  std::vector<Ident> values;
  SourceSpan span;
};

struct RawGroupMember
{
  Ident variable;
  Ident value;
};

struct RawGroup
{
  bool privileged = false;
  std::vector<RawGroupMember> members;
  SourceSpan span;
};

struct RawSelector
{
  enum class Kind { Number, String, Top, Bottom };
  Kind kind = Kind::Number;
  double number = 0;  // literal for Number, fraction for Top/Bottom
  std::string text;   // literal for String
  SourceSpan span;
};

struct RawValueMapping
{
  Ident value;  // declared value name, or `positive` for the outcome mapping
  RawSelector selector;
};

/// `map <variable> -> column <col> { ... }` or `map outcome -> column <col> { positive = ... }`.
struct RawMapping
{
  bool outcome = false;
  Ident variable;  // empty when outcome
  Ident column;
  std::vector<RawValueMapping> values;
  SourceSpan span;
};

struct RawDataset
{
  RawString path;
  std::optional<Ident> prediction;
  std::optional<Ident> ground_truth;
  std::vector<Ident> other;  // extra columns metrics may reference
  std::vector<RawMapping> mappings;
  SourceSpan span;
};

struct RawComparator
{
  enum class Kind { Eq, Le, Ge, Lt, Gt, Range };
  Kind kind = Kind::Eq;
  double value = 0;
  double lower = 0;
  double upper = 0;
  SourceSpan span;
};

struct RawMetric
{
  Ident name;
  std::vector<RawNumber> params;       // built-in parameters, e.g. GEI alpha
  std::optional<FunctionExpr> body;    // absent means a built-in metric
  RawComparator require;
  std::optional<RawNumber> tolerance;
  SourceSpan span;
};

struct RawAnalysis
{
  RawString name;
  std::optional<RawString> scope;
  RawDataset dataset;
  std::vector<RawMetric> metrics;
  SourceSpan span;
};

struct RawBias
{
  RawString name;
  Ident kind;  // `group` or `individual`
  RawString domain;
  std::vector<Ident> sources;
  std::vector<RawSensitiveVariable> variables;
  Ident positive_outcome;
  std::vector<RawGroup> groups;  // exactly two, in source order
  std::vector<RawAnalysis> analyses;
  SourceSpan span;
};

struct RawSpec
{
  std::vector<RawBias> biases;
};

/// Span-insensitive structural equality.
bool same_structure(const RawSpec & a, const RawSpec & b);

}  // namespace fairspec::dsl
