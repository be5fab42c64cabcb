#include <doctest.h>

#include <algorithm>

#include "fairspec/model/validate.hpp"
#include "helpers.hpp"

using namespace fairspec;
using namespace fairspec::model;

namespace
{

const std::string k_base = R"(bias "b" {
  kind: group
  domain: "D"
  sources: [historical_bias, vendor_lock_in]
  sensitive variable sex { values: [male, female] }
  sensitive variable age { values: [young, old] }
  positive outcome granted
  privileged group { sex = male age = old }
  unprivileged group { sex = female age = young }
  analysis "a" {
    dataset {
      path: "d.csv"
      prediction: yhat
      ground_truth: y
      other: [score]
      map sex -> column sex { male = 1 female = 0 }
      map age -> column age { young = bottom 0.3 old = top 0.7 }
      map outcome -> column yhat { positive = 1 }
    }
    metric statistical_parity_difference { require == 0 tolerance 0.2 }
    metric ratio = probability(yhat == 1 | __unpriv == 1) / probability(yhat == 1 | __priv == 1) { require in [0.8, 1.25] }
    metric mean_score = expected(score * 2 | __sv_age_old == 1) { require >= 1 }
  }
}
)";

std::string edit(std::string s, const std::string & from, const std::string & to)
{
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  s.replace(pos, from.size(), to);
  return s;
}

std::vector<DiagCode> codes(const std::string & text)
{
  const auto r = load_spec(text, "t");
  std::vector<DiagCode> out;
  for (const auto & d : r.diagnostics) out.push_back(d.code);
  return out;
}

bool has(const std::vector<DiagCode> & v, DiagCode c) { return std::find(v.begin(), v.end(), c) != v.end(); }

}  // namespace

TEST_CASE("base spec resolves into the model")
{
  const auto r = load_spec(k_base, "t");
  REQUIRE(r.ok());
  const auto & m = *r.value;
  REQUIRE(m.biases.size() == 1);
  const auto & b = m.biases[0];
  CHECK(b.kind == BiasKind::Group);
  REQUIRE(b.sources.size() == 2);
  CHECK(b.sources[0].kind == BiasSource::Kind::HistoricalBias);
  CHECK(b.sources[1].kind == BiasSource::Kind::Other);
  CHECK(b.sources[1].text == "vendor_lock_in");
  CHECK(b.privileged.members.size() == 2);
  CHECK(b.unprivileged.members[0].value == "female");
  const auto & ds = b.analyses[0].dataset;
  CHECK(ds.outcome.column == "yhat");
  REQUIRE(ds.find("age"));
  CHECK(ds.find("age")->values[0].selector.kind == ValueSelector::Kind::RelativeBottom);
  CHECK(ds.find("age")->values[1].selector.fraction == 0.7);
  CHECK(ds.other_columns == std::vector<std::string>{"score"});
  REQUIRE(b.analyses[0].metrics.size() == 3);
  CHECK(b.analyses[0].metrics[0].is_builtin());
  CHECK(b.analyses[0].metrics[1].comparator.op == Comparator::Op::Range);
  CHECK(m.find_analysis("a"));
  CHECK_FALSE(m.find_analysis("zzz"));
}

TEST_CASE("all violations are collected")
{
  std::string s = edit(k_base, "tolerance 0.2", "tolerance -0.2");
  s = edit(s, "in [0.8, 1.25]", "in [2, 1]");
  s = edit(s, "top 0.7", "top 1.7");
  const auto c = codes(s);
  CHECK(c.size() == 3);
  CHECK(has(c, DiagCode::NegativeTolerance));
  CHECK(has(c, DiagCode::InvalidRange));
  CHECK(has(c, DiagCode::InvalidFraction));
}

TEST_CASE("individual diagnostics")
{
  CHECK(has(codes(edit(k_base, "age = old }", "age = ancient }")), DiagCode::UnresolvedReference));
  CHECK(has(codes(edit(k_base, "sex = male age", "gender = male age")), DiagCode::UnresolvedReference));
  CHECK(has(codes(edit(k_base, "metric statistical_parity_difference", "metric parity_magic")), DiagCode::UnknownMetric));
  CHECK(has(codes(edit(k_base, "metric statistical_parity_difference", "metric theil_index")), DiagCode::KindMismatch));
  CHECK(has(codes(edit(k_base, "kind: group", "kind: individual")), DiagCode::KindMismatch));
  CHECK(has(
    codes(edit(edit(k_base, "      ground_truth: y\n", ""), "statistical_parity_difference", "equal_opportunity_difference")),
    DiagCode::MissingLabels));
  CHECK(has(codes(edit(k_base, "      map age -> column age { young = bottom 0.3 old = top 0.7 }\n", "")), DiagCode::MissingBinding));
  CHECK(has(codes(edit(k_base, "young = bottom 0.3 ", "")), DiagCode::MissingBinding));
  CHECK(has(codes(edit(k_base, "values: [male, female]", "values: [male, male]")), DiagCode::DuplicateName));
  CHECK(has(codes(edit(k_base, "metric mean_score", "metric ratio")), DiagCode::DuplicateName));
  CHECK(has(codes(edit(k_base, "score * 2", "salary * 2")), DiagCode::UnresolvedReference));
  CHECK(has(codes(edit(k_base, "map outcome -> column yhat", "map outcome -> column sex")), DiagCode::OutcomeColumnMismatch));
  CHECK(has(codes(edit(k_base, "      map outcome -> column yhat { positive = 1 }\n", "")), DiagCode::MissingBinding));
  CHECK(has(codes(edit(k_base, "unprivileged group { sex = female age = young }", "privileged group { sex = female }")), DiagCode::InvalidGroup));
  CHECK(has(codes(edit(k_base, "sex = female age = young", "sex = male age = old")), DiagCode::InvalidGroup));
  CHECK(has(codes(edit(k_base, "sex = female age = young", "sex = female sex = male")), DiagCode::InvalidGroup));
  CHECK(has(codes(edit(k_base, "other: [score]", "other: [__score]")), DiagCode::UnresolvedReference));
  CHECK(has(codes(edit(k_base, "score * 2 |", "log(2, score) |")), DiagCode::ParseError));
}

TEST_CASE("builtin parameters")
{
  std::string ind = edit(k_base, "kind: group", "kind: individual");
  ind = edit(ind, "    metric statistical_parity_difference { require == 0 tolerance 0.2 }\n", "    metric generalized_entropy_index(3) { require <= 0.1 }\n");
  ind = edit(ind, "metric ratio", "metric theil_index { require <= 1 }\n    metric ratio");
  const auto r = load_spec(ind, "t");
  REQUIRE(r.ok());
  const auto & call = std::get<BuiltinCall>(r.value->biases[0].analyses[0].metrics[0].body);
  CHECK(call.metric == BuiltinMetric::GeneralizedEntropyIndex);
  CHECK(call.params == std::vector<double>{3});

  CHECK(has(codes(edit(ind, "generalized_entropy_index(3)", "generalized_entropy_index(1)")), DiagCode::InvalidParameter));
  CHECK(has(codes(edit(ind, "theil_index {", "theil_index(2) {")), DiagCode::InvalidParameter));
}

TEST_CASE("log base must be positive and not one")
{
  CHECK(has(codes(edit(k_base, "expected(score * 2 | __sv_age_old == 1)", "log(1, expected(score))")), DiagCode::InvalidParameter));
  CHECK(codes(edit(k_base, "expected(score * 2 | __sv_age_old == 1)", "log(10, expected(score))")).empty());
}

TEST_CASE("duplicate analysis names across biases")
{
  const std::string two = k_base + edit(k_base, "bias \"b\"", "bias \"c\"");
  CHECK(has(codes(two), DiagCode::DuplicateName));
}
