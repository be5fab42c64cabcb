#include <doctest.h>

#include <cmath>

#include "fairspec/data/stats.hpp"
#include "fairspec/dsl/parser.hpp"
#include "fairspec/error.hpp"
#include "fairspec/metrics/evaluate.hpp"
#include "helpers.hpp"

using namespace fairspec;
using namespace fairspec::metrics;
using model::BuiltinMetric;
using model::Comparator;

namespace
{

ErrorCode code_of(auto && fn)
{
  try {
    fn();
  } catch (const Error & e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::IoError;
}

// toy10: privileged sex=1 rows (y, yhat) = (1,1),(1,1),(0,1),(0,0); unprivileged sex=0 rows
// (1,1),(1,0),(1,1),(1,0),(0,1),(0,0).
std::vector<oracle::Row> toy10()
{
  const int priv[4][2] = {{1, 1}, {1, 1}, {0, 1}, {0, 0}};
  const int unpriv[6][2] = {{1, 1}, {1, 0}, {1, 1}, {1, 0}, {0, 1}, {0, 0}};
  std::vector<oracle::Row> rows;
  for (const auto & r : priv) rows.push_back({r[0], r[1], true, false});
  for (const auto & r : unpriv) rows.push_back({r[0], r[1], false, true});
  return rows;
}

FunctionExpr fn(const std::string & s)
{
  auto r = dsl::parse_function(s);
  REQUIRE(r.ok());
  return *r.value;
}

}  // namespace

TEST_CASE("toy10 built-ins agree with the counting oracle")
{
  const auto rows = toy10();
  const auto bt = testing::bound_from_rows(rows);
  CHECK(std::abs(eval_builtin_group(BuiltinMetric::StatisticalParityDifference, bt) - *oracle::spd(rows)) <= 1e-12);
  CHECK(std::abs(eval_builtin_group(BuiltinMetric::DisparateImpact, bt) - *oracle::di(rows)) <= 1e-12);
  CHECK(std::abs(eval_builtin_group(BuiltinMetric::EqualOpportunityDifference, bt) - *oracle::eod(rows)) <= 1e-12);
  CHECK(std::abs(eval_builtin_group(BuiltinMetric::AverageOddsDifference, bt) - *oracle::aod(rows)) <= 1e-12);
  const std::vector<double> two{2};
  CHECK(std::abs(eval_builtin_individual(BuiltinMetric::GeneralizedEntropyIndex, two, bt) - *oracle::gei(rows, 2)) <= 1e-12);
  CHECK(std::abs(eval_builtin_individual(BuiltinMetric::TheilIndex, {}, bt) - *oracle::theil(rows)) <= 1e-12);
  for (double alpha : {0.5, 3.0}) {
    const std::vector<double> a{alpha};
    CHECK(std::abs(eval_builtin_individual(BuiltinMetric::GeneralizedEntropyIndex, a, bt) - *oracle::gei(rows, alpha)) <= 1e-12);
  }
}

TEST_CASE("toy10 end to end through the spec")
{
  const auto model = testing::load_model("tests/fixtures/toy10.fspec");
  const auto dir = testing::source_path("tests/fixtures");
  const auto g = evaluate_analysis(model, "toy10_group", dir);
  REQUIRE(g.size() == 4);
  const auto rows = toy10();
  CHECK(std::abs(*g[0].value - *oracle::spd(rows)) <= 1e-12);
  CHECK(std::abs(*g[1].value - *oracle::di(rows)) <= 1e-12);
  CHECK(std::abs(*g[2].value - *oracle::eod(rows)) <= 1e-12);
  CHECK(std::abs(*g[3].value - *oracle::aod(rows)) <= 1e-12);
  CHECK(g[1].verdict == Verdict::Biased);
  CHECK(g[0].rows_used == 10);
  const auto i = evaluate_analysis(model, "toy10_individual", dir);
  REQUIRE(i.size() == 2);
  CHECK(std::abs(*i[0].value - *oracle::gei(rows, 2)) <= 1e-12);
  CHECK(code_of([&] { evaluate_analysis(model, "nope", dir); }) == ErrorCode::UnknownAnalysis);
}

TEST_CASE("libs10 coverage")
{
  const auto model = testing::load_model("usecases/tpl/tpl.fspec");
  const auto r = evaluate_analysis(model, "tpl_coverage", testing::source_path("usecases/tpl"));
  REQUIRE(r.size() == 1);
  CHECK(*r[0].value == 0.4);
  CHECK(*r[0].verdict == Verdict::Biased);
  CHECK(format_value(*r[0].value) == "0.4");
}

TEST_CASE("metric errors")
{
  std::vector<oracle::Row> rows = toy10();
  for (auto & r : rows) {
    if (r.priv) r.yhat = 0;
  }
  auto bt = testing::bound_from_rows(rows);
  CHECK(code_of([&] { eval_builtin_group(BuiltinMetric::DisparateImpact, bt); }) == ErrorCode::UndefinedRatio);

  std::vector<oracle::Row> zero(4, oracle::Row{1, 0, true, false});
  zero[1].unpriv = true, zero[1].priv = false;
  auto zb = testing::bound_from_rows(zero);
  CHECK(code_of([&] { eval_builtin_individual(BuiltinMetric::TheilIndex, {}, zb); }) == ErrorCode::DegenerateBenefit);

  const std::vector<double> neg{-1};
  const auto tb = testing::bound_from_rows(toy10());
  CHECK(code_of([&] { eval_builtin_individual(BuiltinMetric::GeneralizedEntropyIndex, neg, tb); }) == ErrorCode::DegenerateBenefit);

  data::Table no_truth({"__outcome", "__priv", "__unpriv"});
  no_truth.add_row({data::Cell::num(1), data::Cell::num(1), data::Cell::num(0)});
  const data::BoundTable nt{no_truth, 0};
  CHECK(code_of([&] { eval_builtin_group(BuiltinMetric::EqualOpportunityDifference, nt); }) == ErrorCode::MissingLabels);

  try {
    eval_function(fn("group_size(__priv == 1) / group_size(__priv == 7)"), tb);
    FAIL("expected DivisionByZero");
  } catch (const Error & e) {
    CHECK(e.code() == ErrorCode::DivisionByZero);
    CHECK(std::string(e.what()).find("group_size(__priv == 7)") != std::string::npos);
    CHECK(std::string(e.what()).find(":1:") != std::string::npos);
  }
  CHECK(code_of([&] { eval_function(fn("log(2, group_size(__priv == 7))"), tb); }) == ErrorCode::DomainError);
  CHECK(code_of([&] { eval_function(fn("probability(__outcome == 1 | __priv == 7)"), tb); }) == ErrorCode::EmptyCondition);
  CHECK(eval_function(fn("log(2, group_size(__priv == 1) * 2)"), tb) == doctest::Approx(3).epsilon(1e-12));
}

TEST_CASE("verdict semantics")
{
  CHECK(verdict(0.3, Comparator::single(Comparator::Op::Eq, 0), 0.2) == Verdict::Biased);
  CHECK(verdict(0.2, Comparator::single(Comparator::Op::Eq, 0), 0.2) == Verdict::Fair);
  CHECK(verdict(-0.2, Comparator::single(Comparator::Op::Eq, 0), 0.2) == Verdict::Fair);
  CHECK(verdict(1.1, Comparator::single(Comparator::Op::Le, 1), 0.1) == Verdict::Fair);
  CHECK(verdict(1.2, Comparator::single(Comparator::Op::Le, 1), 0.1) == Verdict::Biased);
  CHECK(verdict(0.75, Comparator::single(Comparator::Op::Ge, 0.8), 0.1) == Verdict::Fair);
  CHECK(verdict(0.6, Comparator::single(Comparator::Op::Ge, 0.8), 0.1) == Verdict::Biased);
  CHECK(verdict(1.0, Comparator::single(Comparator::Op::Lt, 1), 0) == Verdict::Biased);
  CHECK(verdict(1.0, Comparator::single(Comparator::Op::Lt, 1), 0.01) == Verdict::Fair);
  CHECK(verdict(0.0, Comparator::single(Comparator::Op::Gt, 0), 0) == Verdict::Biased);
  CHECK(verdict(1.3, Comparator::range(0.8, 1.25), 0.05) == Verdict::Fair);
  CHECK(verdict(0.7, Comparator::range(0.8, 1.25), 0.05) == Verdict::Biased);
  CHECK(code_of([] { verdict(NAN, Comparator::single(Comparator::Op::Eq, 0), 0); }) == ErrorCode::NonFiniteValue);
  CHECK(code_of([] { verdict(INFINITY, Comparator::single(Comparator::Op::Eq, 0), 0); }) == ErrorCode::NonFiniteValue);
}

TEST_CASE("value formatting")
{
  CHECK(format_value(0.30000000000000004) == "0.3");
  CHECK(format_value(-0.050000000000000044) == "-0.05");
  CHECK(format_value(2.0 / 3.0) == "0.666666666667");
  CHECK(format_value(-0.0) == "0");
  CHECK(format_value(1e-20) == "1e-20");
}

TEST_CASE("a failing metric does not abort its siblings")
{
  const std::string spec = R"(bias "b" {
  kind: group
  domain: "D"
  sensitive variable sex { values: [male, female] }
  positive outcome granted
  privileged group { sex = male }
  unprivileged group { sex = female }
  analysis "a" {
    dataset {
      path: "toy10.csv"
      prediction: yhat
      map sex -> column sex { male = 1 female = 0 }
      map outcome -> column yhat { positive = 1 }
    }
    metric broken = probability(yhat == 1 | sex == 5) { require == 0 }
    metric statistical_parity_difference { require == 0 tolerance 0.3 }
  }
}
)";
  const auto m = model::load_spec(spec, "t");
  REQUIRE(m.ok());
  const auto r = evaluate_analysis(*m.value, "a", testing::source_path("tests/fixtures"));
  REQUIRE(r.size() == 2);
  CHECK_FALSE(r[0].value);
  CHECK_FALSE(r[0].verdict);
  CHECK(r[0].error == ErrorCode::EmptyCondition);
  CHECK_FALSE(r[0].warnings.empty());
  CHECK(*r[1].value == -0.25);
  CHECK(r[1].verdict == Verdict::Fair);
}
