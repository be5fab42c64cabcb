#include <doctest.h>

#include <algorithm>

#include "fairspec/dsl/lexer.hpp"
#include "fairspec/dsl/parser.hpp"
#include "helpers.hpp"

using namespace fairspec;
using namespace fairspec::dsl;

namespace
{

const char * k_minimal = R"(bias "b" {
  kind: group
  domain: "D"
  sensitive variable sex { values: [male] }
  positive outcome granted
  privileged group { sex = male }
  unprivileged group { sex = male }
  analysis "a" {
    dataset {
      path: "d.csv"
      map sex -> column sex { male = 1 }
      map outcome -> column yhat { positive = 1 }
    }
    metric statistical_parity_difference { require == 0 }
  }
}
)";

std::string concat(const LexResult & r)
{
  std::string s;
  for (const auto & t : r.tokens) s += t.lexeme;
  return s;
}

}  // namespace

TEST_CASE("lexer: token stream is lossless")
{
  for (const std::string & text : {std::string(k_minimal), std::string("a # c\n\"x\\\"y\" 1.5 -> == $ \"open")}) {
    const auto r = lex(text, nullptr, true);
    CHECK(concat(r) == text);
    CHECK(r.tokens.back().kind == TokenKind::Eof);
  }
}

TEST_CASE("lexer: kinds and decoded values")
{
  const auto r = lex(R"(bias foo "a\"b\\c" 12.25 -> <= { )", nullptr);
  REQUIRE(r.diagnostics.empty());
  REQUIRE(r.tokens.size() == 8);
  CHECK(r.tokens[0].kind == TokenKind::Keyword);
  CHECK(r.tokens[1].kind == TokenKind::Identifier);
  CHECK(r.tokens[2].kind == TokenKind::String);
  CHECK(r.tokens[2].text == "a\"b\\c");
  CHECK(r.tokens[3].kind == TokenKind::Number);
  CHECK(r.tokens[3].number == 12.25);
  CHECK(r.tokens[4].lexeme == "->");
  CHECK(r.tokens[5].lexeme == "<=");
  CHECK(r.tokens[1].span.line == 1);
  CHECK(r.tokens[1].span.column == 6);
}

TEST_CASE("lexer: errors carry positions")
{
  const auto r = lex("kind\n  \"abc\nx");
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].code == DiagCode::LexError);
  CHECK(r.diagnostics[0].span.line == 2);
  CHECK(r.diagnostics[0].span.column == 3);

  const auto r2 = lex("a @ b");
  REQUIRE(r2.diagnostics.size() == 1);
  CHECK(r2.diagnostics[0].span.column == 3);
}

TEST_CASE("predicate precedence")
{
  auto p = parse_predicate("frequency == 0 and ranking == 1");
  REQUIRE(p.ok());
  CHECK(same_structure(
    *p.value, Predicate::conj(
                Predicate::compare("frequency", CmpOp::Eq, 0.0), Predicate::compare("ranking", CmpOp::Eq, 1.0))));

  p = parse_predicate("a == 1 or b == 1 and c == 1");
  REQUIRE(p.ok());
  CHECK(same_structure(
    *p.value, Predicate::disj(
                Predicate::compare("a", CmpOp::Eq, 1.0),
                Predicate::conj(Predicate::compare("b", CmpOp::Eq, 1.0), Predicate::compare("c", CmpOp::Eq, 1.0)))));

  p = parse_predicate("not (x > 3)");
  REQUIRE(p.ok());
  CHECK(same_structure(*p.value, Predicate::negate(Predicate::compare("x", CmpOp::Gt, 3.0))));

  p = parse_predicate("name != \"x y\" and score >= -2.5");
  REQUIRE(p.ok());
  CHECK(same_structure(
    *p.value, Predicate::conj(
                Predicate::compare("name", CmpOp::Ne, std::string("x y")),
                Predicate::compare("score", CmpOp::Ge, -2.5))));
}

TEST_CASE("function and row expressions")
{
  auto f = parse_function("group_size(a == 1) / group_size(b == 1) - 2 * log(2, probability(c == 1 | d == 0))");
  REQUIRE(f.ok());
  CHECK(f.value->kind == FunctionExpr::Kind::Binary);
  CHECK(f.value->op == ArithOp::Sub);
  CHECK(to_source(*f.value) == "group_size(a == 1) / group_size(b == 1) - 2 * log(2, probability(c == 1 | d == 0))");

  auto r = parse_row_expr("2 * yhat - (y - 1)");
  REQUIRE(r.ok());
  CHECK(to_source(*r.value) == "2 * yhat - (y - 1)");

  auto e = parse_function("expected(score | g == 1) + sum(g == 1, score * 2)");
  REQUIRE(e.ok());
  CHECK(to_source(*e.value) == "expected(score | g == 1) + sum(g == 1, score * 2)");
}

TEST_CASE("minimal spec has the expected node counts")
{
  const auto r = parse_spec(k_minimal, "m.fspec");
  REQUIRE(r.ok());
  const auto & spec = *r.value;
  REQUIRE(spec.biases.size() == 1);
  const auto & b = spec.biases[0];
  CHECK(b.variables.size() == 1);
  CHECK(b.variables[0].values.size() == 1);
  CHECK(b.positive_outcome.text == "granted");
  CHECK(b.groups.size() == 2);
  CHECK(b.groups[0].members.size() == 1);
  CHECK(b.groups[1].members.size() == 1);
  REQUIRE(b.analyses.size() == 1);
  CHECK(b.analyses[0].metrics.size() == 1);
  CHECK_FALSE(b.analyses[0].metrics[0].body.has_value());
  CHECK(b.analyses[0].dataset.mappings.size() == 2);
}

TEST_CASE("negative tolerance is reported at its span")
{
  std::string text = k_minimal;
  text.replace(text.find("require == 0"), 12, "require == 0 tolerance -0.2");
  const auto parsed = parse_spec(text, "t");
  REQUIRE(parsed.ok());
  const auto r = model::validate(*parsed.value);
  const auto it = std::find_if(r.diagnostics.begin(), r.diagnostics.end(), [](const Diagnostic & d) {
    return d.code == DiagCode::NegativeTolerance;
  });
  REQUIRE(it != r.diagnostics.end());
  CHECK(it->span.line == 14);
  CHECK(it->span.column == 67);
}

TEST_CASE("recovery reports errors from several bias blocks")
{
  std::string one = k_minimal;
  std::string broken = one;
  broken.replace(broken.find("kind: group"), 11, "kind group");
  const std::string text = broken + broken + one;
  const auto r = parse_spec(text, "t");
  CHECK_FALSE(r.ok());
  REQUIRE(r.diagnostics.size() == 2);
  CHECK(r.diagnostics[0].span.line == 2);
  CHECK(r.diagnostics[1].span.line == 18);
}

TEST_CASE("missing analysis brace yields a single error and parsing resumes")
{
  std::string broken = k_minimal;
  const auto pos = broken.find("  }\n}\n");
  broken.erase(pos, 4);
  const std::string text = broken + k_minimal;
  const auto r = parse_spec(text, "t");
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].code == DiagCode::ParseError);
}

TEST_CASE("deep nesting is rejected without crashing")
{
  std::string s(5000, '(');
  s += "a == 1";
  s += std::string(5000, ')');
  const auto r = parse_predicate(s);
  CHECK_FALSE(r.ok());
  CHECK_FALSE(r.diagnostics.empty());
}

TEST_CASE("print_spec round-trips")
{
  const auto r = parse_spec(k_minimal, "t");
  REQUIRE(r.ok());
  const std::string printed = print_spec(*r.value);
  const auto again = parse_spec(printed, "t2");
  REQUIRE(again.ok());
  CHECK(same_structure(*r.value, *again.value));
  CHECK(print_spec(*again.value) == printed);
}

TEST_CASE("diagnostic formatting")
{
  const auto r = parse_spec("bias \"x\" { kind: ", "spec.fspec");
  REQUIRE_FALSE(r.diagnostics.empty());
  const std::string plain = format_diagnostic(r.diagnostics[0]);
  CHECK(plain.rfind("spec.fspec:1:", 0) == 0);
  CHECK(plain.find("error[ParseError]") != std::string::npos);
  CHECK(format_diagnostic(r.diagnostics[0], true).find("\x1b[") != std::string::npos);
}

TEST_CASE("empty and comment-only specs are diagnosed, not thrown")
{
  for (const char * text : {"", "   \n", "# only a comment\n"}) {
    const auto r = parse_spec(text, "empty");
    CHECK_FALSE(r.ok());
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].span.line >= 1);
  }
}
