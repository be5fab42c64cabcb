#include "fairspec/dsl/parser.hpp"

#include <memory>

#include "fairspec/dsl/lexer.hpp"

namespace fairspec::dsl
{

namespace
{

constexpr int k_max_nesting = 200;

// Thrown after a diagnostic has been recorded; unwinds to the nearest recovery point.
struct SyntaxError
{
};

std::string describe(const Token & t)
{
  switch (t.kind) {
    case TokenKind::Eof: return "end of input";
    case TokenKind::String: return "string " + std::string(t.lexeme);
    case TokenKind::Number: return "number " + std::string(t.lexeme);
    default: return "'" + std::string(t.lexeme) + "'";
  }
}

class Parser
{
public:
  Parser(std::vector<Token> tokens, Diagnostics & diags) : tokens_(std::move(tokens)), diags_(diags)
  {
  }

  RawSpec spec()
  {
    RawSpec out;
    if (at_eof()) {
      try {
        error_here("expected 'bias'", "a spec declares at least one bias block");
      } catch (const SyntaxError &) {
      }
      return out;
    }
    while (!at_eof()) {
      const std::size_t start = idx_;
      try {
        if (!at_kw("bias")) {
          error_here("expected 'bias', found " + describe(cur()), "expected 'bias'");
        }
        out.biases.push_back(bias());
      } catch (const SyntaxError &) {
        if (idx_ == start) advance();
        while (!at_eof() && !at_kw("bias")) advance();
      }
    }
    return out;
  }

  Predicate standalone_predicate()
  {
    Predicate p = pred();
    expect_eof();
    return p;
  }

  FunctionExpr standalone_function()
  {
    FunctionExpr f = fexpr();
    expect_eof();
    return f;
  }

  RowExpr standalone_row()
  {
    RowExpr e = rexpr();
    expect_eof();
    return e;
  }

  // Wraps a standalone entry point so SyntaxError never escapes.
  template <class Fn>
  auto guarded(Fn && fn) -> std::optional<decltype(fn())>
  {
    try {
      return fn();
    } catch (const SyntaxError &) {
      return std::nullopt;
    }
  }

private:
  // ---- token cursor -------------------------------------------------------

  const Token & cur() const { return tokens_[idx_]; }
  const Token & peek(std::size_t n = 1) const
  {
    return tokens_[std::min(idx_ + n, tokens_.size() - 1)];
  }
  bool at_eof() const { return cur().kind == TokenKind::Eof; }
  bool at_kw(std::string_view kw) const { return cur().is(TokenKind::Keyword, kw); }
  bool at_punct(std::string_view p) const { return cur().is(TokenKind::Punct, p); }

  const Token & advance()
  {
    const Token & t = cur();
    if (!at_eof()) ++idx_;
    return t;
  }

  [[noreturn]] void error_here(std::string message, std::string hint)
  {
    // The lexer already reported invalid tokens; do not pile a second error on them.
    if (cur().kind != TokenKind::Error) {
      diags_.push_back({DiagCode::ParseError, std::move(message), cur().span, std::move(hint)});
    }
    throw SyntaxError{};
  }

  [[noreturn]] void expected(std::string_view what)
  {
    error_here(
      "expected " + std::string(what) + ", found " + describe(cur()), "expected " + std::string(what));
  }

  const Token & expect_kw(std::string_view kw)
  {
    if (!at_kw(kw)) expected("'" + std::string(kw) + "'");
    return advance();
  }

  const Token & expect_punct(std::string_view p)
  {
    if (!at_punct(p)) expected("'" + std::string(p) + "'");
    return advance();
  }

  void expect_eof()
  {
    if (!at_eof()) expected("end of input");
  }

  Ident ident()
  {
    if (!cur().is_word()) expected("identifier");
    const Token & t = advance();
    return {std::string(t.lexeme), t.span};
  }

  RawString string_lit()
  {
    if (cur().kind != TokenKind::String) expected("string literal");
    const Token & t = advance();
    return {t.text, t.span};
  }

  RawNumber number()
  {
    SourceSpan start = cur().span;
    double sign = 1;
    if (at_punct("-") || at_punct("+")) {
      if (advance().lexeme == "-") sign = -1;
    }
    if (cur().kind != TokenKind::Number) expected("number");
    const Token & t = advance();
    return {sign * t.number, join(start, t.span)};
  }

  bool at_number_start() const
  {
    return cur().kind == TokenKind::Number ||
           ((at_punct("-") || at_punct("+")) && peek().kind == TokenKind::Number);
  }

  SourceSpan span_from(const SourceSpan & start) const
  {
    return idx_ > 0 ? join(start, tokens_[idx_ - 1].span) : start;
  }

  struct DepthGuard
  {
    explicit DepthGuard(Parser & p) : p_(p)
    {
      if (++p_.depth_ > k_max_nesting) {
        --p_.depth_;
        p_.error_here("expression nested too deeply", "simplify the expression");
      }
    }
    ~DepthGuard() { --p_.depth_; }
    DepthGuard(const DepthGuard &) = delete;
    DepthGuard & operator=(const DepthGuard &) = delete;
    Parser & p_;
  };

  // ---- declarations -------------------------------------------------------

  RawBias bias()
  {
    const SourceSpan start = expect_kw("bias").span;
    RawBias b;
    b.name = string_lit();
    expect_punct("{");

    expect_kw("kind");
    expect_punct(":");
    if (!at_kw("group") && !at_kw("individual")) expected("'group' or 'individual'");
    const Token & k = advance();
    b.kind = {std::string(k.lexeme), k.span};

    expect_kw("domain");
    expect_punct(":");
    b.domain = string_lit();

    if (at_kw("sources")) {
      advance();
      expect_punct(":");
      expect_punct("[");
      b.sources.push_back(ident());
      while (at_punct(",")) {
        advance();
        b.sources.push_back(ident());
      }
      expect_punct("]");
    }

    if (!at_kw("sensitive")) expected("'sensitive variable'");
    while (at_kw("sensitive")) b.variables.push_back(sensitive_variable());

    expect_kw("positive");
    expect_kw("outcome");
    b.positive_outcome = ident();

    b.groups.push_back(group());
    b.groups.push_back(group());

    if (!at_kw("analysis")) expected("'analysis'");
    while (at_kw("analysis")) b.analyses.push_back(analysis());

    if (!at_punct("}")) {
      error_here(
        "expected '}' to close bias \"" + b.name.text + "\", found " + describe(cur()),
        "expected '}'");
    }
    advance();
    b.span = span_from(start);
    return b;
  }

  RawSensitiveVariable sensitive_variable()
  {
    const SourceSpan start = expect_kw("sensitive").span;
    expect_kw("variable");
    RawSensitiveVariable v;
    v.name = ident();
    expect_punct("{");
    expect_kw("values");
    expect_punct(":");
    expect_punct("[");
    v.values.push_back(ident());
    while (at_punct(",")) {
      advance();
      v.values.push_back(ident());
    }
    expect_punct("]");
    expect_punct("}");
    v.span = span_from(start);
    return v;
  }

  RawGroup group()
  {
    if (!at_kw("privileged") && !at_kw("unprivileged")) {
      expected("'privileged group' or 'unprivileged group'");
    }
    const Token & head = advance();
    RawGroup g;
    g.privileged = head.lexeme == "privileged";
    expect_kw("group");
    expect_punct("{");
    do {
      RawGroupMember m;
      m.variable = ident();
      expect_punct("=");
      m.value = ident();
      g.members.push_back(std::move(m));
    } while (!at_punct("}") && !at_eof());
    expect_punct("}");
    g.span = span_from(head.span);
    return g;
  }

  RawAnalysis analysis()
  {
    const SourceSpan start = expect_kw("analysis").span;
    RawAnalysis a;
    a.name = string_lit();
    expect_punct("{");
    if (at_kw("scope")) {
      advance();
      expect_punct(":");
      a.scope = string_lit();
    }
    a.dataset = dataset();
    if (!at_kw("metric")) expected("'metric'");
    while (at_kw("metric")) a.metrics.push_back(metric());
    if (!at_punct("}")) {
      error_here(
        "expected '}' to close analysis \"" + a.name.text + "\", found " + describe(cur()),
        "expected '}'");
    }
    advance();
    a.span = span_from(start);
    return a;
  }

  RawDataset dataset()
  {
    const SourceSpan start = expect_kw("dataset").span;
    RawDataset d;
    expect_punct("{");
    expect_kw("path");
    expect_punct(":");
    d.path = string_lit();
    if (at_kw("prediction")) {
      advance();
      expect_punct(":");
      d.prediction = ident();
    }
    if (at_kw("ground_truth")) {
      advance();
      expect_punct(":");
      d.ground_truth = ident();
    }
    if (at_kw("other")) {
      advance();
      expect_punct(":");
      expect_punct("[");
      d.other.push_back(ident());
      while (at_punct(",")) {
        advance();
        d.other.push_back(ident());
      }
      expect_punct("]");
    }
    if (!at_kw("map")) expected("'map'");
    while (at_kw("map")) d.mappings.push_back(mapping());
    expect_punct("}");
    d.span = span_from(start);
    return d;
  }

  RawMapping mapping()
  {
    const SourceSpan start = expect_kw("map").span;
    RawMapping m;
    if (at_kw("outcome")) {
      advance();
      m.outcome = true;
    } else {
      m.variable = ident();
    }
    expect_punct("->");
    expect_kw("column");
    m.column = ident();
    expect_punct("{");
    if (m.outcome) {
      RawValueMapping v;
      const Token & pos = expect_kw("positive");
      v.value = {std::string(pos.lexeme), pos.span};
      expect_punct("=");
      v.selector = selector();
      m.values.push_back(std::move(v));
    } else {
      do {
        RawValueMapping v;
        v.value = ident();
        expect_punct("=");
        v.selector = selector();
        m.values.push_back(std::move(v));
      } while (!at_punct("}") && !at_eof());
    }
    expect_punct("}");
    m.span = span_from(start);
    return m;
  }

  RawSelector selector()
  {
    RawSelector s;
    const SourceSpan start = cur().span;
    if (at_kw("top") || at_kw("bottom")) {
      s.kind = advance().lexeme == "top" ? RawSelector::Kind::Top : RawSelector::Kind::Bottom;
      s.number = number().value;
    } else if (cur().kind == TokenKind::String) {
      s.kind = RawSelector::Kind::String;
      s.text = advance().text;
    } else if (at_number_start()) {
      s.kind = RawSelector::Kind::Number;
      s.number = number().value;
    } else {
      expected("value selector (number, string, 'top' or 'bottom')");
    }
    s.span = span_from(start);
    return s;
  }

  RawMetric metric()
  {
    const SourceSpan start = expect_kw("metric").span;
    RawMetric m;
    m.name = ident();
    if (at_punct("(")) {
      advance();
      m.params.push_back(number());
      while (at_punct(",")) {
        advance();
        m.params.push_back(number());
      }
      expect_punct(")");
    }
    if (at_punct("=")) {
      advance();
      m.body = fexpr();
    }
    expect_punct("{");
    expect_kw("require");
    m.require = comparator();
    if (at_kw("tolerance")) {
      advance();
      m.tolerance = number();
    }
    expect_punct("}");
    m.span = span_from(start);
    return m;
  }

  RawComparator comparator()
  {
    RawComparator c;
    const SourceSpan start = cur().span;
    if (at_kw("in")) {
      advance();
      c.kind = RawComparator::Kind::Range;
      expect_punct("[");
      c.lower = number().value;
      expect_punct(",");
      c.upper = number().value;
      expect_punct("]");
    } else {
      using K = RawComparator::Kind;
      static const std::pair<std::string_view, K> ops[] = {
        {"==", K::Eq}, {"<=", K::Le}, {">=", K::Ge}, {"<", K::Lt}, {">", K::Gt}};
      bool found = false;
      for (const auto & [lex, kind] : ops) {
        if (at_punct(lex)) {
          c.kind = kind;
          found = true;
          break;
        }
      }
      if (!found) expected("comparator ('==', '<=', '>=', '<', '>' or 'in')");
      advance();
      c.value = number().value;
    }
    c.span = span_from(start);
    return c;
  }

  // ---- metric functions ---------------------------------------------------

  static ArithOp arith(std::string_view lex)
  {
    if (lex == "+") return ArithOp::Add;
    if (lex == "-") return ArithOp::Sub;
    if (lex == "*") return ArithOp::Mul;
    return ArithOp::Div;
  }

  FunctionExpr fexpr()
  {
    DepthGuard guard(*this);
    FunctionExpr lhs = fterm();
    while (at_punct("+") || at_punct("-")) {
      const ArithOp op = arith(advance().lexeme);
      FunctionExpr rhs = fterm();
      SourceSpan span = join(lhs.span, rhs.span);
      lhs = FunctionExpr::binary(op, std::move(lhs), std::move(rhs), std::move(span));
    }
    return lhs;
  }

  FunctionExpr fterm()
  {
    FunctionExpr lhs = ffact();
    while (at_punct("*") || at_punct("/")) {
      const ArithOp op = arith(advance().lexeme);
      FunctionExpr rhs = ffact();
      SourceSpan span = join(lhs.span, rhs.span);
      lhs = FunctionExpr::binary(op, std::move(lhs), std::move(rhs), std::move(span));
    }
    return lhs;
  }

  FunctionExpr ffact()
  {
    DepthGuard guard(*this);
    const SourceSpan start = cur().span;
    if (at_number_start()) {
      RawNumber n = number();
      return FunctionExpr::constant(n.value, n.span);
    }
    if (at_punct("(")) {
      advance();
      FunctionExpr inner = fexpr();
      expect_punct(")");
      return inner;
    }
    if (at_kw("log")) {
      advance();
      expect_punct("(");
      const double base = number().value;
      expect_punct(",");
      FunctionExpr arg = fexpr();
      expect_punct(")");
      return FunctionExpr::log(base, std::move(arg), span_from(start));
    }
    if (at_kw("group_size")) {
      advance();
      expect_punct("(");
      Predicate p = pred();
      expect_punct(")");
      return FunctionExpr::group_size(std::move(p), span_from(start));
    }
    if (at_kw("probability")) {
      advance();
      expect_punct("(");
      Predicate event = pred();
      std::optional<Predicate> given;
      if (at_punct("|")) {
        advance();
        given = pred();
      }
      expect_punct(")");
      return FunctionExpr::probability(std::move(event), std::move(given), span_from(start));
    }
    if (at_kw("expected")) {
      advance();
      expect_punct("(");
      RowExpr body = rexpr();
      std::optional<Predicate> given;
      if (at_punct("|")) {
        advance();
        given = pred();
      }
      expect_punct(")");
      return FunctionExpr::expected(std::move(body), std::move(given), span_from(start));
    }
    if (at_kw("sum")) {
      advance();
      expect_punct("(");
      Predicate over = pred();
      expect_punct(",");
      RowExpr body = rexpr();
      expect_punct(")");
      return FunctionExpr::sum(std::move(over), std::move(body), span_from(start));
    }
    expected("metric term (number, '(', log, group_size, probability, expected or sum)");
  }

  // ---- predicates ---------------------------------------------------------

  Predicate pred()
  {
    DepthGuard guard(*this);
    Predicate lhs = pred_and();
    while (at_kw("or")) {
      advance();
      Predicate rhs = pred_and();
      SourceSpan span = join(lhs.span, rhs.span);
      lhs = Predicate::disj(std::move(lhs), std::move(rhs), std::move(span));
    }
    return lhs;
  }

  Predicate pred_and()
  {
    Predicate lhs = pred_term();
    while (at_kw("and")) {
      advance();
      Predicate rhs = pred_term();
      SourceSpan span = join(lhs.span, rhs.span);
      lhs = Predicate::conj(std::move(lhs), std::move(rhs), std::move(span));
    }
    return lhs;
  }

  Predicate pred_term()
  {
    DepthGuard guard(*this);
    const SourceSpan start = cur().span;
    if (at_kw("not")) {
      advance();
      Predicate inner = pred_term();
      return Predicate::negate(std::move(inner), span_from(start));
    }
    if (at_punct("(")) {
      advance();
      Predicate inner = pred();
      expect_punct(")");
      return inner;
    }
    if (!cur().is_word()) expected("column name, 'not' or '('");
    Ident column = ident();
    static const std::pair<std::string_view, CmpOp> ops[] = {
      {"==", CmpOp::Eq}, {"!=", CmpOp::Ne}, {"<=", CmpOp::Le},
      {">=", CmpOp::Ge}, {"<", CmpOp::Lt},  {">", CmpOp::Gt}};
    std::optional<CmpOp> op;
    for (const auto & [lex, o] : ops) {
      if (at_punct(lex)) {
        op = o;
        break;
      }
    }
    if (!op) expected("comparison operator");
    advance();
    Literal lit;
    if (cur().kind == TokenKind::String) {
      lit = advance().text;
    } else if (at_number_start()) {
      lit = number().value;
    } else {
      expected("number or string literal");
    }
    return Predicate::compare(std::move(column.text), *op, std::move(lit), span_from(start));
  }

  // ---- row arithmetic -----------------------------------------------------

  RowExpr rexpr()
  {
    DepthGuard guard(*this);
    RowExpr lhs = rterm();
    while (at_punct("+") || at_punct("-")) {
      const ArithOp op = arith(advance().lexeme);
      RowExpr rhs = rterm();
      SourceSpan span = join(lhs.span, rhs.span);
      lhs = RowExpr::binary(op, std::move(lhs), std::move(rhs), std::move(span));
    }
    return lhs;
  }

  RowExpr rterm()
  {
    RowExpr lhs = rfact();
    while (at_punct("*") || at_punct("/")) {
      const ArithOp op = arith(advance().lexeme);
      RowExpr rhs = rfact();
      SourceSpan span = join(lhs.span, rhs.span);
      lhs = RowExpr::binary(op, std::move(lhs), std::move(rhs), std::move(span));
    }
    return lhs;
  }

  RowExpr rfact()
  {
    DepthGuard guard(*this);
    if (at_number_start()) {
      RawNumber n = number();
      return RowExpr::constant(n.value, n.span);
    }
    if (at_punct("(")) {
      advance();
      RowExpr inner = rexpr();
      expect_punct(")");
      return inner;
    }
    if (!cur().is_word()) expected("column name, number or '('");
    Ident id = ident();
    return RowExpr::col(std::move(id.text), id.span);
  }

  std::vector<Token> tokens_;
  std::size_t idx_ = 0;
  int depth_ = 0;
  Diagnostics & diags_;
};

template <class T, class Fn>
ParseResult<T> run(std::string_view text, std::shared_ptr<const std::string> file, Fn && entry)
{
  ParseResult<T> result;
  LexResult lexed = lex(text, std::move(file));
  result.diagnostics = std::move(lexed.diagnostics);
  Parser parser(std::move(lexed.tokens), result.diagnostics);
  auto value = entry(parser);
  if (result.diagnostics.empty() && value) result.value = std::move(*value);
  return result;
}

}  // namespace

ParseResult<RawSpec> parse_spec(std::string_view text, std::string file_name)
{
  auto file = std::make_shared<const std::string>(std::move(file_name));
  return run<RawSpec>(text, std::move(file), [](Parser & p) {
    return std::optional<RawSpec>(p.spec());
  });
}

ParseResult<Predicate> parse_predicate(std::string_view text)
{
  return run<Predicate>(text, nullptr, [](Parser & p) {
    return p.guarded([&] { return p.standalone_predicate(); });
  });
}

ParseResult<FunctionExpr> parse_function(std::string_view text)
{
  return run<FunctionExpr>(text, nullptr, [](Parser & p) {
    return p.guarded([&] { return p.standalone_function(); });
  });
}

ParseResult<RowExpr> parse_row_expr(std::string_view text)
{
  return run<RowExpr>(text, nullptr, [](Parser & p) {
    return p.guarded([&] { return p.standalone_row(); });
  });
}

}  // namespace fairspec::dsl
