#include "fairspec/dsl/lexer.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>

namespace fairspec::dsl
{

namespace
{

constexpr std::array<std::string_view, 36> k_keywords = {
  "bias",         "kind",       "domain",    "sources",     "sensitive",  "variable",
  "values",       "positive",   "outcome",   "privileged",  "unprivileged", "group",
  "individual",   "analysis",   "scope",     "dataset",     "path",       "prediction",
  "ground_truth", "other",      "map",       "column",      "top",        "bottom",
  "metric",       "require",    "tolerance", "in",          "log",        "group_size",
  "probability",  "expected",   "sum",       "and",         "or",         "not",
};

bool is_ident_start(char c) noexcept
{
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }

bool is_ident_char(char c) noexcept { return is_ident_start(c) || is_digit(c); }

class Lexer
{
public:
  Lexer(std::string_view text, std::shared_ptr<const std::string> file, bool keep_trivia)
  : text_(text), file_(std::move(file)), keep_trivia_(keep_trivia)
  {
  }

  LexResult run()
  {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '#') {
        trivia();
      } else if (is_ident_start(c)) {
        word();
      } else if (is_digit(c)) {
        number();
      } else if (c == '"') {
        string();
      } else {
        punct();
      }
    }
    Token eof;
    eof.kind = TokenKind::Eof;
    eof.lexeme = text_.substr(text_.size());
    eof.span = span_at(text_.size(), 0, line_, column_);
    out_.tokens.push_back(std::move(eof));
    return std::move(out_);
  }

private:
  SourceSpan span_at(std::size_t offset, std::size_t length, std::uint32_t line, std::uint32_t col)
  {
    SourceSpan s;
    s.file = file_;
    s.offset = offset;
    s.line = line;
    s.column = col;
    s.length = static_cast<std::uint32_t>(length);
    return s;
  }

  // Advances over [pos_, end) updating line/column, and returns the token covering it.
  Token take(TokenKind kind, std::size_t end)
  {
    Token t;
    t.kind = kind;
    t.lexeme = text_.substr(pos_, end - pos_);
    t.span = span_at(pos_, end - pos_, line_, column_);
    for (; pos_ < end; ++pos_) {
      if (text_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else {
        ++column_;
      }
    }
    return t;
  }

  void emit(Token t)
  {
    if (t.kind == TokenKind::Trivia && !keep_trivia_) return;
    out_.tokens.push_back(std::move(t));
  }

  void error(const Token & t, std::string message)
  {
    out_.diagnostics.push_back({DiagCode::LexError, std::move(message), t.span, {}});
  }

  void trivia()
  {
    std::size_t end = pos_;
    while (end < text_.size()) {
      const char c = text_[end];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        ++end;
      } else if (c == '#') {
        while (end < text_.size() && text_[end] != '\n') ++end;
      } else {
        break;
      }
    }
    emit(take(TokenKind::Trivia, end));
  }

  void word()
  {
    std::size_t end = pos_ + 1;
    while (end < text_.size() && is_ident_char(text_[end])) ++end;
    const auto lexeme = text_.substr(pos_, end - pos_);
    emit(take(is_keyword(lexeme) ? TokenKind::Keyword : TokenKind::Identifier, end));
  }

  void number()
  {
    std::size_t end = pos_;
    while (end < text_.size() && is_digit(text_[end])) ++end;
    if (end + 1 < text_.size() && text_[end] == '.' && is_digit(text_[end + 1])) {
      ++end;
      while (end < text_.size() && is_digit(text_[end])) ++end;
    }
    double value = 0;
    const auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + end, value);
    const bool ok = ec == std::errc{} && ptr == text_.data() + end;
    Token t = take(ok ? TokenKind::Number : TokenKind::Error, end);
    t.number = value;
    if (!ok) error(t, "number literal out of range");
    emit(std::move(t));
  }

  void string()
  {
    std::string decoded;
    std::size_t end = pos_ + 1;
    bool closed = false;
    while (end < text_.size()) {
      const char c = text_[end];
      if (c == '"') {
        closed = true;
        ++end;
        break;
      }
      if (c == '\n') break;
      if (c == '\\' && end + 1 < text_.size() && (text_[end + 1] == '"' || text_[end + 1] == '\\')) {
        decoded += text_[end + 1];
        end += 2;
        continue;
      }
      decoded += c;
      ++end;
    }
    Token t = take(closed ? TokenKind::String : TokenKind::Error, end);
    if (closed) {
      t.text = std::move(decoded);
    } else {
      error(t, "unterminated string literal");
    }
    emit(std::move(t));
  }

  void punct()
  {
    static constexpr std::array<std::string_view, 5> two = {"==", "!=", "<=", ">=", "->"};
    static constexpr std::string_view one = "{}[]():,=<>+-*/|";
    const auto rest = text_.substr(pos_);
    for (auto p : two) {
      if (rest.substr(0, 2) == p) {
        emit(take(TokenKind::Punct, pos_ + 2));
        return;
      }
    }
    if (one.find(rest[0]) != std::string_view::npos) {
      emit(take(TokenKind::Punct, pos_ + 1));
      return;
    }
    // Group a UTF-8 lead byte with its continuation bytes so one bad character is one error.
    std::size_t end = pos_ + 1;
    const auto lead = static_cast<unsigned char>(rest[0]);
    if (lead >= 0xC0) {
      while (end < text_.size() && end - pos_ < 4 &&
             (static_cast<unsigned char>(text_[end]) & 0xC0) == 0x80) {
        ++end;
      }
    }
    Token t = take(TokenKind::Error, end);
    std::string shown;
    if (lead >= 0x20 && lead < 0x7F) {
      shown = "'" + std::string(t.lexeme) + "'";
    } else {
      char buf[8];
      std::snprintf(buf, sizeof buf, "0x%02X", lead);
      shown = buf;
    }
    error(t, "illegal character " + shown);
    emit(std::move(t));
  }

  std::string_view text_;
  std::shared_ptr<const std::string> file_;
  bool keep_trivia_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t column_ = 1;
  LexResult out_;
};

}  // namespace

std::string_view to_string(TokenKind kind) noexcept
{
  switch (kind) {
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Identifier: return "identifier";
    case TokenKind::String: return "string";
    case TokenKind::Number: return "number";
    case TokenKind::Punct: return "punctuation";
    case TokenKind::Trivia: return "trivia";
    case TokenKind::Error: return "invalid token";
    case TokenKind::Eof: return "end of input";
  }
  return "?";
}

bool is_keyword(std::string_view word) noexcept
{
  return std::find(k_keywords.begin(), k_keywords.end(), word) != k_keywords.end();
}

LexResult lex(std::string_view text, std::shared_ptr<const std::string> file, bool keep_trivia)
{
  return Lexer(text, std::move(file), keep_trivia).run();
}

}  // namespace fairspec::dsl
