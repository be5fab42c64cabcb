#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fairspec/source.hpp"

namespace fairspec::dsl
{

enum class TokenKind {
  Keyword,
  Identifier,
  String,
  Number,
  Punct,
  Trivia,  // whitespace and `#` comments; only emitted when requested
  Error,   // bytes the lexer could not classify; always paired with a LexError
  Eof,
};

std::string_view to_string(TokenKind kind) noexcept;

struct Token
{
  TokenKind kind = TokenKind::Eof;
  std::string_view lexeme;  // view into the lexed text
  SourceSpan span;
  std::string text;   // decoded string contents (String tokens only)
  double number = 0;  // unsigned value (Number tokens only)

  [[nodiscard]] bool is(TokenKind k, std::string_view lex) const noexcept
  {
    return kind == k && lexeme == lex;
  }
  [[nodiscard]] bool is_word() const noexcept
  {
    return kind == TokenKind::Keyword || kind == TokenKind::Identifier;
  }
};

struct LexResult
{
  std::vector<Token> tokens;  // always terminated by an Eof token
  Diagnostics diagnostics;
};

/// Tokenizes `text`. The returned lexemes are views into `text`, which must outlive them.
/// With `keep_trivia`, concatenating every lexeme reproduces `text` byte for byte.
LexResult lex(
  std::string_view text, std::shared_ptr<const std::string> file = nullptr, bool keep_trivia = false);

bool is_keyword(std::string_view word) noexcept;

}  // namespace fairspec::dsl
