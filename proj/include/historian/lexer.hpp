#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace historian {

enum class TokenKind {
  Identifier,
  Keyword,
  Number,
  String,   // includes the quotes
  Char,     // includes the quotes
  Punct,
};

struct Token {
  TokenKind kind;
  std::string text;
  int line = 0;  // 1-based line of the first character

  bool operator==(const Token& other) const {
    return kind == other.kind && text == other.text;
  }
};

/// Language-lenient lexer for C-family source (the corpus is Java).
/// Comments and whitespace are dropped; string/char literals are kept as
/// single tokens; braces inside literals and comments are never emitted.
/// An unterminated literal is reported into `warnings` (when given) and
/// scanning resumes on the next line.
std::vector<Token> lex_code(std::string_view code,
                            std::vector<std::string>* warnings = nullptr);

/// True when `word` is in the shipped C-family/Java keyword set.
bool is_keyword(std::string_view word);

}  // namespace historian
