#include "historian/lexer.hpp"

#include <array>
#include <cctype>
#include <unordered_set>

namespace historian {

namespace {

const std::unordered_set<std::string_view>& keyword_set() {
  // Java keywords plus the C/C++ overlap that shows up in patch corpora.
  static const std::unordered_set<std::string_view> kw = {
      "abstract", "assert", "boolean", "break", "byte", "case", "catch",
      "char", "class", "const", "continue", "default", "do", "double",
      "else", "enum", "extends", "final", "finally", "float", "for", "goto",
      "if", "implements", "import", "instanceof", "int", "interface", "long",
      "native", "new", "package", "private", "protected", "public", "return",
      "short", "static", "strictfp", "super", "switch", "synchronized",
      "this", "throw", "throws", "transient", "try", "var", "void",
      "volatile", "while", "true", "false", "null",
      // C/C++ extras
      "auto", "bool", "delete", "extern", "inline", "namespace", "nullptr",
      "operator", "register", "signed", "sizeof", "struct", "template",
      "typedef", "typename", "union", "unsigned", "using", "virtual",
  };
  return kw;
}

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

// Multi-character operators, longest first within each leading char.
const std::array<std::string_view, 26> kMultiOps = {
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "==", "!=", "<=",
    ">=",  "&&",  "||",  "++",  "--",  "+=", "-=", "*=", "/=", "%=",
    "&=",  "|=",  "^=",  "<<",  ">>",  "=>",
};

}  // namespace

bool is_keyword(std::string_view word) {
  return keyword_set().count(word) > 0;
}

std::vector<Token> lex_code(std::string_view code,
                            std::vector<std::string>* warnings) {
  std::vector<Token> out;
  const size_t n = code.size();
  size_t i = 0;
  int line = 1;

  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };

  // Consumes a quoted literal starting at i (code[i] is the quote).
  // On an unterminated literal, scans to end of line and reports.
  auto read_quoted = [&](char quote, TokenKind kind) {
    size_t start = i;
    int start_line = line;
    ++i;
    while (i < n) {
      char c = code[i];
      if (c == '\\' && i + 1 < n) {
        i += 2;
        continue;
      }
      if (c == quote) {
        ++i;
        out.push_back(Token{kind, std::string(code.substr(start, i - start)),
                            start_line});
        return;
      }
      if (c == '\n') break;
      ++i;
    }
    warn("UnterminatedLiteral at line " + std::to_string(start_line));
    out.push_back(
        Token{kind, std::string(code.substr(start, i - start)), start_line});
  };

  while (i < n) {
    char c = code[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && code[i + 1] == '/') {
      while (i < n && code[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && code[i + 1] == '*') {
      i += 2;
      bool closed = false;
      while (i < n) {
        if (code[i] == '\n') ++line;
        if (code[i] == '*' && i + 1 < n && code[i + 1] == '/') {
          i += 2;
          closed = true;
          break;
        }
        ++i;
      }
      if (!closed) warn("UnterminatedComment at line " + std::to_string(line));
      continue;
    }
    if (c == '"') {
      read_quoted('"', TokenKind::String);
      continue;
    }
    if (c == '\'') {
      read_quoted('\'', TokenKind::Char);
      continue;
    }
    if (is_ident_start(c)) {
      size_t start = i;
      while (i < n && is_ident_char(code[i])) ++i;
      std::string word(code.substr(start, i - start));
      TokenKind kind =
          is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier;
      out.push_back(Token{kind, std::move(word), line});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = i;
      while (i < n && (std::isalnum(static_cast<unsigned char>(code[i])) ||
                       code[i] == '.' || code[i] == '_')) {
        ++i;
      }
      out.push_back(
          Token{TokenKind::Number, std::string(code.substr(start, i - start)),
                line});
      continue;
    }
    // Operators and punctuation, longest known multi-char match first.
    bool matched = false;
    for (std::string_view op : kMultiOps) {
      if (code.substr(i, op.size()) == op) {
        out.push_back(Token{TokenKind::Punct, std::string(op), line});
        i += op.size();
        matched = true;
        break;
      }
    }
    if (!matched) {
      out.push_back(Token{TokenKind::Punct, std::string(1, c), line});
      ++i;
    }
  }
  return out;
}

}  // namespace historian
