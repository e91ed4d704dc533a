#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace proofsmith {

enum class TokenKind { Ident, Number, Str, Char, Lifetime, Punct };

struct Token {
  TokenKind kind = TokenKind::Punct;
  std::string text;
  std::size_t offset = 0;  // byte offset of the first character
  std::size_t end = 0;     // one past the last character
  int line = 1;            // 1-based
  int column = 1;          // 1-based, in bytes
};

struct LexError : std::runtime_error {
  int line;
  LexError(const std::string& msg, int line_)
      : std::runtime_error(msg + " (line " + std::to_string(line_) + ")"), line(line_) {}
};

/// Tokenizes Verus-flavoured Rust source. Whitespace and comments (line and
/// nested block) are dropped; string/char/raw-string literals become single
/// tokens; common multi-character operators (`<=`, `==>`, `<==>`, `&&&`, ...)
/// are fused. Throws LexError on unterminated literals or comments and on
/// unbalanced curly braces outside strings/comments.
std::vector<Token> lex(const std::string& source);

/// True iff lex() would succeed.
bool lexes_cleanly(const std::string& source);

/// Token texts joined with single spaces, e.g. "32 <= max_width <= 52".
std::string normalize_tokens(const std::vector<Token>& tokens);

/// lex() + normalize_tokens(). Throws LexError like lex().
std::string normalized_source(const std::string& source);

/// Number of lines in `source` (a trailing newline does not open a new line).
int line_count(const std::string& source);

}  // namespace proofsmith
