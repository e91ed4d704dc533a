#include "proofsmith/lexer.hpp"

#include <array>
#include <cctype>
#include <string_view>

namespace proofsmith {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_cont(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Longest-match first. Fusing these keeps normalized clause text readable and
// makes token-sequence comparison insensitive to spacing around operators.
constexpr std::array<std::string_view, 28> kOperators = {
    "<==>", "==>", "&&&", "|||", "<<=", ">>=", "..=",
    "->",   "=>",  "::",  "..",  "<=",  ">=",  "==",  "!=", "&&",
    "||",   "<<",  ">>",  "+=",  "-=",  "*=",  "/=",  "%=", "^=",
    "&=",   "|=",  "##"};

struct Cursor {
  const std::string& src;
  std::size_t i = 0;
  int line = 1;
  int col = 1;

  explicit Cursor(const std::string& s) : src(s) {}

  bool done() const { return i >= src.size(); }
  char peek(std::size_t ahead = 0) const {
    return i + ahead < src.size() ? src[i + ahead] : '\0';
  }
  void advance() {
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  }
  void advance_n(std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) advance();
  }
};

void skip_line_comment(Cursor& c) {
  while (!c.done() && c.peek() != '\n') c.advance();
}

void skip_block_comment(Cursor& c) {
  int open_line = c.line;
  c.advance_n(2);  // consume "/*"
  int depth = 1;
  while (!c.done()) {
    if (c.peek() == '/' && c.peek(1) == '*') {
      ++depth;
      c.advance_n(2);
    } else if (c.peek() == '*' && c.peek(1) == '/') {
      --depth;
      c.advance_n(2);
      if (depth == 0) return;
    } else {
      c.advance();
    }
  }
  throw LexError("unterminated block comment", open_line);
}

// Consumes the interior + closing quote of a "..."-style literal with escapes.
void consume_quoted(Cursor& c, char quote) {
  int open_line = c.line;
  while (!c.done()) {
    char ch = c.peek();
    if (ch == '\\') {
      c.advance();
      if (!c.done()) c.advance();
      continue;
    }
    c.advance();
    if (ch == quote) return;
  }
  throw LexError("unterminated string literal", open_line);
}

// r"..." / r#"..."# raw strings: `c` is positioned at the first '#' or '"'.
void consume_raw_string(Cursor& c) {
  int open_line = c.line;
  std::size_t hashes = 0;
  while (c.peek() == '#') {
    ++hashes;
    c.advance();
  }
  if (c.peek() != '"') throw LexError("malformed raw string literal", open_line);
  c.advance();
  while (!c.done()) {
    if (c.peek() == '"') {
      std::size_t k = 1;
      while (k <= hashes && c.peek(k) == '#') ++k;
      if (k == hashes + 1) {
        c.advance_n(hashes + 1);
        return;
      }
    }
    c.advance();
  }
  throw LexError("unterminated raw string literal", open_line);
}

}  // namespace

std::vector<Token> lex(const std::string& source) {
  std::vector<Token> out;
  Cursor c(source);
  std::vector<int> brace_lines;  // open-brace line stack for balance errors

  auto push = [&](TokenKind kind, std::size_t begin, int line, int col) {
    out.push_back(Token{kind, source.substr(begin, c.i - begin), begin, c.i, line, col});
  };

  while (!c.done()) {
    char ch = c.peek();
    if (std::isspace(static_cast<unsigned char>(ch))) {
      c.advance();
      continue;
    }
    if (ch == '/' && c.peek(1) == '/') {
      skip_line_comment(c);
      continue;
    }
    if (ch == '/' && c.peek(1) == '*') {
      skip_block_comment(c);
      continue;
    }

    std::size_t begin = c.i;
    int line = c.line, col = c.col;

    if (is_ident_start(ch)) {
      while (!c.done() && is_ident_cont(c.peek())) c.advance();
      std::string_view word(source.data() + begin, c.i - begin);
      // Raw/byte string and byte-char prefixes glue onto the literal.
      if ((word == "r" || word == "br" || word == "rb") && (c.peek() == '"' || c.peek() == '#')) {
        consume_raw_string(c);
        push(TokenKind::Str, begin, line, col);
        continue;
      }
      if (word == "b" && c.peek() == '"') {
        c.advance();
        consume_quoted(c, '"');
        push(TokenKind::Str, begin, line, col);
        continue;
      }
      if (word == "b" && c.peek() == '\'') {
        c.advance();
        consume_quoted(c, '\'');
        push(TokenKind::Char, begin, line, col);
        continue;
      }
      push(TokenKind::Ident, begin, line, col);
      continue;
    }

    if (std::isdigit(static_cast<unsigned char>(ch))) {
      // Covers int/float bodies, radix prefixes, underscores and suffixes
      // (0x10_0000u64). A `.` is left as punctuation, which keeps `0..n`
      // unambiguous and is stable on both sides of any comparison.
      while (!c.done() && is_ident_cont(c.peek())) c.advance();
      push(TokenKind::Number, begin, line, col);
      continue;
    }

    if (ch == '"') {
      c.advance();
      consume_quoted(c, '"');
      push(TokenKind::Str, begin, line, col);
      continue;
    }

    if (ch == '\'') {
      // Disambiguate char literal from lifetime: 'x' / '\n' are chars,
      // 'a (no closing quote right after one char) is a lifetime.
      if (c.peek(1) == '\\' || (c.peek(1) != '\0' && c.peek(2) == '\'')) {
        c.advance();
        consume_quoted(c, '\'');
        push(TokenKind::Char, begin, line, col);
        continue;
      }
      c.advance();
      while (!c.done() && is_ident_cont(c.peek())) c.advance();
      push(TokenKind::Lifetime, begin, line, col);
      continue;
    }

    bool fused = false;
    for (std::string_view op : kOperators) {
      if (source.compare(begin, op.size(), op) == 0) {
        c.advance_n(op.size());
        push(TokenKind::Punct, begin, line, col);
        fused = true;
        break;
      }
    }
    if (fused) continue;

    c.advance();
    push(TokenKind::Punct, begin, line, col);
    if (ch == '{') brace_lines.push_back(line);
    if (ch == '}') {
      if (brace_lines.empty()) throw LexError("unbalanced '}'", line);
      brace_lines.pop_back();
    }
  }

  if (!brace_lines.empty()) throw LexError("unbalanced '{'", brace_lines.back());
  return out;
}

bool lexes_cleanly(const std::string& source) {
  try {
    lex(source);
    return true;
  } catch (const LexError&) {
    return false;
  }
}

std::string normalize_tokens(const std::vector<Token>& tokens) {
  std::string out;
  for (const Token& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t.text;
  }
  return out;
}

std::string normalized_source(const std::string& source) {
  return normalize_tokens(lex(source));
}

int line_count(const std::string& source) {
  if (source.empty()) return 0;
  int n = 1;
  for (std::size_t i = 0; i + 1 < source.size(); ++i) {
    if (source[i] == '\n') ++n;
  }
  if (source.back() == '\n' && source.size() == 1) return 1;
  return n;
}

}  // namespace proofsmith
