#include "proofsmith/units.hpp"

#include <algorithm>
#include <set>

namespace proofsmith {

namespace {

const std::set<std::string> kClauseKws = {
    "requires", "ensures",  "recommends", "decreases", "returns",
    "invariant", "invariant_except_break", "invariant_ensures",
    "opens_invariants", "no_unwind", "when", "via", "default_ensures",
};

const std::set<std::string> kFnModifiers = {
    "pub", "open", "closed", "uninterp", "spec", "proof", "exec",
    "broadcast", "axiom", "const", "unsafe", "async", "default", "extern",
};

bool is_ident(const Token& t, const char* text) {
  return t.kind == TokenKind::Ident && t.text == text;
}

bool is_punct(const Token& t, const char* text) {
  return t.kind == TokenKind::Punct && t.text == text;
}

/// Tracks whether a `{` at the current position would start a new expression
/// (struct literal / expression block) or cannot be one because the previous
/// token already completed an operand.
struct ExprState {
  bool pending = true;  // true: an operand is expected next
  std::string prev;
  void feed(const Token& t) {
    prev = t.text;
    switch (t.kind) {
      case TokenKind::Ident:
      case TokenKind::Number:
      case TokenKind::Str:
      case TokenKind::Char:
      case TokenKind::Lifetime:
        pending = false;
        return;
      case TokenKind::Punct:
        pending = !(t.text == ")" || t.text == "]" || t.text == "}");
        return;
    }
  }
};

struct Scanner {
  const std::string& src;
  const std::vector<Token>& toks;
  std::vector<FunctionUnit> units;

  Scanner(const std::string& s, const std::vector<Token>& t) : src(s), toks(t) {}

  std::size_t match_brace(std::size_t open) const {
    int depth = 0;
    for (std::size_t i = open; i < toks.size(); ++i) {
      if (is_punct(toks[i], "{")) ++depth;
      else if (is_punct(toks[i], "}")) {
        if (--depth == 0) return i;
      }
    }
    return toks.size();  // unreachable: lexer enforces balance
  }

  std::size_t match_bracket(std::size_t open) const {
    int depth = 0;
    for (std::size_t i = open; i < toks.size(); ++i) {
      if (is_punct(toks[i], "[")) ++depth;
      else if (is_punct(toks[i], "]")) {
        if (--depth == 0) return i;
      }
    }
    return toks.size();
  }

  std::size_t match_paren(std::size_t open) const {
    int depth = 0;
    for (std::size_t i = open; i < toks.size(); ++i) {
      if (is_punct(toks[i], "(")) ++depth;
      else if (is_punct(toks[i], ")")) {
        if (--depth == 0) return i;
      }
    }
    return toks.size();
  }

  /// Consumes a generic parameter list starting at `<`. Fused shifts close
  /// two levels at once.
  std::size_t skip_generics(std::size_t i) const {
    int depth = 0;
    for (; i < toks.size(); ++i) {
      const std::string& x = toks[i].text;
      if (toks[i].kind != TokenKind::Punct) continue;
      if (x == "<") ++depth;
      else if (x == "<<") depth += 2;
      else if (x == ">") { if (--depth == 0) return i + 1; }
      else if (x == ">>") { depth -= 2; if (depth <= 0) return i + 1; }
    }
    return i;
  }

  void scan_items(std::size_t i, std::size_t end, const std::string& prefix) {
    std::vector<std::string> attrs;
    std::size_t attrs_start = toks.size();
    auto reset_attrs = [&] { attrs.clear(); attrs_start = toks.size(); };

    while (i < end) {
      const Token& t = toks[i];
      if (is_punct(t, "#") && i + 1 < end && is_punct(toks[i + 1], "[")) {
        std::size_t close = match_bracket(i + 1);
        std::vector<Token> inner(toks.begin() + i + 2, toks.begin() + close);
        if (attrs.empty()) attrs_start = i;
        attrs.push_back(normalize_tokens(inner));
        i = close + 1;
        continue;
      }
      if (is_punct(t, "#") && i + 1 < end && is_punct(toks[i + 1], "!")) {
        // inner attribute #![...]: file or block level, not item metadata
        if (i + 2 < end && is_punct(toks[i + 2], "[")) i = match_bracket(i + 2) + 1;
        else i += 2;
        continue;
      }
      if (t.kind == TokenKind::Ident) {
        if (t.text == "impl" || t.text == "trait") {
          std::size_t body = scan_container(i, end, prefix, t.text == "trait");
          reset_attrs();
          i = body;
          continue;
        }
        if (t.text == "mod" && i + 1 < end && toks[i + 1].kind == TokenKind::Ident) {
          std::size_t j = i + 2;
          if (j < end && is_punct(toks[j], "{")) {
            std::size_t close = match_brace(j);
            scan_items(j + 1, close, prefix);
            i = close + 1;
          } else {
            while (j < end && !is_punct(toks[j], ";")) ++j;
            i = j + 1;
          }
          reset_attrs();
          continue;
        }
        if (t.text == "macro_rules" && i + 1 < end && is_punct(toks[i + 1], "!")) {
          std::size_t j = i + 2;
          if (j < end && toks[j].kind == TokenKind::Ident) ++j;
          if (j < end && is_punct(toks[j], "{")) i = match_brace(j) + 1;
          else i = j + 1;
          reset_attrs();
          continue;
        }
        if (i + 1 < end && is_punct(toks[i + 1], "!") && i + 2 < end &&
            is_punct(toks[i + 2], "{")) {
          // macro block such as verus! { ... }: items live inside
          std::size_t close = match_brace(i + 2);
          scan_items(i + 3, close, prefix);
          reset_attrs();
          i = close + 1;
          continue;
        }
        if (kFnModifiers.count(t.text) || t.text == "fn") {
          std::size_t after = try_fn(i, end, prefix, attrs, attrs_start);
          if (after != i) {
            reset_attrs();
            i = after;
            continue;
          }
          reset_attrs();  // const/static value item, fn-pointer type, ...
        }
        if (t.text == "struct" || t.text == "enum" || t.text == "union" ||
            t.text == "type" || t.text == "static" || t.text == "use")
          reset_attrs();
      }
      ++i;
    }
  }

  /// impl / trait block: recurse into the body with a qualified prefix.
  /// Returns the index just past the closing brace.
  std::size_t scan_container(std::size_t i, std::size_t end, const std::string& outer,
                             bool is_trait) {
    std::size_t j = i + 1;
    if (j < end && is_punct(toks[j], "<")) j = skip_generics(j);
    // find the body brace; an impl/trait header holds no top-level braces
    std::size_t header_end = j;
    while (header_end < end && !is_punct(toks[header_end], "{") &&
           !is_punct(toks[header_end], ";"))
      ++header_end;
    if (header_end >= end || is_punct(toks[header_end], ";")) return header_end + 1;

    // name: for `impl Trait for Type` take Type, else the first path ident
    std::size_t name_from = j;
    if (!is_trait) {
      for (std::size_t k = j; k < header_end; ++k)
        if (is_ident(toks[k], "for")) name_from = k + 1;
    }
    std::string name;
    for (std::size_t k = name_from; k < header_end; ++k) {
      if (toks[k].kind == TokenKind::Ident && toks[k].text != "mut" &&
          toks[k].text != "dyn" && toks[k].text != "where") {
        name = toks[k].text;
        break;
      }
      if (is_ident(toks[k], "where")) break;
    }
    std::size_t close = match_brace(header_end);
    scan_items(header_end + 1, close,
               outer.empty() ? name : (name.empty() ? outer : outer + "::" + name));
    return close + 1;
  }

  /// Parses one fn item starting at its first modifier token. Returns the
  /// index just past the item, or `i` unchanged if this is not a fn item.
  std::size_t try_fn(std::size_t i, std::size_t end, const std::string& prefix,
                     const std::vector<std::string>& attrs, std::size_t attrs_start) {
    std::size_t j = i;
    FnMode mode = FnMode::Exec;
    bool kw_axiom = false;
    while (j < end && toks[j].kind == TokenKind::Ident && toks[j].text != "fn") {
      if (!kFnModifiers.count(toks[j].text)) return i;
      if (toks[j].text == "spec") mode = FnMode::Spec;
      else if (toks[j].text == "proof") mode = FnMode::Proof;
      else if (toks[j].text == "axiom") { kw_axiom = true; mode = FnMode::Proof; }
      ++j;
      if (j < end && is_punct(toks[j], "(")) j = match_paren(j) + 1;  // pub(crate), spec(checked)
      else if (j < end && toks[j].kind == TokenKind::Str) ++j;        // extern "C"
    }
    if (j >= end || !is_ident(toks[j], "fn")) return i;
    ++j;
    if (j >= end || toks[j].kind != TokenKind::Ident) return i;  // fn-pointer type
    std::string name = toks[j].text;
    ++j;
    if (j < end && is_punct(toks[j], "<")) j = skip_generics(j);
    if (j >= end || !is_punct(toks[j], "(")) return i;
    j = match_paren(j) + 1;

    FunctionUnit fn;
    fn.name = prefix.empty() ? name : prefix + "::" + name;
    fn.mode = mode;
    fn.attributes = attrs;
    std::size_t item_tok_start = attrs.empty() ? i : attrs_start;
    fn.item_span.begin = toks[item_tok_start].offset;
    fn.item_lines.first = toks[item_tok_start].line;

    ExprState expr;
    expr.pending = false;  // just consumed the parameter list's ')'

    // return type
    if (j < end && is_punct(toks[j], "->")) {
      ++j;
      int depth = 0;
      while (j < end) {
        const Token& t = toks[j];
        if (depth == 0 && t.kind == TokenKind::Ident &&
            (kClauseKws.count(t.text) || t.text == "where"))
          break;
        if (depth == 0 && (is_punct(t, "{") || is_punct(t, ";"))) break;
        if (is_punct(t, "(") || is_punct(t, "[")) ++depth;
        else if (is_punct(t, ")") || is_punct(t, "]")) --depth;
        expr.feed(t);
        ++j;
      }
    }
    if (j < end && is_ident(toks[j], "where")) {
      ++j;
      int depth = 0;
      while (j < end) {
        const Token& t = toks[j];
        if (depth == 0 && t.kind == TokenKind::Ident && kClauseKws.count(t.text)) break;
        if (depth == 0 && (is_punct(t, "{") || is_punct(t, ";"))) break;
        if (is_punct(t, "(") || is_punct(t, "[")) ++depth;
        else if (is_punct(t, ")") || is_punct(t, "]")) --depth;
        expr.feed(t);
        ++j;
      }
    }

    // signature clauses, then the body brace or terminating ';'
    while (j < end) {
      const Token& t = toks[j];
      if (t.kind == TokenKind::Ident && kClauseKws.count(t.text)) {
        ClauseSpan clause;
        clause.keyword = t.text;
        clause.span.begin = t.offset;
        clause.lines.first = t.line;
        std::size_t expr_start = j + 1;
        j = consume_clause_expr(j + 1, end, expr);
        std::vector<Token> inner(toks.begin() + expr_start, toks.begin() + j);
        // a trailing separator is formatting, not part of the clause
        while (!inner.empty() && is_punct(inner.back(), ","))
          inner.pop_back();
        clause.text = normalize_tokens(inner);
        if (j > expr_start) {
          clause.span.end = toks[j - 1].end;
          clause.lines.last = toks[j - 1].line;
        } else {
          clause.span.end = t.end;
          clause.lines.last = t.line;
        }
        if (clause.keyword == "requires") {
          fn.requires_text = clause.text;
        } else if (clause.keyword == "ensures") {
          fn.ensures_text = clause.text;
        } else if (clause.keyword == "decreases") {
          fn.has_decreases = true;
        }
        fn.clauses.push_back(std::move(clause));
        continue;
      }
      if (is_punct(t, ";")) {
        fn.sig_span = {fn.item_span.begin, t.end};
        fn.item_span.end = t.end;
        fn.item_lines.last = t.line;
        units.push_back(std::move(fn));
        return j + 1;
      }
      if (is_punct(t, "{")) {
        std::size_t close = match_brace(j);
        fn.has_body = true;
        fn.sig_span = {fn.item_span.begin, t.offset};
        fn.body_span = {t.offset, toks[close].end};
        fn.body_lines = {t.line, toks[close].line};
        fn.body_tok_begin = j + 1;
        fn.body_tok_end = close;
        fn.item_span.end = toks[close].end;
        fn.item_lines.last = toks[close].line;
        std::vector<Token> inner(toks.begin() + j + 1, toks.begin() + close);
        fn.body_text = normalize_tokens(inner);
        finish_unit(fn, kw_axiom);
        units.push_back(std::move(fn));
        return close + 1;
      }
      expr.feed(t);
      ++j;
    }
    return end;
  }

  /// Consumes clause expressions until the next clause keyword, `where`, the
  /// body brace, or `;` at depth zero. Expression braces (struct literals,
  /// block expressions after an operator) are skipped whole; a `{` after a
  /// completed operand or a trailing comma ends the clause as the body.
  std::size_t consume_clause_expr(std::size_t j, std::size_t end,
                                  ExprState& expr) const {
    expr.pending = true;
    expr.prev.clear();
    int depth = 0;
    while (j < end) {
      const Token& t = toks[j];
      if (depth == 0) {
        if (t.kind == TokenKind::Ident &&
            (kClauseKws.count(t.text) || t.text == "where"))
          return j;
        if (is_punct(t, ";")) return j;
        if (is_punct(t, "{")) {
          if (!expr.pending || expr.prev == ",") return j;  // body brace
          j = match_brace(j) + 1;
          expr.pending = false;
          expr.prev = "}";
          continue;
        }
      }
      if (is_punct(t, "(") || is_punct(t, "[")) ++depth;
      else if (is_punct(t, ")") || is_punct(t, "]")) --depth;
      expr.feed(t);
      ++j;
    }
    return j;
  }

  void finish_unit(FunctionUnit& fn, bool kw_axiom) {
    fn.is_axiom = kw_axiom || fn.name.rfind("axiom_", 0) == 0;
    for (const std::string& a : fn.attributes) {
      if (attr_has_word(a, "external_body")) fn.is_external_body = true;
      if (attr_has_word(a, "external")) fn.is_external = true;
      if (attr_has_word(a, "external_fn_specification")) fn.is_external = true;
      if (attr_has_word(a, "opaque")) fn.is_opaque = true;
      if (attr_has_word(a, "axiom")) fn.is_axiom = true;
    }
    if (fn.mode == FnMode::Exec && fn.has_body) {
      std::vector<std::string> kept;
      std::vector<ProofConstruct> sink;
      walk_body(fn.body_tok_begin, fn.body_tok_end, false, 0, &sink, &kept);
      std::string s;
      for (const std::string& w : kept) {
        if (!s.empty()) s += ' ';
        s += w;
      }
      fn.exec_skeleton = std::move(s);
    }
  }

  static bool attr_has_word(const std::string& attr, const std::string& word) {
    // attributes are stored normalized, so words are space-delimited
    std::size_t pos = 0;
    while ((pos = attr.find(word, pos)) != std::string::npos) {
      bool left = pos == 0 || attr[pos - 1] == ' ';
      std::size_t after = pos + word.size();
      bool right = after == attr.size() || attr[after] == ' ';
      if (left && right) return true;
      pos = after;
    }
    return false;
  }

  // ---- body walking: proof constructs and the exec skeleton ----

  void emit(std::vector<std::string>* kept, const Token& t) const {
    if (kept) kept->push_back(t.text);
  }

  void record(std::vector<ProofConstruct>* out, ProofConstructKind kind,
              std::size_t first_tok, std::size_t last_tok, bool proof_ctx,
              int nesting, std::string keyword = {}, std::string callee = {}) const {
    if (!out) return;
    ProofConstruct pc;
    pc.kind = kind;
    pc.span = {toks[first_tok].offset, toks[last_tok].end};
    pc.lines = {toks[first_tok].line, toks[last_tok].line};
    std::vector<Token> inner(toks.begin() + first_tok, toks.begin() + last_tok + 1);
    pc.normalized = normalize_tokens(inner);
    pc.keyword = std::move(keyword);
    pc.callee = std::move(callee);
    pc.in_proof_context = proof_ctx;
    pc.nesting = nesting;
    out->push_back(std::move(pc));
  }

  /// Walks tokens [b, e) of a block interior. Recognized proof constructs go
  /// to `out`; everything else goes to `kept` (when collecting a skeleton).
  /// Also counts loop headers when `loops` is non-null.
  void walk_body(std::size_t b, std::size_t e, bool proof_ctx, int nesting,
                 std::vector<ProofConstruct>* out, std::vector<std::string>* kept,
                 int* loops = nullptr) const {
    std::size_t i = b;
    bool stmt_start = true;
    while (i < e) {
      const Token& t = toks[i];
      if (stmt_start && t.kind == TokenKind::Ident) {
        if (t.text == "assert" || t.text == "assume" || t.text == "admit") {
          i = consume_assert_like(i, e, proof_ctx, nesting, out);
          continue;
        }
        if (t.text == "proof" && i + 1 < e && is_punct(toks[i + 1], "{")) {
          std::size_t close = match_brace(i + 1);
          record(out, ProofConstructKind::ProofBlock, i, close, proof_ctx, nesting);
          walk_body(i + 2, close, true, nesting + 1, out, nullptr, nullptr);
          i = close + 1;
          continue;
        }
        if (t.text == "let" && i + 1 < e &&
            (is_ident(toks[i + 1], "ghost") || is_ident(toks[i + 1], "tracked"))) {
          std::size_t stop = consume_to_semi(i, e);
          record(out, ProofConstructKind::GhostLet, i, stop, proof_ctx, nesting);
          i = stop + 1;
          continue;
        }
        if (t.text == "broadcast" && i + 1 < e && is_ident(toks[i + 1], "use")) {
          std::size_t stop = consume_to_semi(i, e);
          record(out, ProofConstructKind::BroadcastUse, i, stop, proof_ctx, nesting);
          i = stop + 1;
          continue;
        }
        if (t.text == "while" || t.text == "loop" ||
            (t.text == "for" && i + 1 < e && !is_punct(toks[i + 1], "<"))) {
          if (loops) ++*loops;
          i = consume_loop(i, e, proof_ctx, nesting, out, kept, loops);
          continue;
        }
        if (proof_ctx) {
          std::size_t after = try_call_stmt(i, e, nesting, out);
          if (after != i) {
            i = after;
            continue;
          }
        }
      }
      if (is_punct(t, "{")) {
        std::size_t close = match_brace(i);
        emit(kept, t);
        walk_body(i + 1, close, proof_ctx, nesting, out, kept, loops);
        emit(kept, toks[close]);
        i = close + 1;
        stmt_start = true;
        continue;
      }
      emit(kept, t);
      // `,` and `=>` open new statement-like positions (match arms, blocks
      // in argument lists); `;` ends a statement
      stmt_start = is_punct(t, ";") || is_punct(t, ",") || is_punct(t, "=>");
      ++i;
    }
  }

  std::size_t consume_to_semi(std::size_t i, std::size_t e) const {
    int depth = 0;
    for (; i < e; ++i) {
      const Token& t = toks[i];
      if (is_punct(t, "(") || is_punct(t, "[") || is_punct(t, "{")) ++depth;
      else if (is_punct(t, ")") || is_punct(t, "]") || is_punct(t, "}")) --depth;
      else if (depth == 0 && is_punct(t, ";")) return i;
    }
    return e - 1;
  }

  /// assert(..) ; | assert .. by(mode) ; | assert .. by { .. } | assume(..) ;
  /// A depth-0 `,` ends the statement too (match arms) and stays unconsumed.
  std::size_t consume_assert_like(std::size_t i, std::size_t e, bool proof_ctx,
                                  int nesting,
                                  std::vector<ProofConstruct>* out) const {
    std::size_t start = i;
    ++i;
    int depth = 0;
    std::size_t by_open = 0, by_close = 0;
    while (i < e) {
      const Token& t = toks[i];
      if (depth == 0 && is_punct(t, ";")) { ++i; break; }
      if (depth == 0 && is_punct(t, ",")) break;
      if (depth == 0 && is_punct(t, "{")) {
        std::size_t close = match_brace(i);
        by_open = i;
        by_close = close;
        i = close + 1;
        if (i < e && is_punct(toks[i], ";")) ++i;
        break;
      }
      if (is_punct(t, "(") || is_punct(t, "[")) ++depth;
      else if (is_punct(t, ")") || is_punct(t, "]")) --depth;
      ++i;
    }
    record(out, ProofConstructKind::AssertStmt, start, i - 1, proof_ctx, nesting);
    // a by-block is proof context regardless of the enclosing mode
    if (by_close)
      walk_body(by_open + 1, by_close, true, nesting + 1, out, nullptr, nullptr);
    return i;
  }

  /// path ( args ) ; or path ! ( args ) ; at statement position.
  /// Returns `i` unchanged when the shape does not match.
  std::size_t try_call_stmt(std::size_t i, std::size_t e, int nesting,
                            std::vector<ProofConstruct>* out) const {
    std::size_t j = i;
    if (toks[j].kind != TokenKind::Ident) return i;
    std::size_t path_end = j + 1;
    while (path_end + 1 < e && is_punct(toks[path_end], "::") &&
           toks[path_end + 1].kind == TokenKind::Ident)
      path_end += 2;
    std::size_t k = path_end;
    if (k < e && is_punct(toks[k], "!")) ++k;
    if (k >= e || !is_punct(toks[k], "(")) return i;
    std::size_t close = match_paren(k);
    if (close + 1 >= e || !is_punct(toks[close + 1], ";")) return i;
    std::vector<Token> path(toks.begin() + i, toks.begin() + path_end);
    record(out, ProofConstructKind::CallStmt, i, close + 1, true, nesting, {},
           normalize_tokens(path));
    return close + 2;
  }

  /// Loop header: keeps the keyword and condition in the skeleton, records
  /// invariant / decreases / ensures clauses, then recurses into the body.
  std::size_t consume_loop(std::size_t i, std::size_t e, bool proof_ctx, int nesting,
                           std::vector<ProofConstruct>* out,
                           std::vector<std::string>* kept, int* loops) const {
    const bool bare_loop = toks[i].text == "loop";
    emit(kept, toks[i]);
    ++i;
    ExprState expr;
    int depth = 0;
    while (i < e) {
      const Token& t = toks[i];
      if (depth == 0 && t.kind == TokenKind::Ident && kClauseKws.count(t.text)) {
        std::string kw = t.text;
        std::size_t kw_tok = i;
        std::size_t stop = consume_clause_expr(i + 1, e, expr);
        record(out, ProofConstructKind::LoopClause, kw_tok,
               stop > kw_tok + 1 ? stop - 1 : kw_tok, proof_ctx, nesting, kw);
        i = stop;
        continue;
      }
      if (depth == 0 && is_punct(t, "{")) {
        if (bare_loop || !expr.pending || expr.prev == ",") break;  // body
        std::size_t close = match_brace(i);
        for (std::size_t k = i; k <= close && kept; ++k) kept->push_back(toks[k].text);
        i = close + 1;
        expr.pending = false;
        expr.prev = "}";
        continue;
      }
      if (is_punct(t, "(") || is_punct(t, "[")) ++depth;
      else if (is_punct(t, ")") || is_punct(t, "]")) --depth;
      emit(kept, t);
      expr.feed(t);
      ++i;
    }
    if (i >= e) return e;
    std::size_t close = match_brace(i);
    emit(kept, toks[i]);
    walk_body(i + 1, close, proof_ctx, nesting, out, kept, loops);
    emit(kept, toks[close]);
    return close + 1;
  }
};

}  // namespace

const char* to_string(FnMode mode) {
  switch (mode) {
    case FnMode::Spec: return "spec";
    case FnMode::Proof: return "proof";
    case FnMode::Exec: return "exec";
  }
  return "exec";
}

const char* to_string(ProofConstructKind kind) {
  switch (kind) {
    case ProofConstructKind::AssertStmt: return "assert";
    case ProofConstructKind::ProofBlock: return "proof_block";
    case ProofConstructKind::LoopClause: return "loop_clause";
    case ProofConstructKind::GhostLet: return "ghost_let";
    case ProofConstructKind::BroadcastUse: return "broadcast_use";
    case ProofConstructKind::CallStmt: return "call";
  }
  return "?";
}

ParsedFile parse_file(const std::string& source) {
  ParsedFile file;
  file.source = source;
  file.tokens = lex(source);
  Scanner scanner(file.source, file.tokens);
  scanner.scan_items(0, file.tokens.size(), "");
  file.units = std::move(scanner.units);
  return file;
}

std::vector<FunctionUnit> extract_units(const std::string& source) {
  return parse_file(source).units;
}

const FunctionUnit* find_unit(const std::vector<FunctionUnit>& units,
                              const std::string& name) {
  for (const FunctionUnit& u : units)
    if (u.name == name) return &u;
  // fall back to an unqualified match
  for (const FunctionUnit& u : units) {
    std::size_t pos = u.name.rfind("::");
    if (pos != std::string::npos && u.name.substr(pos + 2) == name) return &u;
  }
  return nullptr;
}

std::vector<ProofConstruct> proof_constructs(const ParsedFile& file,
                                             const FunctionUnit& fn) {
  std::vector<ProofConstruct> out;
  if (!fn.has_body) return out;
  Scanner scanner(file.source, file.tokens);
  scanner.walk_body(fn.body_tok_begin, fn.body_tok_end, fn.mode == FnMode::Proof, 0,
                    &out, nullptr, nullptr);
  return out;
}

int count_loops(const ParsedFile& file, const FunctionUnit& fn) {
  if (!fn.has_body) return 0;
  int loops = 0;
  Scanner scanner(file.source, file.tokens);
  std::vector<ProofConstruct> sink;
  scanner.walk_body(fn.body_tok_begin, fn.body_tok_end, fn.mode == FnMode::Proof, 0,
                    &sink, nullptr, &loops);
  return loops;
}

std::vector<Token> find_assume_admit(const std::vector<Token>& tokens) {
  std::vector<Token> hits;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (t.kind != TokenKind::Ident) continue;
    if (t.text != "assume" && t.text != "admit") continue;
    if (is_punct(tokens[i + 1], "(")) hits.push_back(t);
  }
  return hits;
}

const FunctionUnit* enclosing_unit(const std::vector<FunctionUnit>& units, int line) {
  const FunctionUnit* best = nullptr;
  for (const FunctionUnit& u : units) {
    if (!u.item_lines.contains(line)) continue;
    if (!best || u.item_lines.first > best->item_lines.first) best = &u;
  }
  return best;
}

}  // namespace proofsmith
