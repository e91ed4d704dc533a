#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "proofsmith/lexer.hpp"

namespace proofsmith {

enum class FnMode { Spec, Proof, Exec };

const char* to_string(FnMode mode);

struct ByteSpan {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
};

struct LineRange {
  int first = 0;
  int last = 0;  // 1-based, inclusive; {0,0} means empty
  bool empty() const { return first == 0; }
  bool contains(int line) const { return !empty() && first <= line && line <= last; }
};

struct ClauseSpan {
  std::string keyword;  // requires, ensures, decreases, invariant, ...
  std::string text;     // normalized expression text, keyword excluded
  ByteSpan span;
  LineRange lines;
};

/// One function item as seen by the lexical analyses: mode, attributes,
/// normalized signature clauses and body, and (for exec functions) the body
/// with recognized proof constructs removed.
struct FunctionUnit {
  std::string name;  // qualified as "Type::name" inside impl/trait blocks
  FnMode mode = FnMode::Exec;
  std::vector<std::string> attributes;  // normalized attribute interiors
  std::string requires_text;
  std::string ensures_text;
  std::string body_text;      // normalized body interior
  std::string exec_skeleton;  // Exec mode only; empty otherwise
  bool has_body = false;
  bool is_axiom = false;
  bool is_external_body = false;
  bool is_external = false;  // verifier::external: invisible to the verifier
  bool is_opaque = false;
  bool has_decreases = false;

  ByteSpan item_span;  // first attribute/modifier through end of item
  ByteSpan sig_span;   // item start through the token before the body brace
  ByteSpan body_span;  // braces inclusive; valid iff has_body
  LineRange item_lines;
  LineRange body_lines;
  std::vector<ClauseSpan> clauses;

  std::size_t body_tok_begin = 0;  // token indices of the body interior
  std::size_t body_tok_end = 0;
};

struct ParsedFile {
  std::string source;
  std::vector<Token> tokens;
  std::vector<FunctionUnit> units;
};

/// Lexes and scans a file for function items (top-level, inside `verus!`-style
/// macro blocks, and inside impl/trait/mod blocks). Throws LexError.
ParsedFile parse_file(const std::string& source);

/// Convenience wrapper: parse_file(source).units.
std::vector<FunctionUnit> extract_units(const std::string& source);

const FunctionUnit* find_unit(const std::vector<FunctionUnit>& units, const std::string& name);

enum class ProofConstructKind {
  AssertStmt,    // assert / assume / admit statements, with any `by` block
  ProofBlock,    // proof { ... }
  LoopClause,    // invariant / decreases / ensures clause in a loop header
  GhostLet,      // let ghost ... ; and let tracked ... ;
  BroadcastUse,  // broadcast use path, ...;
  CallStmt,      // path(args); at statement position in proof context
};

const char* to_string(ProofConstructKind kind);

struct ProofConstruct {
  ProofConstructKind kind;
  ByteSpan span;  // whole statement or clause, trailing ';' included
  LineRange lines;
  std::string normalized;
  std::string keyword;  // LoopClause: which clause keyword
  std::string callee;   // CallStmt: normalized call path
  bool in_proof_context = false;
  int nesting = 0;  // number of enclosing recognized constructs
};

/// Every recognized proof construct in the body of `fn`. Nested constructs
/// are all reported: a proof block and each call statement inside it get
/// their own entries (with `nesting` telling them apart).
std::vector<ProofConstruct> proof_constructs(const ParsedFile& file, const FunctionUnit& fn);

/// `while` / `loop` / `for` headers at statement position in the body of `fn`.
int count_loops(const ParsedFile& file, const FunctionUnit& fn);

/// Occurrences of `assume(` / `admit(` outside comments and strings.
std::vector<Token> find_assume_admit(const std::vector<Token>& tokens);

/// The unit whose item span covers `line`, preferring the innermost body.
const FunctionUnit* enclosing_unit(const std::vector<FunctionUnit>& units, int line);

}  // namespace proofsmith
