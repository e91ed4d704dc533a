#pragma once

#include <string>
#include <vector>

#include "proofsmith/units.hpp"

namespace proofsmith {

enum class CheatRule {
  AssumeAdmit,
  NewUnimplementedLemma,
  NewAxiom,
  AxiomSignatureChanged,
  ExternalBodyAdded,
  SignatureChanged,
  ExecCodeChanged,
  FunctionRemoved,
};

const char* to_string(CheatRule rule);

struct CheatFinding {
  CheatRule rule;
  std::string function;  // or "(file)" for file-level findings
  int line = 0;          // 1-based in the modified file; 0 when unknown
  std::string detail;
};

/// Lexical no-cheating check of `modified` against `original`:
///  (a) assume( / admit( anywhere outside comments and strings
///  (b) new function with an unimplemented!() body, or a new function
///      carrying an external-body/external attribute; an original function
///      that gained such an attribute is flagged the same way
///  (c) new axiom-marked function; original axiom with changed clauses
///  (d) original function whose requires/ensures text changed (for spec
///      functions the body is the specification, so body changes count too)
///  (e) original exec function whose skeleton (body minus proof constructs)
///      changed
///  (f) original function missing from the modified file
/// Adding proof functions with real bodies, proof blocks, asserts, loop
/// invariants, and new spec functions is legal and produces no findings.
/// Throws LexError when either file fails lexical analysis.
std::vector<CheatFinding> check_cheating(const std::string& original,
                                         const std::string& modified);

/// "RULE<TAB>function<TAB>line<TAB>detail" per finding, newline-terminated.
std::string render_findings(const std::vector<CheatFinding>& findings);

}  // namespace proofsmith
