#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "proofsmith/model.hpp"
#include "proofsmith/units.hpp"

namespace proofsmith {

class NameNotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Line-of-code statistics. Lines with no tokens (blanks, comments) are not
/// counted anywhere. Every counted line lands in exactly one of the four
/// buckets, so total_loc = spec_loc + proof_loc_lemma + proof_loc_target +
/// other_loc always holds; invariant_loc is an overlapping side measure
/// (loop-invariant lines usually also count as target proof lines).
struct LocStats {
  int total_loc = 0;
  int spec_loc = 0;          // spec fns + requires/ensures clauses
  int proof_loc_lemma = 0;   // helper proof fn signatures (bodies land in other)
  int proof_loc_target = 0;  // proof constructs / proof body inside the target
  int other_loc = 0;
  int loops_count = 0;
  int invariant_loc = 0;  // lines inside loop invariant clauses
  int helper_lemma_count = 0;
};

/// Removes the target's proof annotations: a proof-fn target gets an empty
/// body, an exec target keeps only its exec skeleton. Signatures,
/// requires/ensures, and all non-target content stay untouched.
/// Throws NameNotFound when the target is missing, LexError when the
/// source does not lex.
ProofTask strip_proofs(const ProofTask& verified);

/// Replaces the named proof fn's body with `unimplemented!()` and tags it
/// `#[verifier::external_body]`; signature and clauses untouched. Throws
/// NameNotFound when no proof fn of that name with a body exists.
std::string externalize_lemma(const std::string& source,
                              const std::string& lemma_name);

LocStats compute_stats(const ProofTask& task);

/// Best-effort target pick for task files that do not name one: the last
/// exec fn carrying requires/ensures, else the last proof fn with a body,
/// else the last unit. Empty string when the file has no functions.
std::string detect_target(const std::vector<FunctionUnit>& units);

/// "key=value" lines, field declaration order.
std::string render_stats(const LocStats& stats);

std::string stats_csv_header();
std::string stats_csv_row(const std::string& task_id, const LocStats& stats);

}  // namespace proofsmith
