#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "proofsmith/model.hpp"
#include "proofsmith/units.hpp"
#include "proofsmith/verifier.hpp"

namespace proofsmith {

/// Raised when minimize's input does not verify or fails the cheat check.
class NotVerified : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One deletable piece of added proof text: an assert (with its `by`
/// block), a proof block, a loop invariant/decreases clause, a broadcast
/// use or lemma-call statement, or a whole added helper proof fn (only
/// removable when no call site survives the deletion).
struct RemovableUnit {
  std::string label;  // e.g. "assert@12" or "fn lemma_helper"
  ByteSpan span;
  LineRange lines;
  std::string helper_name;  // non-empty for added helper proof fns
};

/// Added-vs-original removable units of `verified`, outermost only, in
/// file order. Constructs whose normalized text already occurs in the
/// original cancel against it (multiset) and are not offered for deletion.
std::vector<RemovableUnit> removable_units(const ProofTask& original,
                                           const std::string& verified);

struct MinimizeResult {
  std::string text;
  bool minimal = true;  // false when the verifier-run budget stopped the search
  int verifier_runs = 0;
  int units_total = 0;
  int units_removed = 0;
  std::vector<std::string> kept_labels;
};

/// Delta-debugging proof shrinker: deletes removable units (halving
/// passes, then a singleton fixpoint for 1-minimality) while the file
/// keeps verifying. Every trial must re-lex and keep all call sites of
/// surviving helpers, or the deletion is vetoed without a verifier run.
/// Hitting `max_verifier_runs` returns the best text so far, non-minimal.
/// Throws NotVerified when `verified` does not verify or fails the cheat
/// check against `original`.
MinimizeResult minimize(const ProofTask& original, const std::string& verified,
                        Verifier& verifier, int max_verifier_runs = 200);

/// Non-blank, non-comment, non-delimiter-only lines of `verified` that sit
/// inside proof constructs, added helper proof fns, or proof-fn bodies and
/// do not occur in the original (line-level multiset difference).
int proof_line_count(const ProofTask& original, const std::string& verified);

}  // namespace proofsmith
