#pragma once

#include <string>
#include <vector>

#include "proofsmith/model.hpp"
#include "proofsmith/units.hpp"

namespace proofsmith {

/// Static facts about a task that gate and prioritize actions.
struct CodeFacts {
  std::vector<std::string> lemmas;  // helper proof fns callable from the target
  std::vector<std::string> recursive_functions;  // decreases clause or self-call
  std::vector<std::string> opaque_functions;
  int loops_count = 0;
  bool has_quantified_goals = false;  // forall/exists in the target's clauses or body
  bool exec_target = false;           // target is exec (vs proof)
};

/// Throws LexError when the task source fails lexical analysis.
CodeFacts analyze(const ProofTask& task);

/// Purely lexical feature detection. Induction means a self-call inside a
/// proof fn that carries a decreases clause; contradiction means a literal
/// assert(false). vstd_arithmetic_use covers both a vstd::arithmetic path
/// and a broadcast-use of any vstd lemma path.
struct FeatureProfile {
  bool assert_forall = false;
  bool choose_exists = false;
  bool bit_vector_mode = false;
  bool nonlinear_mode = false;
  bool compute_mode = false;
  bool vstd_arithmetic_use = false;
  bool induction = false;
  bool contradiction = false;
};

FeatureProfile profile_features(const std::string& source);

/// "feature=true|false" lines, declaration order.
std::string render_profile(const FeatureProfile& profile);

}  // namespace proofsmith
