#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "proofsmith/analyzer.hpp"

namespace proofsmith {

enum class ActionCategory {
  LogicalReasoning,
  ArithmeticSolvers,
  ProofContext,
  Quantifier,
  SyntaxRepair,
  LoopInvariant,
};
const char* to_string(ActionCategory category);

/// How a candidate produced by this action is judged against the previous
/// report. Strict demands a strictly smaller error count with no new type or
/// syntax errors. TargetedRelaxed demands the targeted error gone and any
/// new errors confined to the region the edit introduced; the total count
/// may grow (splitting one failing assert into several steps).
enum class Acceptance { Strict, TargetedRelaxed };
const char* to_string(Acceptance acceptance);

struct PriorityBoost {
  std::function<bool(const CodeFacts&)> when;
  int weight = 0;
  std::string note;  // shown to the planner when the boost fires
};

struct ActionSpec {
  std::string action_id;
  ActionCategory category = ActionCategory::LogicalReasoning;
  std::string description;      // one paragraph for the planner
  std::string prompt_template;  // named {{placeholder}} slots
  std::function<bool(const CodeFacts&)> applicability;
  Acceptance acceptance = Acceptance::Strict;
  std::vector<PriorityBoost> priority_boosts;
};

/// Built-in registry. Always present: case-analysis, split-assertion,
/// induction, nonlinear-arithmetic, bit-vector, integer-ring, repair-syntax.
/// Gated: use-lemma (helper lemmas exist), reveal-opaque (opaque functions
/// exist), instantiate-forall / instantiate-exists (quantified goals),
/// add-loop-invariant (loops exist), add-assert-context (always).
std::vector<ActionSpec> default_registry();

const ActionSpec* find_action(const std::vector<ActionSpec>& registry,
                              const std::string& action_id);

int action_score(const ActionSpec& action, const CodeFacts& facts);

/// Applicable actions, highest score first; ties keep registry order.
std::vector<const ActionSpec*> applicable_actions(
    const std::vector<ActionSpec>& registry, const CodeFacts& facts);

/// Hand-written planner guidance on when each action tends to help.
/// Original to this codebase.
std::string when_to_use_tutorial();

/// Shared instructions describing the edit-block format actions must emit.
std::string diff_format_instructions();

/// Replaces every {{name}} with values.at(name). Throws std::runtime_error
/// on a placeholder with no value (templates must be fully resolvable).
std::string render_template(const std::string& tmpl,
                            const std::map<std::string, std::string>& values);

}  // namespace proofsmith
