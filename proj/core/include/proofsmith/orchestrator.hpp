#pragma once

#include <optional>
#include <string>
#include <vector>

#include "proofsmith/actions.hpp"
#include "proofsmith/cheat.hpp"
#include "proofsmith/gateway.hpp"
#include "proofsmith/model.hpp"
#include "proofsmith/units.hpp"
#include "proofsmith/verifier.hpp"

namespace proofsmith {

struct RunBudget {
  int max_steps = 20;
  double max_wall_time = 1200.0;  // seconds
};

enum class RunStatus { Proved, StepBudgetExhausted, TimeBudgetExhausted, Aborted };
const char* to_string(RunStatus status);

struct RunResult {
  RunStatus status = RunStatus::Aborted;
  int final_candidate_id = 0;  // best accepted candidate
  std::string final_source;
  int steps_used = 0;
  double wall_time = 0.0;
  HistoryLog history;
  RunMetrics metrics;
  std::vector<ProofCandidate> candidates;  // full lineage, root first
  std::string abort_reason;                // set when status == Aborted
};

struct PlannerDecision {
  std::string action_id;
  VerificationError target_error;
  std::string rationale;
};

struct OrchestratorOptions {
  RunBudget budget;
  int context_radius = 30;
  std::string model_id = "replay-model";
  int max_output_tokens = 4096;
  double temperature = 0.0;
};

/// The proof loop: verify the working candidate, plan an action, run the
/// action agent, apply its edit blocks, verify, and accept or revert.
/// Candidates that fail lexing, duplicate an already-verified candidate, or
/// trip the cheat checker are rejected without a verifier run. Terminates
/// on success (plus a final cheat gate), step budget, wall-clock budget, or
/// an unrecoverable gateway/verifier error (Aborted, partial history kept).
RunResult prove(const ProofTask& task, const std::vector<ActionSpec>& registry,
                Verifier& verifier, ChatBackend& gateway,
                const OrchestratorOptions& options = {});

/// Acceptance rules. Strict: strictly fewer errors and no type/syntax
/// errors in `next`. TargetedRelaxed: `target` no longer present in `next`
/// and every error of `next` that was not in `prev` lies within
/// `split_span`; the count may grow. Timeouts and crashes never accept.
bool accept_candidate(const VerificationReport& prev,
                      const VerificationReport& next, const ActionSpec& action,
                      const VerificationError& target,
                      const std::optional<LineRange>& split_span);

/// Same as accept_candidate but also reports why a candidate was rejected.
bool judge_candidate(const VerificationReport& prev,
                     const VerificationReport& next, const ActionSpec& action,
                     const VerificationError& target,
                     const std::optional<LineRange>& split_span,
                     std::string& reason);

/// Numbered context: the enclosing function of the error line unioned with
/// +-radius lines around it. Without a usable line, the target function's
/// text (or the whole file when the name is unknown). The error message is
/// appended.
std::string focused_context(const std::string& source,
                            const VerificationError& error, int radius = 30,
                            const std::string& target_function = "");

/// The fixed instruction text handed to external CLI coding agents, with
/// the task's file name substituted in. Byte-stable for a given name.
/// Throws std::invalid_argument on an empty name.
std::string render_hands_off_prompt(const std::string& task_filename);

/// Rigid three-line planner reply parser ("action: <id>", "target: <line>",
/// "why: <text>"). Returns nullopt and fills `problem` when the reply is
/// unusable (unknown action, missing line, no matching error).
std::optional<PlannerDecision> parse_planner_reply(
    const std::string& content, const std::vector<const ActionSpec*>& offered,
    const VerificationReport& report, std::string& problem);

/// Union of the line ranges the applied replace texts occupy in the new
/// candidate; nullopt when none of them can be located.
std::optional<LineRange> compute_split_span(
    const std::string& new_source, const std::vector<SearchReplaceBlock>& blocks);

/// One-line-per-field JSON rendering of a RunResult (without sources).
std::string run_result_to_json(const RunResult& result);

}  // namespace proofsmith
