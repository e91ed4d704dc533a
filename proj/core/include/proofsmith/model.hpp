#pragma once

#include <climits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace proofsmith {

enum class ErrorKind {
  AssertFailed,
  PreconditionFailed,
  PostconditionFailed,
  InvariantFailed,
  ArithmeticOverflow,
  TypeOrSyntax,
  Other,
};
const char* to_string(ErrorKind kind);
ErrorKind error_kind_from_string(const std::string& name);

struct VerificationError {
  ErrorKind kind = ErrorKind::Other;
  std::string message;   // headline of the rendered block
  int line = 0;          // 1-based; 0 when absent
  int column = 0;        // 0 when absent
  std::string code;      // rustc code such as E0308; empty otherwise
  std::string function;  // best-effort enclosing function name
  std::string raw;       // full rendered block

  /// Identity used to match errors across verifier runs: kind, line, and
  /// the first 80 chars of the whitespace-collapsed message.
  std::string identity_key() const;
  bool same_error(const VerificationError& other) const {
    return identity_key() == other.identity_key();
  }
};

enum class Outcome { Success, Failure, Timeout, CrashOrUnparsable };
const char* to_string(Outcome outcome);

struct VerificationReport {
  Outcome outcome = Outcome::CrashOrUnparsable;
  int verified_count = 0;
  int error_count = 0;  // never less than errors.size()
  std::vector<VerificationError> errors;
  std::string output;  // merged stdout+stderr as captured
  int exit_code = 0;
  double wall_seconds = 0.0;

  bool success() const { return outcome == Outcome::Success; }
  bool has_type_errors() const;
  /// Error count for ordering candidates; Timeout and CrashOrUnparsable
  /// dominate any finite count so they never look like progress.
  long comparable_errors() const {
    if (outcome == Outcome::Success) return 0;
    if (outcome == Outcome::Failure) return error_count;
    return LONG_MAX;
  }
};

enum class TaskVariant { Verified, Unverified };

struct ProofTask {
  std::string task_id;
  std::string source;           // full text of one self-contained file
  std::string target_function;  // the function whose proof is synthesized
  TaskVariant variant = TaskVariant::Unverified;
  std::string project_tag;  // optional corpus grouping
  std::string path;         // on-disk origin; may be empty
};

struct ProofCandidate {
  int candidate_id = 0;  // 0 is the unmodified task source
  int parent_id = -1;
  std::string source;
  std::string content_hash;
  std::string producing_action;  // empty for the root
  std::optional<VerificationReport> report;
  bool accepted = false;
};

enum class AttemptOutcome { Accepted, Rejected, ApplyFailed, LlmMalformed };
const char* to_string(AttemptOutcome outcome);

struct AttemptRecord {
  int step = 0;  // 1-based, strictly increasing within a log
  std::string action_id;
  VerificationError target_error;
  std::string diff_summary;  // digest of the applied search/replace blocks
  AttemptOutcome outcome = AttemptOutcome::Rejected;
  int errors_before = -1;  // -1: not measured
  int errors_after = -1;   // the spec'd resulting_error_count
  std::string detail;      // reject reason or failure message
};

struct HistoryLog {
  std::vector<AttemptRecord> records;
  double elapsed = 0.0;
  int best_candidate_id = 0;
};

/// Per-task run accounting, aggregated by the evaluation harness.
struct RunMetrics {
  bool success = false;  // verifier success AND a clean cheat check
  double wall_time = 0.0;
  int verifier_runs = 0;
  long input_tokens = 0;
  long output_tokens = 0;
  double cost_usd = 0.0;
  bool tokens_estimated = false;
  bool cheated = false;  // post-hoc cheat check on the final file
};

struct ModelPricing {
  double input_usd_per_mtok = 0.0;
  double output_usd_per_mtok = 0.0;
};

/// model_id -> per-million-token prices.
using PricingTable = std::map<std::string, ModelPricing>;

/// Plain-text digest of the log for planner prompts: one line per record,
/// most recent last. When the full text exceeds `budget` characters the
/// oldest records are elided (whole records only) and a marker inserted;
/// the kept tail is byte-identical to the unbudgeted render's tail.
std::string history_render(const HistoryLog& log, std::size_t budget = 4096);

std::string to_json_line(const AttemptRecord& record);
AttemptRecord attempt_from_json(const std::string& line);

}  // namespace proofsmith
