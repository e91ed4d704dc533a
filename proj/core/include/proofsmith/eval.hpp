#pragma once

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "proofsmith/gateway.hpp"
#include "proofsmith/model.hpp"
#include "proofsmith/orchestrator.hpp"
#include "proofsmith/verifier.hpp"

namespace proofsmith {

class DegenerateInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class UnknownModel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class MismatchedTaskSets : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// input/output token spend priced per million tokens.
/// Throws UnknownModel when model_id is not in the table.
double cost(long input_tokens, long output_tokens, const std::string& model_id,
            const PricingTable& pricing);

struct CorrelationResult {
  double r_pb = 0.0;
  double p_group_fraction = 0.0;  // success fraction p (q = 1 - p)
  double m1 = 0.0;                // mean size of the success group
  double m0 = 0.0;                // mean size of the failure group
  int n = 0;
};

/// r_pb = (m1 - m0) / s_n * sqrt(p * q), with s_n the population standard
/// deviation; analytically equal to the Pearson correlation against 0/1
/// coded outcomes. Throws DegenerateInput when n < 2, the lists differ in
/// length, either group is empty, or the sizes have zero variance.
CorrelationResult point_biserial(const std::vector<double>& sizes,
                                 const std::vector<bool>& successes);

/// Fraction of task_ids solved by at least one configuration. Every
/// configuration must cover the same task_id set, else MismatchedTaskSets.
double union_success(
    const std::map<std::string, std::vector<std::pair<std::string, bool>>>&
        results_by_config);

// ---- corpus execution and the results ledger ----

struct EvalRecord {
  std::string task_id;
  int run = 1;  // 1-based repetition index
  std::string project;
  std::string status;  // RunStatus name, "Ingested", or "Missing"
  std::string detail;
  RunMetrics metrics;
};

std::string to_json_line(const EvalRecord& record);
EvalRecord eval_record_from_json(const std::string& line);

/// Missing file reads as an empty ledger; unparsable lines are skipped.
std::vector<EvalRecord> load_ledger(const std::string& path);

/// Appends one JSON line under an exclusive flock (safe across processes).
void append_ledger(const std::string& path, const EvalRecord& record);

struct CorpusOptions {
  int parallel = 1;
  int runs = 1;
  std::string ledger_path;  // empty: keep results in memory only
  PricingTable pricing;
  OrchestratorOptions orchestrator;
};

using VerifierFactory = std::function<std::unique_ptr<Verifier>()>;
/// Per-(task, run) backend; replay corpora map each task to its own
/// transcript.
using BackendFactory =
    std::function<std::unique_ptr<ChatBackend>(const ProofTask& task, int run)>;

/// Proves every (task, run) pair not already in the ledger, in a bounded
/// worker pool, appending each record as it completes (resume-after-crash).
/// A per-task failure is recorded as Aborted, never fatal to the batch.
/// Returns the records of all requested pairs (ledgered ones included),
/// sorted by (task_id, run).
std::vector<EvalRecord> run_corpus(const std::vector<ProofTask>& tasks,
                                   const VerifierFactory& make_verifier,
                                   const BackendFactory& make_backend,
                                   const std::vector<ActionSpec>& registry,
                                   const CorpusOptions& options);

/// Scores pre-produced `<task_id>_verified.rs` files: success requires a
/// verifier Success and a clean cheat check; a missing or non-lexing file
/// scores a failure.
std::vector<EvalRecord> ingest_results(const std::vector<ProofTask>& tasks,
                                       const std::string& results_dir,
                                       Verifier& verifier,
                                       const CorpusOptions& options);

/// Reads a corpus directory: every `*.rs` directly inside it (project tag
/// empty) or one level down (`<project>/<task>.rs`, tagged). task_id is the
/// file stem; the target function is auto-detected. Sorted by task_id.
std::vector<ProofTask> load_corpus(const std::string& corpus_dir);

struct ReportTables {
  std::string csv;
  std::string text;  // aligned columns for terminals
};

/// Per-project success/time/cost/verifier-run aggregates plus the
/// accumulated success fraction over repeated runs (a task counts as
/// solved once any run solved it). Deterministic for a given ledger.
ReportTables report(const std::vector<EvalRecord>& ledger);

}  // namespace proofsmith
