// Command-line front end: cheat checking, task statistics, task
// preparation, the proof loop, proof minimization, corpus evaluation, and
// prompt rendering.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "proofsmith/analyzer.hpp"
#include "proofsmith/bench.hpp"
#include "proofsmith/cheat.hpp"
#include "proofsmith/config.hpp"
#include "proofsmith/eval.hpp"
#include "proofsmith/minimizer.hpp"
#include "proofsmith/orchestrator.hpp"
#include "proofsmith/util.hpp"

namespace ps = proofsmith;
namespace fs = std::filesystem;

namespace {

std::string stem_of(const std::string& path) {
  return fs::path(path).stem().string();
}

ps::ProofTask load_task(const std::string& path, const std::string& target) {
  ps::ProofTask task;
  task.task_id = stem_of(path);
  task.source = ps::read_file(path);
  task.path = path;
  task.target_function =
      target.empty() ? ps::detect_target(ps::extract_units(task.source))
                     : target;
  return task;
}

int cmd_check_cheat(const std::string& original, const std::string& modified) {
  std::vector<ps::CheatFinding> findings =
      ps::check_cheating(ps::read_file(original), ps::read_file(modified));
  if (findings.empty()) {
    std::cout << "no cheating detected\n";
    return 0;
  }
  std::cout << ps::render_findings(findings);
  return 1;
}

int cmd_stats(const std::string& path, const std::string& target,
              bool features, bool csv) {
  ps::ProofTask task = load_task(path, target);
  ps::LocStats stats = ps::compute_stats(task);
  if (csv) {
    std::cout << ps::stats_csv_header() << "\n"
              << ps::stats_csv_row(task.task_id, stats) << "\n";
  } else {
    std::cout << ps::render_stats(stats);
  }
  if (features)
    std::cout << ps::render_profile(ps::profile_features(task.source));
  return 0;
}

int cmd_extract(const std::string& path, const std::string& target,
                std::string out) {
  ps::ProofTask task = load_task(path, target);
  task.variant = ps::TaskVariant::Verified;
  ps::ProofTask stripped = ps::strip_proofs(task);
  if (out.empty())
    out = (fs::path(path).parent_path() / (task.task_id + "_unverified.rs"))
              .string();
  ps::write_file(out, stripped.source);
  std::cout << "wrote " << out << " (target " << task.target_function << ")\n";
  return 0;
}

int cmd_prove(const std::string& path, const std::string& config_path,
              const std::string& replay, const std::string& target,
              std::string out_dir) {
  ps::ToolConfig config = ps::load_config(config_path);
  if (!replay.empty()) {
    config.gateway.mode = "replay";
    config.gateway.replay_path = replay;
  }
  ps::ProofTask task = load_task(path, target);
  std::unique_ptr<ps::Verifier> verifier = ps::make_verifier(config);
  std::unique_ptr<ps::ChatBackend> backend = ps::make_backend(config, task);
  std::vector<ps::ActionSpec> registry = ps::build_registry(config);

  ps::RunResult result = ps::prove(task, registry, *verifier, *backend,
                                   ps::orchestrator_options(config));

  if (out_dir.empty()) out_dir = fs::path(path).parent_path().string();
  if (out_dir.empty()) out_dir = ".";
  fs::create_directories(out_dir);
  const std::string base = out_dir + "/" + task.task_id;
  if (result.status == ps::RunStatus::Proved)
    ps::write_file(base + "_verified.rs", result.final_source);
  std::string history;
  for (const auto& rec : result.history.records)
    history += ps::to_json_line(rec) + "\n";
  ps::write_file(base + ".history.jsonl", history);
  ps::write_file(base + ".result.json", ps::run_result_to_json(result) + "\n");

  std::cout << "status: " << ps::to_string(result.status)
            << "  steps: " << result.steps_used
            << "  verifier runs: " << result.metrics.verifier_runs << "\n";
  if (!result.abort_reason.empty())
    std::cout << "abort reason: " << result.abort_reason << "\n";
  return result.status == ps::RunStatus::Proved ? 0 : 2;
}

int cmd_minimize(const std::string& original_path,
                 const std::string& verified_path,
                 const std::string& config_path, const std::string& target,
                 int budget) {
  ps::ToolConfig config = ps::load_config(config_path);
  ps::ProofTask original = load_task(original_path, target);
  const std::string verified = ps::read_file(verified_path);
  std::unique_ptr<ps::Verifier> verifier = ps::make_verifier(config);

  const int before = ps::proof_line_count(original, verified);
  ps::MinimizeResult result =
      ps::minimize(original, verified, *verifier, budget);
  const int after = ps::proof_line_count(original, result.text);

  const std::string out =
      (fs::path(verified_path).parent_path() /
       (stem_of(verified_path) + "_min.rs"))
          .string();
  ps::write_file(out, result.text);
  std::cout << "proof lines: " << before << " -> " << after
            << (result.minimal ? "" : " (run budget hit; not 1-minimal)")
            << "\nwrote " << out << "\n";
  return 0;
}

int cmd_eval(const std::string& corpus_dir, const std::string& config_path,
             int parallel, int runs, const std::string& ingest_dir,
             const std::string& ledger_path, const std::string& csv_path) {
  ps::ToolConfig config = ps::load_config(config_path);
  std::vector<ps::ProofTask> tasks = ps::load_corpus(corpus_dir);
  if (tasks.empty()) {
    std::cout << "no tasks under " << corpus_dir << "\n";
    return 0;
  }
  ps::CorpusOptions options;
  options.parallel = parallel > 0 ? parallel : config.eval_parallel;
  options.runs = runs > 0 ? runs : config.eval_runs;
  options.ledger_path = ledger_path;
  options.pricing = config.pricing;
  options.orchestrator = ps::orchestrator_options(config);

  std::vector<ps::EvalRecord> records;
  if (!ingest_dir.empty()) {
    std::unique_ptr<ps::Verifier> verifier = ps::make_verifier(config);
    records = ps::ingest_results(tasks, ingest_dir, *verifier, options);
    if (!ledger_path.empty())
      for (const auto& rec : records) ps::append_ledger(ledger_path, rec);
  } else {
    records = ps::run_corpus(
        tasks, [&config] { return ps::make_verifier(config); },
        [&config](const ps::ProofTask& task, int run) {
          return ps::make_backend(config, task, run);
        },
        ps::build_registry(config), options);
  }

  ps::ReportTables tables = ps::report(records);
  std::cout << tables.text;
  if (!csv_path.empty()) {
    ps::write_file(csv_path, tables.csv);
    std::cout << "wrote " << csv_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proof-synthesis orchestration toolkit for Verus tasks"};
  app.require_subcommand(1);

  // check-cheat
  std::string cc_original, cc_modified;
  CLI::App* check = app.add_subcommand(
      "check-cheat", "report no-cheating-rule violations between two files");
  check->add_option("original", cc_original, "task file")->required();
  check->add_option("modified", cc_modified, "candidate file")->required();

  // stats
  std::string st_file, st_target;
  bool st_features = false, st_csv = false;
  CLI::App* stats =
      app.add_subcommand("stats", "line-of-code and feature statistics");
  stats->add_option("file", st_file, "task file")->required();
  stats->add_option("--target", st_target, "target function name");
  stats->add_flag("--features", st_features, "append a feature profile");
  stats->add_flag("--csv", st_csv, "CSV output");

  // extract-unverified
  std::string ex_file, ex_target, ex_out;
  CLI::App* extract = app.add_subcommand(
      "extract-unverified", "strip the target's proof annotations");
  extract->add_option("file", ex_file, "verified task file")->required();
  extract->add_option("--target", ex_target, "target function name");
  extract->add_option("--out", ex_out, "output path");

  // prove
  std::string pr_file, pr_config, pr_replay, pr_target, pr_out;
  CLI::App* prove = app.add_subcommand("prove", "run the proof loop");
  prove->add_option("task", pr_file, "task file")->required();
  prove->add_option("--config", pr_config, "JSON config")->required();
  prove->add_option("--replay", pr_replay, "replay transcript override");
  prove->add_option("--target", pr_target, "target function name");
  prove->add_option("--out-dir", pr_out, "output directory");

  // minimize
  std::string mn_original, mn_verified, mn_config, mn_target;
  int mn_budget = 200;
  CLI::App* minimize =
      app.add_subcommand("minimize", "shrink added proof annotations");
  minimize->add_option("original", mn_original, "original task file")
      ->required();
  minimize->add_option("verified", mn_verified, "verified file")->required();
  minimize->add_option("--config", mn_config, "JSON config")->required();
  minimize->add_option("--target", mn_target, "target function name");
  minimize->add_option("--budget", mn_budget, "verifier-run budget");

  // eval
  std::string ev_corpus, ev_config, ev_ingest, ev_ledger, ev_csv;
  int ev_parallel = 0, ev_runs = 0;
  CLI::App* eval = app.add_subcommand("eval", "batch-run a task corpus");
  eval->add_option("corpus", ev_corpus, "corpus directory")->required();
  eval->add_option("--config", ev_config, "JSON config")->required();
  eval->add_option("--parallel", ev_parallel, "worker count");
  eval->add_option("--runs", ev_runs, "repetitions per task");
  eval->add_option("--ingest", ev_ingest,
                   "score pre-produced *_verified.rs from this directory");
  eval->add_option("--ledger", ev_ledger, "JSON-lines results ledger");
  eval->add_option("--report-csv", ev_csv, "write the CSV report here");

  // prompt
  std::string pm_file;
  CLI::App* prompt = app.add_subcommand(
      "prompt", "print the fixed instruction text for CLI coding agents");
  prompt->add_option("task_filename", pm_file, "task file name")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check_cheat(cc_original, cc_modified);
    if (stats->parsed())
      return cmd_stats(st_file, st_target, st_features, st_csv);
    if (extract->parsed()) return cmd_extract(ex_file, ex_target, ex_out);
    if (prove->parsed())
      return cmd_prove(pr_file, pr_config, pr_replay, pr_target, pr_out);
    if (minimize->parsed())
      return cmd_minimize(mn_original, mn_verified, mn_config, mn_target,
                          mn_budget);
    if (eval->parsed())
      return cmd_eval(ev_corpus, ev_config, ev_parallel, ev_runs, ev_ingest,
                      ev_ledger, ev_csv);
    if (prompt->parsed()) {
      std::cout << ps::render_hands_off_prompt(pm_file) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
