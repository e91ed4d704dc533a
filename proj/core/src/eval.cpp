#include "proofsmith/eval.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "proofsmith/bench.hpp"
#include "proofsmith/cheat.hpp"
#include "proofsmith/util.hpp"

namespace proofsmith {

double cost(long input_tokens, long output_tokens, const std::string& model_id,
            const PricingTable& pricing) {
  auto it = pricing.find(model_id);
  if (it == pricing.end())
    throw UnknownModel("no pricing for model '" + model_id + "'");
  return static_cast<double>(input_tokens) / 1e6 * it->second.input_usd_per_mtok +
         static_cast<double>(output_tokens) / 1e6 * it->second.output_usd_per_mtok;
}

CorrelationResult point_biserial(const std::vector<double>& sizes,
                                 const std::vector<bool>& successes) {
  const std::size_t n = sizes.size();
  if (n != successes.size())
    throw DegenerateInput("sizes and successes differ in length");
  if (n < 2) throw DegenerateInput("need at least two samples");

  double sum = 0.0, sum1 = 0.0, sum0 = 0.0;
  long n1 = 0, n0 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += sizes[i];
    if (successes[i]) {
      sum1 += sizes[i];
      ++n1;
    } else {
      sum0 += sizes[i];
      ++n0;
    }
  }
  if (n1 == 0 || n0 == 0)
    throw DegenerateInput("both outcome groups must be non-empty");

  const double mean = sum / static_cast<double>(n);
  double var = 0.0;
  for (double s : sizes) var += (s - mean) * (s - mean);
  var /= static_cast<double>(n);  // population variance
  if (var <= 0.0) throw DegenerateInput("sizes have zero variance");

  CorrelationResult r;
  r.n = static_cast<int>(n);
  r.m1 = sum1 / static_cast<double>(n1);
  r.m0 = sum0 / static_cast<double>(n0);
  r.p_group_fraction = static_cast<double>(n1) / static_cast<double>(n);
  const double q = 1.0 - r.p_group_fraction;
  r.r_pb = (r.m1 - r.m0) / std::sqrt(var) *
           std::sqrt(r.p_group_fraction * q);
  return r;
}

double union_success(
    const std::map<std::string, std::vector<std::pair<std::string, bool>>>&
        results_by_config) {
  if (results_by_config.empty())
    throw MismatchedTaskSets("no configurations given");
  std::set<std::string> reference;
  bool first = true;
  std::map<std::string, bool> solved;
  for (const auto& [config, results] : results_by_config) {
    std::set<std::string> ids;
    for (const auto& [task_id, success] : results) {
      ids.insert(task_id);
      solved[task_id] = solved[task_id] || success;
    }
    if (first) {
      reference = std::move(ids);
      first = false;
    } else if (ids != reference) {
      throw MismatchedTaskSets("configuration '" + config +
                               "' covers a different task set");
    }
  }
  if (reference.empty()) throw MismatchedTaskSets("empty task set");
  long wins = 0;
  for (const std::string& id : reference)
    if (solved[id]) ++wins;
  return static_cast<double>(wins) / static_cast<double>(reference.size());
}

// ---- ledger ----

std::string to_json_line(const EvalRecord& r) {
  nlohmann::json j;
  j["task_id"] = r.task_id;
  j["run"] = r.run;
  j["project"] = r.project;
  j["status"] = r.status;
  if (!r.detail.empty()) j["detail"] = r.detail;
  j["success"] = r.metrics.success;
  j["wall_time"] = r.metrics.wall_time;
  j["verifier_runs"] = r.metrics.verifier_runs;
  j["input_tokens"] = r.metrics.input_tokens;
  j["output_tokens"] = r.metrics.output_tokens;
  j["cost_usd"] = r.metrics.cost_usd;
  j["tokens_estimated"] = r.metrics.tokens_estimated;
  j["cheated"] = r.metrics.cheated;
  return j.dump();
}

EvalRecord eval_record_from_json(const std::string& line) {
  nlohmann::json j = nlohmann::json::parse(line);
  EvalRecord r;
  r.task_id = j.at("task_id").get<std::string>();
  r.run = j.value("run", 1);
  r.project = j.value("project", std::string());
  r.status = j.value("status", std::string());
  r.detail = j.value("detail", std::string());
  r.metrics.success = j.value("success", false);
  r.metrics.wall_time = j.value("wall_time", 0.0);
  r.metrics.verifier_runs = j.value("verifier_runs", 0);
  r.metrics.input_tokens = j.value("input_tokens", 0L);
  r.metrics.output_tokens = j.value("output_tokens", 0L);
  r.metrics.cost_usd = j.value("cost_usd", 0.0);
  r.metrics.tokens_estimated = j.value("tokens_estimated", false);
  r.metrics.cheated = j.value("cheated", false);
  return r;
}

std::vector<EvalRecord> load_ledger(const std::string& path) {
  std::vector<EvalRecord> out;
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception&) {
    return out;
  }
  for (const auto& line : split_lines(text)) {
    if (trim(line).empty()) continue;
    try {
      out.push_back(eval_record_from_json(line));
    } catch (const std::exception&) {
      // a torn final line from a killed run is expected; skip it
    }
  }
  return out;
}

void append_ledger(const std::string& path, const EvalRecord& record) {
  const std::string line = to_json_line(record) + "\n";
  int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0) throw std::runtime_error("cannot open ledger: " + path);
  ::flock(fd, LOCK_EX);
  ssize_t off = 0;
  while (off < static_cast<ssize_t>(line.size())) {
    ssize_t w = ::write(fd, line.data() + off, line.size() - off);
    if (w <= 0) break;
    off += w;
  }
  ::flock(fd, LOCK_UN);
  ::close(fd);
}

// ---- corpus execution ----

namespace {

void price_record(EvalRecord& rec, const CorpusOptions& options) {
  auto it = options.pricing.find(options.orchestrator.model_id);
  if (it == options.pricing.end()) return;
  rec.metrics.cost_usd = cost(rec.metrics.input_tokens,
                              rec.metrics.output_tokens,
                              options.orchestrator.model_id, options.pricing);
}

}  // namespace

std::vector<EvalRecord> run_corpus(const std::vector<ProofTask>& tasks,
                                   const VerifierFactory& make_verifier,
                                   const BackendFactory& make_backend,
                                   const std::vector<ActionSpec>& registry,
                                   const CorpusOptions& options) {
  std::set<std::pair<std::string, int>> done;
  std::vector<EvalRecord> results;
  if (!options.ledger_path.empty()) {
    for (auto& rec : load_ledger(options.ledger_path)) {
      done.emplace(rec.task_id, rec.run);
      results.push_back(std::move(rec));
    }
  }

  struct Job {
    const ProofTask* task;
    int run;
  };
  std::vector<Job> jobs;
  for (const ProofTask& task : tasks)
    for (int run = 1; run <= std::max(1, options.runs); ++run)
      if (!done.count({task.task_id, run})) jobs.push_back({&task, run});

  std::mutex results_mutex;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      const Job& job = jobs[i];
      EvalRecord rec;
      rec.task_id = job.task->task_id;
      rec.run = job.run;
      rec.project = job.task->project_tag;
      try {
        std::unique_ptr<Verifier> verifier = make_verifier();
        std::unique_ptr<ChatBackend> backend = make_backend(*job.task, job.run);
        RunResult rr = prove(*job.task, registry, *verifier, *backend,
                             options.orchestrator);
        rec.status = to_string(rr.status);
        rec.detail = rr.abort_reason;
        rec.metrics = rr.metrics;
        price_record(rec, options);
      } catch (const std::exception& e) {
        rec.status = "Aborted";
        rec.detail = e.what();
      }
      if (!options.ledger_path.empty())
        append_ledger(options.ledger_path, rec);
      std::lock_guard<std::mutex> lock(results_mutex);
      results.push_back(std::move(rec));
    }
  };

  const int workers =
      std::max(1, std::min<int>(options.parallel,
                                static_cast<int>(jobs.size() ? jobs.size() : 1)));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  // only the requested pairs, in a stable order
  std::set<std::pair<std::string, int>> wanted;
  for (const ProofTask& task : tasks)
    for (int run = 1; run <= std::max(1, options.runs); ++run)
      wanted.emplace(task.task_id, run);
  std::vector<EvalRecord> out;
  for (auto& rec : results)
    if (wanted.count({rec.task_id, rec.run})) out.push_back(std::move(rec));
  std::sort(out.begin(), out.end(), [](const EvalRecord& a, const EvalRecord& b) {
    if (a.task_id != b.task_id) return a.task_id < b.task_id;
    return a.run < b.run;
  });
  return out;
}

std::vector<EvalRecord> ingest_results(const std::vector<ProofTask>& tasks,
                                       const std::string& results_dir,
                                       Verifier& verifier,
                                       const CorpusOptions& options) {
  std::vector<EvalRecord> out;
  for (const ProofTask& task : tasks) {
    EvalRecord rec;
    rec.task_id = task.task_id;
    rec.project = task.project_tag;
    const std::string path =
        results_dir + "/" + task.task_id + "_verified.rs";
    std::string text;
    try {
      text = read_file(path);
    } catch (const std::exception&) {
      rec.status = "Missing";
      rec.detail = path + " not found";
      out.push_back(std::move(rec));
      continue;
    }
    rec.status = "Ingested";
    std::vector<CheatFinding> findings;
    bool lexed = true;
    try {
      findings = check_cheating(task.source, text);
    } catch (const LexError& e) {
      lexed = false;
      rec.detail = std::string("result does not lex: ") + e.what();
    }
    rec.metrics.cheated = !findings.empty();
    if (!findings.empty()) rec.detail = render_findings(findings);
    VerificationReport report = verifier.check(text, task.task_id);
    rec.metrics.verifier_runs = 1;
    rec.metrics.success = lexed && report.success() && findings.empty();
    price_record(rec, options);
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<ProofTask> load_corpus(const std::string& corpus_dir) {
  namespace fs = std::filesystem;
  std::vector<ProofTask> tasks;
  auto add = [&tasks](const fs::path& file, const std::string& project) {
    if (file.extension() != ".rs") return;
    ProofTask task;
    task.task_id = file.stem().string();
    task.source = read_file(file.string());
    task.project_tag = project;
    task.path = file.string();
    try {
      task.target_function = detect_target(extract_units(task.source));
    } catch (const LexError&) {
      // target stays empty; the run will record the lex failure
    }
    tasks.push_back(std::move(task));
  };
  for (const auto& entry : fs::directory_iterator(corpus_dir)) {
    if (entry.is_regular_file()) {
      add(entry.path(), "");
    } else if (entry.is_directory()) {
      for (const auto& sub : fs::directory_iterator(entry.path()))
        if (sub.is_regular_file())
          add(sub.path(), entry.path().filename().string());
    }
  }
  std::sort(tasks.begin(), tasks.end(),
            [](const ProofTask& a, const ProofTask& b) {
              return a.task_id < b.task_id;
            });
  return tasks;
}

// ---- reporting ----

namespace {

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

ReportTables report(const std::vector<EvalRecord>& ledger) {
  struct ProjectAgg {
    std::set<std::string> tasks;
    std::set<std::string> solved;
    std::vector<double> times;
    double cost = 0.0;
    long verifier_runs = 0;
    long records = 0;
  };
  std::map<std::string, ProjectAgg> projects;
  int max_run = 0;
  // task -> earliest run that solved it (0: unsolved)
  std::map<std::string, int> solved_at;
  std::set<std::string> all_tasks;

  for (const EvalRecord& rec : ledger) {
    const std::string project =
        rec.project.empty() ? std::string("(none)") : rec.project;
    ProjectAgg& agg = projects[project];
    agg.tasks.insert(rec.task_id);
    if (rec.metrics.success) agg.solved.insert(rec.task_id);
    agg.times.push_back(rec.metrics.wall_time);
    agg.cost += rec.metrics.cost_usd;
    agg.verifier_runs += rec.metrics.verifier_runs;
    ++agg.records;

    all_tasks.insert(rec.task_id);
    max_run = std::max(max_run, rec.run);
    if (rec.metrics.success) {
      auto it = solved_at.find(rec.task_id);
      if (it == solved_at.end() || rec.run < it->second)
        solved_at[rec.task_id] = rec.run;
    }
  }

  std::ostringstream csv, text;
  csv << "project,tasks,records,solved,success_pct,mean_time,median_time,"
         "total_cost_usd,mean_verifier_runs\n";
  char buf[256];
  text << "project            tasks  solved  success%   mean_t  median_t  "
          "cost_usd  runs/task\n";

  auto emit = [&](const std::string& name, const ProjectAgg& agg) {
    const double pct = agg.tasks.empty()
                           ? 0.0
                           : 100.0 * static_cast<double>(agg.solved.size()) /
                                 static_cast<double>(agg.tasks.size());
    double mean_t = 0.0;
    for (double t : agg.times) mean_t += t;
    if (!agg.times.empty()) mean_t /= static_cast<double>(agg.times.size());
    const double med_t = median_of(agg.times);
    const double mean_runs =
        agg.records ? static_cast<double>(agg.verifier_runs) /
                          static_cast<double>(agg.records)
                    : 0.0;
    csv << name << ',' << agg.tasks.size() << ',' << agg.records << ','
        << agg.solved.size() << ',' << fixed2(pct) << ',' << fixed2(mean_t)
        << ',' << fixed2(med_t) << ',' << fixed2(agg.cost) << ','
        << fixed2(mean_runs) << "\n";
    std::snprintf(buf, sizeof buf,
                  "%-18s %5zu  %6zu  %7.2f  %7.2f  %8.2f  %8.2f  %9.2f\n",
                  name.c_str(), agg.tasks.size(), agg.solved.size(), pct,
                  mean_t, med_t, agg.cost, mean_runs);
    text << buf;
  };

  ProjectAgg total;
  for (const auto& [name, agg] : projects) {
    emit(name, agg);
    total.tasks.insert(agg.tasks.begin(), agg.tasks.end());
    total.solved.insert(agg.solved.begin(), agg.solved.end());
    total.times.insert(total.times.end(), agg.times.begin(), agg.times.end());
    total.cost += agg.cost;
    total.verifier_runs += agg.verifier_runs;
    total.records += agg.records;
  }
  if (projects.size() > 1) emit("all", total);

  if (max_run > 1) {
    csv << "\nrun,accumulated_success_pct\n";
    text << "\naccumulated success by run:\n";
    for (int k = 1; k <= max_run; ++k) {
      long solved_k = 0;
      for (const auto& [task, at] : solved_at)
        if (at >= 1 && at <= k) ++solved_k;
      const double pct =
          all_tasks.empty() ? 0.0
                            : 100.0 * static_cast<double>(solved_k) /
                                  static_cast<double>(all_tasks.size());
      csv << k << ',' << fixed2(pct) << "\n";
      std::snprintf(buf, sizeof buf, "  run %d: %.2f%%\n", k, pct);
      text << buf;
    }
  }

  ReportTables tables;
  tables.csv = csv.str();
  tables.text = text.str();
  return tables;
}

}  // namespace proofsmith
