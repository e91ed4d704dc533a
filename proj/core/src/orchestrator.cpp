#include "proofsmith/orchestrator.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "proofsmith/analyzer.hpp"
#include "proofsmith/util.hpp"

namespace proofsmith {

const char* to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Proved: return "Proved";
    case RunStatus::StepBudgetExhausted: return "StepBudgetExhausted";
    case RunStatus::TimeBudgetExhausted: return "TimeBudgetExhausted";
    case RunStatus::Aborted: return "Aborted";
  }
  return "Aborted";
}

namespace {

void replace_all(std::string& text, const std::string& from, const std::string& to) {
  std::size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
}

// {F} is the task file, {V} the verified output file.
const char kHandsOffPrompt[] =
    "The file {F} cannot be verified by Verus, a verification tool for Rust "
    "programs, yet. Please add proof annotations to {F} so that it can be "
    "successfully verified by Verus, and write the resulting code with proof "
    "into a new file, {V}. Please invoke Verus to check the proof annotation "
    "you added. The vstd folder in the current directory is a copy of Verus' "
    "vstd definitions and helper lemmas; please feel free to check it when "
    "needed. You should KEEP editing your proof annotations until Verus shows "
    "there is no error. You should NOT change existing functions' "
    "pre-conditions or post-conditions; you should NOT change any executable "
    "Rust code; and you should NEVER use admit(...) or assume(...) in your "
    "code. You are also NOT allowed to create unimplemented, external-body "
    "lemma functions --- for any new lemma functions you add, you should "
    "provide complete proof. You are NOT allowed to create new axiom "
    "functions or change the pre/post conditions of existing axiom functions, "
    "and you should NEVER add external_body tag to any existing "
    "non-external-body functions. I have installed Verus locally; you can "
    "just run Verus. Before you are done, MAKE SURE to run verus-checker {V} "
    "to double check whether you have made any illegal changes to {F} (fix "
    "those if you did).";

std::string planner_format_lines() {
  return
      "action: <one id from the offered list>\n"
      "target: <line number of the error to attack>\n"
      "why: <one short sentence>";
}

std::string planner_system_prompt() {
  return
      "You are the planning agent of a Verus proof-repair loop. Pick the "
      "single most promising next action.\n"
      "Reply with exactly three lines and nothing else:\n" +
      planner_format_lines() + "\n";
}

// The error the planner prompt focuses on when the report carries none
// (e.g. a summary-only failure): line 0 with the outcome as the message.
VerificationError planner_focus_error(const VerificationReport& report) {
  if (!report.errors.empty()) return report.errors.front();
  VerificationError e;
  e.kind = ErrorKind::Other;
  e.line = 0;
  e.message = std::string("verifier outcome: ") + to_string(report.outcome) +
              ", " + std::to_string(report.error_count) + " error(s)";
  return e;
}

std::string planner_user_prompt(const ProofTask& task,
                                const VerificationReport& report,
                                const std::vector<const ActionSpec*>& offered,
                                const std::vector<std::string>& boost_notes,
                                const HistoryLog& history,
                                const std::string& focused) {
  std::ostringstream out;
  out << "Task " << task.task_id << ", target function `"
      << task.target_function << "`.\n";
  out << "Verifier result: " << to_string(report.outcome) << ", "
      << report.error_count << " error(s).\n";
  if (!report.errors.empty()) {
    out << "Errors:\n";
    for (const auto& e : report.errors)
      out << "- line " << e.line << " [" << to_string(e.kind)
          << "]: " << e.message << "\n";
  }
  out << "\nOffered actions (most promising first):\n";
  for (std::size_t i = 0; i < offered.size(); ++i) {
    out << "- " << offered[i]->action_id << " ["
        << to_string(offered[i]->category) << "]: " << offered[i]->description;
    if (!boost_notes[i].empty()) out << " (" << boost_notes[i] << ")";
    out << "\n";
  }
  out << "\n" << when_to_use_tutorial() << "\n";
  out << history_render(history) << "\n";
  out << "\nFocused code around the target:\n" << focused;
  return out.str();
}

std::string findings_digest(const std::vector<CheatFinding>& findings) {
  const CheatFinding& f = findings.front();
  std::string text = std::string(to_string(f.rule)) + " in " +
                     (f.function.empty() ? std::string("(file)") : f.function);
  if (findings.size() > 1)
    text += " (+" + std::to_string(findings.size() - 1) + " more)";
  return text;
}

}  // namespace

std::string render_hands_off_prompt(const std::string& task_filename) {
  if (task_filename.empty())
    throw std::invalid_argument("task filename must be non-empty");
  std::string stem = task_filename;
  if (stem.size() > 3 && stem.compare(stem.size() - 3, 3, ".rs") == 0)
    stem.erase(stem.size() - 3);
  std::string text = kHandsOffPrompt;
  replace_all(text, "{F}", stem + ".rs");
  replace_all(text, "{V}", stem + "_verified.rs");
  return text;
}

std::string focused_context(const std::string& source,
                            const VerificationError& error, int radius,
                            const std::string& target_function) {
  std::vector<std::string> lines = split_lines(source);
  const long n = static_cast<long>(lines.size());
  const bool have_line = error.line >= 1 && error.line <= n;

  std::vector<FunctionUnit> units;
  try {
    units = extract_units(source);
  } catch (const LexError&) {
    units.clear();
  }

  long first = 1, last = n;
  if (have_line) {
    first = std::max<long>(1, error.line - radius);
    last = std::min<long>(n, error.line + radius);
    if (const FunctionUnit* u = enclosing_unit(units, error.line)) {
      first = std::min<long>(first, u->item_lines.first);
      last = std::max<long>(last, u->item_lines.last);
    }
  } else if (!target_function.empty()) {
    if (const FunctionUnit* u = find_unit(units, target_function)) {
      first = u->item_lines.first;
      last = u->item_lines.last;
    }
  }

  std::ostringstream out;
  char buf[32];
  for (long i = first; i <= last && i >= 1; ++i) {
    std::snprintf(buf, sizeof buf, "%5ld| ", i);
    out << buf << lines[static_cast<std::size_t>(i - 1)] << '\n';
  }
  if (have_line)
    out << "error at line " << error.line << ": " << error.message << '\n';
  else if (!error.message.empty())
    out << "error: " << error.message << '\n';
  return out.str();
}

std::optional<LineRange> compute_split_span(
    const std::string& new_source,
    const std::vector<SearchReplaceBlock>& blocks) {
  bool any = false;
  int lo = 0, hi = 0;
  for (const auto& b : blocks) {
    if (trim(b.replace).empty()) continue;  // pure deletion adds no region
    std::size_t pos = new_source.find(b.replace);
    if (pos == std::string::npos) continue;
    int line = 1;
    for (std::size_t i = 0; i < pos; ++i)
      if (new_source[i] == '\n') ++line;
    long newlines = std::count(b.replace.begin(), b.replace.end(), '\n');
    if (!b.replace.empty() && b.replace.back() == '\n') --newlines;
    int end = line + static_cast<int>(newlines);
    if (!any) {
      lo = line;
      hi = end;
      any = true;
    } else {
      lo = std::min(lo, line);
      hi = std::max(hi, end);
    }
  }
  if (!any) return std::nullopt;
  return LineRange{lo, hi};
}

bool judge_candidate(const VerificationReport& prev,
                     const VerificationReport& next, const ActionSpec& action,
                     const VerificationError& target,
                     const std::optional<LineRange>& split_span,
                     std::string& reason) {
  if (next.outcome == Outcome::Timeout) {
    reason = "verifier timed out";
    return false;
  }
  if (next.outcome == Outcome::CrashOrUnparsable) {
    reason = "verifier output unparsable";
    return false;
  }
  if (action.acceptance == Acceptance::Strict) {
    if (next.has_type_errors()) {
      reason = "introduced type or syntax errors";
      return false;
    }
    if (next.comparable_errors() >= prev.comparable_errors()) {
      reason = "error count did not strictly decrease (" +
               std::to_string(prev.error_count) + " -> " +
               std::to_string(next.error_count) + ")";
      return false;
    }
    return true;
  }
  // TargetedRelaxed: the targeted error must be gone and any error not
  // already present before must fall inside the edited region.
  for (const auto& e : next.errors) {
    if (e.same_error(target)) {
      reason = "targeted error still present at line " + std::to_string(e.line);
      return false;
    }
  }
  for (const auto& e : next.errors) {
    bool known = false;
    for (const auto& p : prev.errors) {
      if (e.same_error(p)) {
        known = true;
        break;
      }
    }
    if (known) continue;
    if (!split_span || !split_span->contains(e.line)) {
      reason =
          "new error outside the edited region (line " + std::to_string(e.line) + ")";
      return false;
    }
  }
  return true;
}

bool accept_candidate(const VerificationReport& prev,
                      const VerificationReport& next, const ActionSpec& action,
                      const VerificationError& target,
                      const std::optional<LineRange>& split_span) {
  std::string reason;
  return judge_candidate(prev, next, action, target, split_span, reason);
}

std::optional<PlannerDecision> parse_planner_reply(
    const std::string& content, const std::vector<const ActionSpec*>& offered,
    const VerificationReport& report, std::string& problem) {
  std::string action_id, target_text, why;
  bool saw_action = false, saw_target = false, saw_why = false;
  for (const auto& raw : split_lines(content)) {
    std::string line = trim(raw);
    auto take = [&](const char* prefix, std::string& dst, bool& flag) {
      std::size_t n = std::strlen(prefix);
      if (!flag && line.size() >= n && line.compare(0, n, prefix) == 0) {
        dst = trim(line.substr(n));
        flag = true;
        return true;
      }
      return false;
    };
    if (take("action:", action_id, saw_action)) continue;
    if (take("target:", target_text, saw_target)) continue;
    take("why:", why, saw_why);
  }
  if (!saw_action || action_id.empty()) {
    problem = "missing 'action:' line";
    return std::nullopt;
  }
  const ActionSpec* chosen = nullptr;
  for (const auto* a : offered) {
    if (a->action_id == action_id) {
      chosen = a;
      break;
    }
  }
  if (!chosen) {
    problem = "action '" + action_id + "' is not among the offered actions";
    return std::nullopt;
  }
  if (!saw_target || target_text.empty()) {
    problem = "missing 'target:' line";
    return std::nullopt;
  }
  long line_no = 0;
  try {
    std::size_t used = 0;
    line_no = std::stol(target_text, &used);
    if (used != target_text.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    problem = "target line '" + target_text + "' is not a number";
    return std::nullopt;
  }

  PlannerDecision decision;
  decision.action_id = action_id;
  decision.rationale = why;
  if (report.errors.empty()) {
    decision.target_error.kind = ErrorKind::Other;
    decision.target_error.line = static_cast<int>(line_no);
    decision.target_error.message = "verification failed";
  } else {
    const VerificationError* match = nullptr;
    for (const auto& e : report.errors) {
      if (e.line == line_no) {
        match = &e;
        break;
      }
    }
    if (!match) {
      problem = "no reported error at line " + std::to_string(line_no);
      return std::nullopt;
    }
    decision.target_error = *match;
  }
  return decision;
}

RunResult prove(const ProofTask& task, const std::vector<ActionSpec>& registry,
                Verifier& verifier, ChatBackend& gateway,
                const OrchestratorOptions& options) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  auto elapsed = [&t0] {
    return std::chrono::duration<double>(clock::now() - t0).count();
  };

  RunResult result;
  const int runs_before = verifier.runs();
  int best = 0;

  std::vector<ProofCandidate>& cands = result.candidates;
  HistoryLog& history = result.history;
  std::map<std::string, int> seen;  // content hash -> candidate id (-1: screened out)

  auto add_candidate = [&cands](const std::string& src, int parent,
                                const std::string& action) {
    const int id = static_cast<int>(cands.size());
    ProofCandidate c;
    c.candidate_id = id;
    c.parent_id = parent;
    c.source = src;
    c.content_hash = hash_hex(src);
    c.producing_action = action;
    cands.push_back(std::move(c));
    return id;
  };

  auto chat = [&](const std::vector<ChatMessage>& messages) {
    ChatRequest req;
    req.messages = messages;
    req.model_id = options.model_id;
    req.max_output_tokens = options.max_output_tokens;
    req.temperature = options.temperature;
    ChatResponse resp = gateway.complete(req);
    result.metrics.input_tokens += resp.input_tokens;
    result.metrics.output_tokens += resp.output_tokens;
    if (resp.tokens_estimated) result.metrics.tokens_estimated = true;
    return resp.content;
  };

  RunStatus status = RunStatus::Aborted;
  try {
    if (registry.empty()) throw std::invalid_argument("empty action registry");

    add_candidate(task.source, -1, "");
    cands[0].report = verifier.check(task.source, "task");
    cands[0].accepted = true;
    seen[cands[0].content_hash] = 0;

    for (int step = 1;; ++step) {
      if (cands[best].report->success()) {
        status = RunStatus::Proved;
        break;
      }
      if (step > options.budget.max_steps) {
        status = RunStatus::StepBudgetExhausted;
        break;
      }
      if (options.budget.max_wall_time > 0 &&
          elapsed() >= options.budget.max_wall_time) {
        status = RunStatus::TimeBudgetExhausted;
        break;
      }

      // Values copied up front: cands may reallocate later in the step.
      const int parent = best;
      const std::string cur_source = cands[parent].source;
      const VerificationReport prev_report = *cands[parent].report;

      ProofTask shadow = task;
      shadow.source = cur_source;
      CodeFacts facts;
      try {
        facts = analyze(shadow);
      } catch (const LexError&) {
        facts = CodeFacts{};  // a non-lexing root still gets repair offers
      }
      std::vector<const ActionSpec*> offered =
          applicable_actions(registry, facts);
      if (offered.empty())
        throw std::runtime_error("no applicable actions for this task");
      std::vector<std::string> notes;
      notes.reserve(offered.size());
      for (const ActionSpec* a : offered) {
        std::string note;
        for (const auto& b : a->priority_boosts) {
          if (b.when && b.when(facts) && !b.note.empty()) {
            if (!note.empty()) note += "; ";
            note += b.note;
          }
        }
        notes.push_back(note);
      }

      // Plan: rigid three-line protocol, two re-prompts, then the step is
      // recorded as LlmMalformed and the loop moves on.
      const std::string plan_focus = focused_context(
          cur_source, planner_focus_error(prev_report), options.context_radius,
          task.target_function);
      std::vector<ChatMessage> pmsgs{
          {Role::System, planner_system_prompt()},
          {Role::User, planner_user_prompt(task, prev_report, offered, notes,
                                           history, plan_focus)}};
      std::optional<PlannerDecision> decision;
      std::string problem;
      for (int attempt = 0; attempt < 3 && !decision; ++attempt) {
        std::string content = chat(pmsgs);
        decision = parse_planner_reply(content, offered, prev_report, problem);
        if (!decision && attempt < 2) {
          pmsgs.push_back({Role::Assistant, content});
          pmsgs.push_back({Role::User,
                           "Your reply could not be used: " + problem +
                               "\nReply with exactly three lines:\n" +
                               planner_format_lines()});
        }
      }
      if (!decision) {
        history.records.push_back({step, "(planner)", VerificationError{},
                                   "", AttemptOutcome::LlmMalformed,
                                   prev_report.error_count,
                                   prev_report.error_count,
                                   "planner reply unusable: " + problem});
        continue;
      }

      // Act: render the action prompt, parse blocks, apply. One re-prompt
      // covers both malformed output and a failed application.
      const ActionSpec& action = *find_action(registry, decision->action_id);
      std::map<std::string, std::string> slots = {
          {"target_function", task.target_function},
          {"error_line", std::to_string(decision->target_error.line)},
          {"error_message", decision->target_error.message},
          {"focused_context",
           focused_context(cur_source, decision->target_error,
                           options.context_radius, task.target_function)},
          {"diff_format", diff_format_instructions()},
      };
      std::vector<ChatMessage> amsgs{
          {Role::System,
           "You are a Verus proof-repair specialist executing one focused "
           "edit."},
          {Role::User, render_template(action.prompt_template, slots)}};

      std::vector<SearchReplaceBlock> blocks;
      std::string new_source;
      bool have_candidate = false;
      AttemptOutcome failure = AttemptOutcome::LlmMalformed;
      std::string failure_detail;
      for (int attempt = 0; attempt < 2 && !have_candidate; ++attempt) {
        std::string content = chat(amsgs);
        std::string retry_reason;
        try {
          blocks = parse_blocks(content);
          if (blocks.empty()) {
            failure = AttemptOutcome::LlmMalformed;
            retry_reason = "no edit blocks found in the reply";
          }
        } catch (const MalformedDiff& e) {
          blocks.clear();
          failure = AttemptOutcome::LlmMalformed;
          retry_reason = e.what();
        }
        if (retry_reason.empty()) {
          try {
            new_source = apply_blocks(cur_source, blocks);
            have_candidate = true;
            break;
          } catch (const ApplyError& e) {
            failure = AttemptOutcome::ApplyFailed;
            retry_reason = e.what();
          }
        }
        failure_detail = retry_reason;
        if (attempt == 0) {
          amsgs.push_back({Role::Assistant, content});
          amsgs.push_back({Role::User, "That edit could not be used: " +
                                           retry_reason + "\n" +
                                           diff_format_instructions()});
        }
      }
      if (!have_candidate) {
        history.records.push_back({step, action.action_id,
                                   decision->target_error,
                                   describe_blocks(blocks), failure,
                                   prev_report.error_count,
                                   prev_report.error_count, failure_detail});
        continue;
      }

      const std::string diff_summary = describe_blocks(blocks);
      const std::string chash = hash_hex(new_source);
      auto it = seen.find(chash);
      if (it != seen.end()) {
        history.records.push_back(
            {step, action.action_id, decision->target_error, diff_summary,
             AttemptOutcome::Rejected, prev_report.error_count,
             prev_report.error_count,
             it->second >= 0
                 ? "duplicate of candidate " + std::to_string(it->second) +
                       "; not re-verified"
                 : "duplicate of an earlier screened-out edit"});
        continue;
      }

      // Legality screen before spending a verifier run: the candidate must
      // lex and must not trip any cheating rule.
      std::vector<CheatFinding> findings;
      try {
        findings = check_cheating(task.source, new_source);
      } catch (const LexError& e) {
        seen.emplace(chash, -1);
        history.records.push_back(
            {step, action.action_id, decision->target_error, diff_summary,
             AttemptOutcome::Rejected, prev_report.error_count,
             prev_report.error_count,
             std::string("candidate does not lex: ") + e.what()});
        continue;
      }
      if (!findings.empty()) {
        seen.emplace(chash, -1);
        history.records.push_back(
            {step, action.action_id, decision->target_error, diff_summary,
             AttemptOutcome::Rejected, prev_report.error_count,
             prev_report.error_count,
             "cheat check: " + findings_digest(findings)});
        continue;
      }

      const int cid = add_candidate(new_source, parent, action.action_id);
      seen.emplace(chash, cid);
      cands[cid].report = verifier.check(new_source, "task");

      std::optional<LineRange> split;
      if (action.acceptance == Acceptance::TargetedRelaxed)
        split = compute_split_span(new_source, blocks);
      std::string reason;
      const bool ok = judge_candidate(prev_report, *cands[cid].report, action,
                                      decision->target_error, split, reason);
      history.records.push_back(
          {step, action.action_id, decision->target_error, diff_summary,
           ok ? AttemptOutcome::Accepted : AttemptOutcome::Rejected,
           prev_report.error_count, cands[cid].report->error_count,
           ok ? std::string() : reason});
      if (ok) {
        cands[cid].accepted = true;
        best = cid;
      }
      // On rejection `best` is untouched: the next step works on the best
      // accepted candidate again (reversion).
    }

    if (status == RunStatus::Proved) {
      // Final gate, not assumed: Proved additionally requires a clean
      // cheat check of the final file against the task.
      std::vector<CheatFinding> gate = check_cheating(task.source, cands[best].source);
      if (!gate.empty()) {
        status = RunStatus::Aborted;
        result.metrics.cheated = true;
        result.abort_reason = "final cheat gate: " + findings_digest(gate);
      }
    }
  } catch (const std::exception& e) {
    status = RunStatus::Aborted;
    result.abort_reason = e.what();
  }

  result.status = status;
  result.final_candidate_id = best;
  result.final_source = cands.empty() ? task.source : cands[best].source;
  result.steps_used = static_cast<int>(history.records.size());
  result.wall_time = elapsed();
  history.elapsed = result.wall_time;
  history.best_candidate_id = best;
  result.metrics.success = (status == RunStatus::Proved);
  result.metrics.wall_time = result.wall_time;
  result.metrics.verifier_runs = verifier.runs() - runs_before;
  return result;
}

std::string run_result_to_json(const RunResult& result) {
  nlohmann::json j;
  j["status"] = to_string(result.status);
  j["final_candidate_id"] = result.final_candidate_id;
  j["steps_used"] = result.steps_used;
  j["wall_time"] = result.wall_time;
  j["candidates"] = result.candidates.size();
  if (!result.abort_reason.empty()) j["abort_reason"] = result.abort_reason;
  j["metrics"] = {
      {"success", result.metrics.success},
      {"wall_time", result.metrics.wall_time},
      {"verifier_runs", result.metrics.verifier_runs},
      {"input_tokens", result.metrics.input_tokens},
      {"output_tokens", result.metrics.output_tokens},
      {"cost_usd", result.metrics.cost_usd},
      {"tokens_estimated", result.metrics.tokens_estimated},
      {"cheated", result.metrics.cheated},
  };
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& rec : result.history.records)
    hist.push_back(nlohmann::json::parse(to_json_line(rec)));
  j["history"] = hist;
  return j.dump(2);
}

}  // namespace proofsmith
