#include "proofsmith/bench.hpp"

#include <algorithm>
#include <sstream>

#include "proofsmith/lexer.hpp"
#include "proofsmith/util.hpp"

namespace proofsmith {

namespace {

enum class Bucket { None, Spec, Lemma, Target, Other };

std::string body_replacement(const FunctionUnit& unit) {
  if (unit.mode == FnMode::Proof) return "{}";
  if (trim(unit.exec_skeleton).empty()) return "{}";
  return "{\n    " + unit.exec_skeleton + "\n}";
}

}  // namespace

ProofTask strip_proofs(const ProofTask& verified) {
  ParsedFile pf = parse_file(verified.source);
  const FunctionUnit* target = find_unit(pf.units, verified.target_function);
  if (!target)
    throw NameNotFound("target function '" + verified.target_function +
                       "' not found");
  ProofTask out = verified;
  out.variant = TaskVariant::Unverified;
  if (!target->has_body || target->mode == FnMode::Spec) return out;
  std::string src = verified.source;
  src.replace(target->body_span.begin,
              target->body_span.end - target->body_span.begin,
              body_replacement(*target));
  out.source = std::move(src);
  return out;
}

std::string externalize_lemma(const std::string& source,
                              const std::string& lemma_name) {
  std::vector<FunctionUnit> units = extract_units(source);
  const FunctionUnit* unit = find_unit(units, lemma_name);
  if (!unit || unit->mode != FnMode::Proof || !unit->has_body)
    throw NameNotFound("no proof fn '" + lemma_name + "' with a body");

  std::string out = source;
  out.replace(unit->body_span.begin,
              unit->body_span.end - unit->body_span.begin,
              "{\n    unimplemented!()\n}");
  if (!unit->is_external_body) {
    std::size_t start = unit->item_span.begin;
    std::string indent;
    if (start > 0) {
      std::size_t nl = out.rfind('\n', start - 1);
      std::size_t from = (nl == std::string::npos) ? 0 : nl + 1;
      std::string prefix = out.substr(from, start - from);
      if (prefix.find_first_not_of(" \t") == std::string::npos)
        indent = prefix;
    }
    out.insert(start, "#[verifier::external_body]\n" + indent);
  }
  return out;
}

std::string detect_target(const std::vector<FunctionUnit>& units) {
  for (auto it = units.rbegin(); it != units.rend(); ++it)
    if (it->mode == FnMode::Exec &&
        (!it->requires_text.empty() || !it->ensures_text.empty()))
      return it->name;
  for (auto it = units.rbegin(); it != units.rend(); ++it)
    if (it->mode == FnMode::Proof && it->has_body) return it->name;
  return units.empty() ? std::string() : units.back().name;
}

LocStats compute_stats(const ProofTask& task) {
  ParsedFile pf = parse_file(task.source);
  const std::vector<std::string> lines = split_lines(task.source);
  const int n = static_cast<int>(lines.size());

  std::vector<bool> has_token(n + 1, false);
  for (const Token& t : pf.tokens)
    if (t.line >= 1 && t.line <= n) has_token[t.line] = true;

  std::vector<Bucket> bucket(n + 1, Bucket::None);
  auto mark = [&](int first, int last, Bucket b) {
    for (int l = std::max(1, first); l <= std::min(n, last); ++l)
      if (has_token[l] && bucket[l] == Bucket::None) bucket[l] = b;
  };

  LocStats stats;
  const FunctionUnit* target = find_unit(pf.units, task.target_function);

  auto is_helper = [&](const FunctionUnit& u) {
    return u.mode == FnMode::Proof && (&u != target);
  };

  // spec fns first: their clauses and bodies are all specification
  for (const auto& u : pf.units)
    if (u.mode == FnMode::Spec) mark(u.item_lines.first, u.item_lines.last, Bucket::Spec);

  // requires/ensures clauses of non-helper fns
  for (const auto& u : pf.units) {
    if (is_helper(u)) continue;
    for (const auto& c : u.clauses)
      if (c.keyword == "requires" || c.keyword == "ensures")
        mark(c.lines.first, c.lines.last, Bucket::Spec);
  }

  // helper proof fns: signature lines (clauses included) count as lemma
  // lines, body interiors as other
  for (const auto& u : pf.units) {
    if (!is_helper(u)) continue;
    ++stats.helper_lemma_count;
    if (u.has_body) {
      mark(u.item_lines.first, u.body_lines.first, Bucket::Lemma);
      mark(u.body_lines.first, u.body_lines.last, Bucket::Other);
    } else {
      mark(u.item_lines.first, u.item_lines.last, Bucket::Lemma);
    }
  }

  // target: proof constructs (and, for a proof-fn target, the whole body
  // interior) are its proof lines
  if (target) {
    for (const auto& c : proof_constructs(pf, *target))
      mark(c.lines.first, c.lines.last, Bucket::Target);
    if (target->mode == FnMode::Proof && target->has_body)
      mark(target->body_lines.first + 1, target->body_lines.last - 1,
           Bucket::Target);
  }

  // side measures over every unit
  for (const auto& u : pf.units) {
    stats.loops_count += count_loops(pf, u);
    for (const auto& c : proof_constructs(pf, u)) {
      if (c.kind != ProofConstructKind::LoopClause) continue;
      if (c.keyword != "invariant" && c.keyword != "invariant_except_break")
        continue;
      for (int l = std::max(1, c.lines.first);
           l <= std::min(n, c.lines.last); ++l)
        if (has_token[l]) ++stats.invariant_loc;
    }
  }

  for (int l = 1; l <= n; ++l) {
    if (!has_token[l]) continue;
    ++stats.total_loc;
    switch (bucket[l]) {
      case Bucket::Spec: ++stats.spec_loc; break;
      case Bucket::Lemma: ++stats.proof_loc_lemma; break;
      case Bucket::Target: ++stats.proof_loc_target; break;
      default: ++stats.other_loc; break;
    }
  }
  return stats;
}

std::string render_stats(const LocStats& stats) {
  std::ostringstream out;
  out << "total_loc=" << stats.total_loc << "\n"
      << "spec_loc=" << stats.spec_loc << "\n"
      << "proof_loc_lemma=" << stats.proof_loc_lemma << "\n"
      << "proof_loc_target=" << stats.proof_loc_target << "\n"
      << "other_loc=" << stats.other_loc << "\n"
      << "loops_count=" << stats.loops_count << "\n"
      << "invariant_loc=" << stats.invariant_loc << "\n"
      << "helper_lemma_count=" << stats.helper_lemma_count << "\n";
  return out.str();
}

std::string stats_csv_header() {
  return "task_id,total_loc,spec_loc,proof_loc_lemma,proof_loc_target,"
         "other_loc,loops_count,invariant_loc,helper_lemma_count";
}

std::string stats_csv_row(const std::string& task_id, const LocStats& s) {
  std::ostringstream out;
  out << task_id << ',' << s.total_loc << ',' << s.spec_loc << ','
      << s.proof_loc_lemma << ',' << s.proof_loc_target << ',' << s.other_loc
      << ',' << s.loops_count << ',' << s.invariant_loc << ','
      << s.helper_lemma_count;
  return out.str();
}

}  // namespace proofsmith
