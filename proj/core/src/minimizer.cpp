#include "proofsmith/minimizer.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "proofsmith/cheat.hpp"
#include "proofsmith/lexer.hpp"
#include "proofsmith/util.hpp"

namespace proofsmith {

namespace {

bool clause_is_removable(const std::string& keyword) {
  return keyword == "invariant" || keyword == "invariant_except_break" ||
         keyword == "decreases";
}

bool construct_is_removable(const ProofConstruct& c) {
  switch (c.kind) {
    case ProofConstructKind::AssertStmt:
    case ProofConstructKind::ProofBlock:
    case ProofConstructKind::BroadcastUse:
      return true;
    case ProofConstructKind::LoopClause:
      return clause_is_removable(c.keyword);
    case ProofConstructKind::CallStmt:
      return c.in_proof_context;
    case ProofConstructKind::GhostLet:
      return false;  // bindings may be referenced; never offered
  }
  return false;
}

bool name_used(const std::string& text, const std::string& name) {
  for (const Token& t : lex(text))
    if (t.kind == TokenKind::Ident && t.text == name) return true;
  return false;
}

/// `broadcast use path, ...;` at module level (outside every function item);
/// proof_constructs only sees statements inside bodies.
std::vector<ProofConstruct> module_broadcast_uses(const ParsedFile& file) {
  std::vector<ProofConstruct> out;
  auto inside_unit = [&file](std::size_t off) {
    for (const auto& u : file.units)
      if (off >= u.item_span.begin && off < u.item_span.end) return true;
    return false;
  };
  const auto& toks = file.tokens;
  for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
    if (toks[i].kind != TokenKind::Ident || toks[i].text != "broadcast") continue;
    if (toks[i + 1].kind != TokenKind::Ident || toks[i + 1].text != "use") continue;
    if (inside_unit(toks[i].offset)) continue;
    std::size_t j = i + 2;
    while (j < toks.size() && toks[j].text != ";") ++j;
    if (j >= toks.size()) break;
    ProofConstruct c;
    c.kind = ProofConstructKind::BroadcastUse;
    c.span = {toks[i].offset, toks[j].end};
    c.lines = {toks[i].line, toks[j].line};
    c.normalized = normalize_tokens(
        std::vector<Token>(toks.begin() + i, toks.begin() + j + 1));
    out.push_back(std::move(c));
    i = j;
  }
  return out;
}

std::string delete_spans(const std::string& text,
                         std::vector<ByteSpan> spans) {
  std::sort(spans.begin(), spans.end(),
            [](const ByteSpan& a, const ByteSpan& b) { return a.begin < b.begin; });
  std::string out = text;
  for (auto it = spans.rbegin(); it != spans.rend(); ++it) {
    std::size_t b = it->begin;
    std::size_t e = std::min(it->end, out.size());
    if (b >= e) continue;
    // trailing-separator cleanup: absorb whitespace up to and including
    // one newline so deleted statements do not leave blank lines behind
    while (e < out.size() && (out[e] == ' ' || out[e] == '\t')) ++e;
    if (e < out.size() && out[e] == '\n') ++e;
    out.erase(b, e - b);
  }
  return out;
}

struct BudgetStop {};

class Search {
 public:
  Search(const ProofTask& original, const std::string& verified,
         Verifier& verifier, int budget)
      : original_(original),
        verified_(verified),
        verifier_(verifier),
        budget_(budget) {}

  int runs_used = 0;

  std::string build(const std::vector<bool>& keep,
                    const std::vector<RemovableUnit>& units) const {
    std::vector<ByteSpan> remove;
    for (std::size_t i = 0; i < units.size(); ++i)
      if (!keep[i]) remove.push_back(units[i].span);
    if (remove.empty()) return verified_;
    return delete_spans(verified_, std::move(remove));
  }

  /// Verifier verdict for a keep-set; legality vetoes and cache hits do
  /// not consume budget.
  bool passes(const std::vector<bool>& keep,
              const std::vector<RemovableUnit>& units) {
    std::string text = build(keep, units);
    if (!lexes_cleanly(text)) return false;
    for (std::size_t i = 0; i < units.size(); ++i) {
      if (keep[i] || units[i].helper_name.empty()) continue;
      if (name_used(text, units[i].helper_name)) return false;
    }
    const std::string h = hash_hex(text);
    auto it = cache_.find(h);
    if (it != cache_.end()) return it->second;
    if (runs_used >= budget_) throw BudgetStop{};
    ++runs_used;
    const bool ok = verifier_.check(text, "minimize").success();
    cache_.emplace(h, ok);
    return ok;
  }

 private:
  const ProofTask& original_;
  const std::string& verified_;
  Verifier& verifier_;
  int budget_;
  std::map<std::string, bool> cache_;
};

}  // namespace

std::vector<RemovableUnit> removable_units(const ProofTask& original,
                                           const std::string& verified) {
  ParsedFile vf = parse_file(verified);
  ParsedFile of = parse_file(original.source);

  std::set<std::string> orig_names;
  for (const auto& u : of.units) orig_names.insert(u.name);
  std::multiset<std::string> orig_constructs;
  for (const auto& u : of.units)
    for (const auto& c : proof_constructs(of, u))
      orig_constructs.insert(c.normalized);
  for (const auto& c : module_broadcast_uses(of))
    orig_constructs.insert(c.normalized);

  std::vector<RemovableUnit> out;
  for (const auto& c : module_broadcast_uses(vf)) {
    auto it = orig_constructs.find(c.normalized);
    if (it != orig_constructs.end()) {
      orig_constructs.erase(it);
      continue;
    }
    RemovableUnit r;
    r.label = std::string(to_string(c.kind)) + "@" + std::to_string(c.lines.first);
    r.span = c.span;
    r.lines = c.lines;
    out.push_back(std::move(r));
  }
  for (const auto& u : vf.units) {
    if (u.mode == FnMode::Proof && !orig_names.count(u.name)) {
      RemovableUnit r;
      r.label = "fn " + u.name;
      r.span = u.item_span;
      r.lines = u.item_lines;
      r.helper_name = u.name;
      out.push_back(std::move(r));
      continue;  // internal constructs travel with the fn
    }
    for (const auto& c : proof_constructs(vf, u)) {
      if (!construct_is_removable(c)) continue;
      auto it = orig_constructs.find(c.normalized);
      if (it != orig_constructs.end()) {
        orig_constructs.erase(it);  // pre-existing construct, not ours to delete
        continue;
      }
      RemovableUnit r;
      r.label = std::string(to_string(c.kind)) + "@" +
                std::to_string(c.lines.first);
      r.span = c.span;
      r.lines = c.lines;
      out.push_back(std::move(r));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const RemovableUnit& a, const RemovableUnit& b) {
              if (a.span.begin != b.span.begin) return a.span.begin < b.span.begin;
              return a.span.end > b.span.end;
            });
  // keep outermost only: a unit nested in the previous survivor would be
  // deleted twice
  std::vector<RemovableUnit> top;
  std::size_t covered_end = 0;
  for (auto& r : out) {
    if (r.span.begin < covered_end && r.span.end <= covered_end) continue;
    covered_end = std::max(covered_end, r.span.end);
    top.push_back(std::move(r));
  }
  return top;
}

MinimizeResult minimize(const ProofTask& original, const std::string& verified,
                        Verifier& verifier, int max_verifier_runs) {
  Search search(original, verified, verifier, max_verifier_runs);

  VerificationReport base = verifier.check(verified, "minimize");
  search.runs_used = 1;
  if (!base.success()) throw NotVerified("input does not verify");
  std::vector<CheatFinding> pre = check_cheating(original.source, verified);
  if (!pre.empty())
    throw NotVerified("input fails the cheat check: " + render_findings(pre));

  std::vector<RemovableUnit> units = removable_units(original, verified);
  MinimizeResult result;
  result.units_total = static_cast<int>(units.size());
  if (units.empty()) {
    result.text = verified;
    result.verifier_runs = search.runs_used;
    return result;
  }

  std::vector<bool> keep(units.size(), true);
  auto kept_count = [&keep] {
    return static_cast<int>(std::count(keep.begin(), keep.end(), true));
  };

  bool budget_hit = false;
  try {
    // halving passes: drop whole chunks of the kept set while possible
    int gran = 2;
    while (kept_count() > 0) {
      std::vector<std::size_t> kept_idx;
      for (std::size_t i = 0; i < keep.size(); ++i)
        if (keep[i]) kept_idx.push_back(i);
      const int k = static_cast<int>(kept_idx.size());
      gran = std::min(gran, k);
      bool progress = false;
      for (int c = 0; c < gran && !progress; ++c) {
        const std::size_t lo = kept_idx.size() * c / gran;
        const std::size_t hi = kept_idx.size() * (c + 1) / gran;
        if (lo == hi) continue;
        std::vector<bool> trial = keep;
        for (std::size_t j = lo; j < hi; ++j) trial[kept_idx[j]] = false;
        if (search.passes(trial, units)) {
          keep = trial;
          progress = true;
        }
      }
      if (progress) {
        gran = std::max(2, gran - 1);
        continue;
      }
      if (gran >= k) break;
      gran = std::min(k, 2 * gran);
    }
    // singleton fixpoint: 1-minimality
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < keep.size(); ++i) {
        if (!keep[i]) continue;
        std::vector<bool> trial = keep;
        trial[i] = false;
        if (search.passes(trial, units)) {
          keep = trial;
          changed = true;
        }
      }
    }
  } catch (const BudgetStop&) {
    budget_hit = true;
  }

  std::string text = search.build(keep, units);
  // safety gate: the survivor must still pass the cheat check; deletions
  // of added units cannot introduce cheating, so a finding here is a bug
  // and the input is returned instead
  std::vector<CheatFinding> gate = check_cheating(original.source, text);
  if (!gate.empty()) {
    text = verified;
    std::fill(keep.begin(), keep.end(), true);
    budget_hit = true;
  }

  result.text = std::move(text);
  result.minimal = !budget_hit;
  result.verifier_runs = search.runs_used;
  result.units_removed =
      static_cast<int>(keep.size()) - kept_count();
  for (std::size_t i = 0; i < keep.size(); ++i)
    if (keep[i]) result.kept_labels.push_back(units[i].label);
  return result;
}

int proof_line_count(const ProofTask& original, const std::string& verified) {
  ParsedFile vf = parse_file(verified);
  std::vector<std::string> vlines = split_lines(verified);
  const int n = static_cast<int>(vlines.size());

  std::vector<bool> has_token(n + 1, false), all_delim(n + 1, true);
  auto is_delim = [](const std::string& t) {
    return t == "{" || t == "}" || t == "(" || t == ")" || t == "[" ||
           t == "]" || t == ";" || t == ",";
  };
  for (const Token& t : vf.tokens) {
    if (t.line < 1 || t.line > n) continue;
    has_token[t.line] = true;
    if (!is_delim(t.text)) all_delim[t.line] = false;
  }

  std::set<std::string> orig_names;
  for (const auto& u : extract_units(original.source))
    orig_names.insert(u.name);

  std::set<int> picked;
  auto add_range = [&picked, n](const LineRange& r) {
    if (r.empty()) return;
    for (int l = std::max(1, r.first); l <= std::min(n, r.last); ++l)
      picked.insert(l);
  };
  for (const auto& u : vf.units) {
    const bool added_proof_fn =
        u.mode == FnMode::Proof && !orig_names.count(u.name);
    if (added_proof_fn) {
      add_range(u.item_lines);
      continue;
    }
    if (u.mode == FnMode::Proof && u.has_body &&
        u.body_lines.last > u.body_lines.first + 1)
      add_range(LineRange{u.body_lines.first + 1, u.body_lines.last - 1});
    for (const auto& c : proof_constructs(vf, u)) add_range(c.lines);
  }
  for (const auto& c : module_broadcast_uses(vf)) add_range(c.lines);

  std::multiset<std::string> orig_pool;
  for (const auto& line : split_lines(original.source)) {
    std::string t = trim(line);
    if (!t.empty()) orig_pool.insert(t);
  }

  int count = 0;
  for (int l : picked) {
    if (!has_token[l] || all_delim[l]) continue;
    std::string t = trim(vlines[l - 1]);
    auto it = orig_pool.find(t);
    if (it != orig_pool.end()) {
      orig_pool.erase(it);
      continue;
    }
    ++count;
  }
  return count;
}

}  // namespace proofsmith
