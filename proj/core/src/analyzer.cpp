#include "proofsmith/analyzer.hpp"

#include <sstream>

namespace proofsmith {

namespace {

bool is_word(const Token& t, const char* w) {
  return t.kind == TokenKind::Ident && t.text == w;
}

bool is_p(const Token& t, const char* w) {
  return t.kind == TokenKind::Punct && t.text == w;
}

std::string unqualified(const std::string& name) {
  std::size_t pos = name.rfind("::");
  return pos == std::string::npos ? name : name.substr(pos + 2);
}

bool tokens_contain_ident(const std::vector<Token>& toks, std::size_t b,
                          std::size_t e, const std::string& word) {
  for (std::size_t i = b; i < e && i < toks.size(); ++i)
    if (toks[i].kind == TokenKind::Ident && toks[i].text == word) return true;
  return false;
}

}  // namespace

CodeFacts analyze(const ProofTask& task) {
  CodeFacts facts;
  ParsedFile file = parse_file(task.source);

  const FunctionUnit* target = find_unit(file.units, task.target_function);

  for (const FunctionUnit& u : file.units) {
    if (u.mode == FnMode::Proof && !u.is_external && &u != target)
      facts.lemmas.push_back(u.name);
    if (u.is_opaque) facts.opaque_functions.push_back(u.name);
    bool self_call =
        u.has_body && tokens_contain_ident(file.tokens, u.body_tok_begin,
                                           u.body_tok_end, unqualified(u.name));
    if (u.has_decreases || self_call)
      facts.recursive_functions.push_back(u.name);
    facts.loops_count += count_loops(file, u);
  }

  if (target) {
    facts.exec_target = target->mode == FnMode::Exec;
    // scan the whole item: clauses and body both carry quantified obligations
    for (const Token& t : file.tokens) {
      if (t.offset < target->item_span.begin) continue;
      if (t.offset >= target->item_span.end) break;
      if (t.kind == TokenKind::Ident && (t.text == "forall" || t.text == "exists")) {
        facts.has_quantified_goals = true;
        break;
      }
    }
  }
  return facts;
}

FeatureProfile profile_features(const std::string& source) {
  FeatureProfile p;
  ParsedFile file = parse_file(source);
  const std::vector<Token>& toks = file.tokens;

  for (std::size_t i = 0; i < toks.size(); ++i) {
    const Token& t = toks[i];
    if (is_word(t, "assert") && i + 1 < toks.size() && is_word(toks[i + 1], "forall"))
      p.assert_forall = true;
    if ((is_word(t, "choose") || is_word(t, "exists")) && i + 1 < toks.size() &&
        is_p(toks[i + 1], "|"))
      p.choose_exists = true;
    if (is_word(t, "by") && i + 2 < toks.size() && is_p(toks[i + 1], "(")) {
      const Token& mode = toks[i + 2];
      if (is_word(mode, "bit_vector")) p.bit_vector_mode = true;
      else if (is_word(mode, "nonlinear_arith")) p.nonlinear_mode = true;
      else if (is_word(mode, "compute") || is_word(mode, "compute_only"))
        p.compute_mode = true;
    }
    if (is_word(t, "vstd") && i + 2 < toks.size() && is_p(toks[i + 1], "::") &&
        is_word(toks[i + 2], "arithmetic"))
      p.vstd_arithmetic_use = true;
    if (is_word(t, "broadcast") && i + 1 < toks.size() && is_word(toks[i + 1], "use")) {
      for (std::size_t j = i + 2; j < toks.size() && !is_p(toks[j], ";"); ++j) {
        if (is_word(toks[j], "vstd")) {
          p.vstd_arithmetic_use = true;
          break;
        }
      }
    }
    if (is_word(t, "assert") && i + 2 < toks.size() && is_p(toks[i + 1], "(") &&
        is_word(toks[i + 2], "false"))
      p.contradiction = true;
  }

  for (const FunctionUnit& u : file.units) {
    if (u.mode != FnMode::Proof || !u.has_decreases || !u.has_body) continue;
    if (tokens_contain_ident(toks, u.body_tok_begin, u.body_tok_end,
                             unqualified(u.name))) {
      p.induction = true;
      break;
    }
  }
  return p;
}

std::string render_profile(const FeatureProfile& p) {
  std::ostringstream ss;
  auto line = [&](const char* name, bool v) {
    ss << name << '=' << (v ? "true" : "false") << '\n';
  };
  line("assert_forall", p.assert_forall);
  line("choose_exists", p.choose_exists);
  line("bit_vector_mode", p.bit_vector_mode);
  line("nonlinear_mode", p.nonlinear_mode);
  line("compute_mode", p.compute_mode);
  line("vstd_arithmetic_use", p.vstd_arithmetic_use);
  line("induction", p.induction);
  line("contradiction", p.contradiction);
  return ss.str();
}

}  // namespace proofsmith
