#include "proofsmith/cheat.hpp"

#include <map>
#include <sstream>

namespace proofsmith {

namespace {

bool externalish(const FunctionUnit& u) { return u.is_external_body || u.is_external; }

std::string external_attr_name(const FunctionUnit& u) {
  return u.is_external_body ? "external_body" : "external";
}

}  // namespace

const char* to_string(CheatRule rule) {
  switch (rule) {
    case CheatRule::AssumeAdmit: return "AssumeAdmit";
    case CheatRule::NewUnimplementedLemma: return "NewUnimplementedLemma";
    case CheatRule::NewAxiom: return "NewAxiom";
    case CheatRule::AxiomSignatureChanged: return "AxiomSignatureChanged";
    case CheatRule::ExternalBodyAdded: return "ExternalBodyAdded";
    case CheatRule::SignatureChanged: return "SignatureChanged";
    case CheatRule::ExecCodeChanged: return "ExecCodeChanged";
    case CheatRule::FunctionRemoved: return "FunctionRemoved";
  }
  return "?";
}

std::vector<CheatFinding> check_cheating(const std::string& original,
                                         const std::string& modified) {
  std::vector<CheatFinding> findings;

  ParsedFile mod_file = parse_file(modified);
  std::vector<FunctionUnit> orig_units = extract_units(original);

  for (const Token& t : find_assume_admit(mod_file.tokens)) {
    const FunctionUnit* owner = enclosing_unit(mod_file.units, t.line);
    findings.push_back({CheatRule::AssumeAdmit, owner ? owner->name : "(file)",
                        t.line, t.text + "() found"});
  }

  std::map<std::string, const FunctionUnit*> orig_by_name;
  for (const FunctionUnit& u : orig_units)
    orig_by_name.emplace(u.name, &u);

  std::map<std::string, const FunctionUnit*> mod_by_name;
  for (const FunctionUnit& u : mod_file.units)
    mod_by_name.emplace(u.name, &u);

  for (const FunctionUnit& m : mod_file.units) {
    auto it = orig_by_name.find(m.name);
    const FunctionUnit* o = it == orig_by_name.end() ? nullptr : it->second;
    int line = m.item_lines.first;

    if (!o) {
      if (m.body_text == "unimplemented ! ( )" || m.body_text == "todo ! ( )")
        findings.push_back({CheatRule::NewUnimplementedLemma, m.name, line,
                            "new function with stub body " + m.body_text});
      if (externalish(m))
        findings.push_back({CheatRule::ExternalBodyAdded, m.name, line,
                            "new function marked " + external_attr_name(m)});
      if (m.is_axiom)
        findings.push_back(
            {CheatRule::NewAxiom, m.name, line, "new axiom-marked function"});
      continue;
    }

    if (externalish(m) && !externalish(*o))
      findings.push_back({CheatRule::ExternalBodyAdded, m.name, line,
                          external_attr_name(m) + " added to an existing function"});

    bool clauses_changed =
        m.requires_text != o->requires_text || m.ensures_text != o->ensures_text;
    if (o->is_axiom || m.is_axiom) {
      if (clauses_changed)
        findings.push_back({CheatRule::AxiomSignatureChanged, m.name, line,
                            "axiom requires/ensures text changed"});
      if (m.is_axiom && !o->is_axiom)
        findings.push_back({CheatRule::NewAxiom, m.name, line,
                            "axiom marker added to an existing function"});
      continue;
    }

    if (clauses_changed) {
      std::string which = m.requires_text != o->requires_text ? "requires" : "ensures";
      findings.push_back({CheatRule::SignatureChanged, m.name, line,
                          which + " clause text changed"});
    }
    if (o->mode == FnMode::Spec && m.body_text != o->body_text)
      findings.push_back({CheatRule::SignatureChanged, m.name, line,
                          "spec function body changed"});
    if (o->mode == FnMode::Exec && m.mode == FnMode::Exec &&
        m.exec_skeleton != o->exec_skeleton)
      findings.push_back({CheatRule::ExecCodeChanged, m.name, line,
                          "executable code differs outside proof constructs"});
    if (o->mode != m.mode)
      findings.push_back({CheatRule::ExecCodeChanged, m.name, line,
                          std::string("function mode changed from ") +
                              to_string(o->mode) + " to " + to_string(m.mode)});
  }

  for (const FunctionUnit& o : orig_units) {
    if (mod_by_name.count(o.name)) continue;
    findings.push_back({CheatRule::FunctionRemoved, o.name, 0,
                        "function present in the original is missing"});
  }

  return findings;
}

std::string render_findings(const std::vector<CheatFinding>& findings) {
  std::ostringstream ss;
  for (const CheatFinding& f : findings) {
    ss << to_string(f.rule) << '\t' << f.function << '\t';
    if (f.line > 0) ss << f.line;
    else ss << '-';
    ss << '\t' << f.detail << '\n';
  }
  return ss.str();
}

}  // namespace proofsmith
