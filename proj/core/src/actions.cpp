#include "proofsmith/actions.hpp"

#include <algorithm>
#include <stdexcept>

namespace proofsmith {

const char* to_string(ActionCategory category) {
  switch (category) {
    case ActionCategory::LogicalReasoning: return "logical-reasoning";
    case ActionCategory::ArithmeticSolvers: return "arithmetic-solvers";
    case ActionCategory::ProofContext: return "proof-context";
    case ActionCategory::Quantifier: return "quantifier";
    case ActionCategory::SyntaxRepair: return "syntax-repair";
    case ActionCategory::LoopInvariant: return "loop-invariant";
  }
  return "?";
}

const char* to_string(Acceptance acceptance) {
  return acceptance == Acceptance::Strict ? "strict" : "targeted-relaxed";
}

namespace {

const char* kSharedHeader =
    "You are editing a Verus (verified Rust) file to make its proof go "
    "through. The verifier rejected the current version.\n"
    "\n"
    "Target function: {{target_function}}\n"
    "Failing check (line {{error_line}}): {{error_message}}\n"
    "\n"
    "Relevant code with line numbers:\n"
    "{{focused_context}}\n"
    "\n";

const char* kSharedRules =
    "\n"
    "Rules: only add or adjust proof annotations (asserts, proof blocks, "
    "loop invariants, lemma calls, helper proof functions with complete "
    "bodies). Never touch executable code, requires/ensures clauses of "
    "existing functions, or use assume/admit/external_body/axiom markers.\n"
    "\n"
    "{{diff_format}}";

std::string make_template(const std::string& strategy) {
  return std::string(kSharedHeader) + strategy + kSharedRules;
}

bool always(const CodeFacts&) { return true; }

}  // namespace

std::vector<ActionSpec> default_registry() {
  std::vector<ActionSpec> registry;

  auto add = [&](ActionSpec spec) { registry.push_back(std::move(spec)); };

  add({"case-analysis", ActionCategory::LogicalReasoning,
       "Split the failing obligation into exhaustive cases (if/else on the "
       "deciding condition, or match on an enum) and prove each branch "
       "separately with its own asserts. Use when one assertion hides "
       "several distinct situations.",
       make_template(
           "Strategy: introduce a case split around the failing fact. Wrap "
           "the relevant proof in `if cond { ... } else { ... }` (or a "
           "match) so each branch carries asserts specialized to that case. "
           "It is fine if individual branches need further work; keep all "
           "new asserts inside the block you introduce."),
       always, Acceptance::TargetedRelaxed, {}});

  add({"split-assertion", ActionCategory::LogicalReasoning,
       "Decompose one large failing assertion into a chain of smaller "
       "stepping-stone asserts leading to the goal. Use when the gap "
       "between known facts and the goal is too wide for one SMT query.",
       make_template(
           "Strategy: replace the failing assert with a sequence of smaller "
           "asserts that build up to it, each an easy consequence of the "
           "previous one. Keep every new assert inside the region you edit."),
       always, Acceptance::TargetedRelaxed, {}});

  add({"induction", ActionCategory::LogicalReasoning,
       "Prove a property of a recursive definition by calling the enclosing "
       "lemma on a structurally smaller argument (the induction hypothesis) "
       "guarded by a decreases clause.",
       make_template(
           "Strategy: make the proof inductive. Ensure the enclosing proof "
           "fn has a `decreases` clause, then call it recursively on the "
           "smaller argument before asserting the goal, so the induction "
           "hypothesis is in scope."),
       always, Acceptance::Strict,
       {{[](const CodeFacts& f) { return !f.recursive_functions.empty(); }, 2,
         "recursive definitions detected"}}});

  add({"nonlinear-arithmetic", ActionCategory::ArithmeticSolvers,
       "Discharge multiplication/division/modulo facts with the dedicated "
       "nonlinear solver: assert the fact `by (nonlinear_arith)` with the "
       "needed bounds in a requires clause.",
       make_template(
           "Strategy: state the failing arithmetic fact as "
           "`assert(...) by (nonlinear_arith) requires <bounds>;`. The "
           "solver sees only what the requires clause carries, so include "
           "every bound on the variables involved."),
       always, Acceptance::Strict, {}});

  add({"bit-vector", ActionCategory::ArithmeticSolvers,
       "Discharge shift/mask/overflow facts with the bit-vector solver: "
       "assert the fact `by (bit_vector)` with needed bounds in a requires "
       "clause.",
       make_template(
           "Strategy: state the failing bit-level fact as "
           "`assert(...) by (bit_vector) requires <bounds>;`. Bit-vector "
           "mode cannot see outer context, so restate any needed bounds "
           "inside the requires clause."),
       always, Acceptance::Strict, {}});

  add({"integer-ring", ActionCategory::ArithmeticSolvers,
       "Discharge polynomial identities and modular-equation facts with "
       "ring reasoning (`by (integer_ring)`), which handles equalities "
       "linear solvers and nonlinear heuristics miss.",
       make_template(
           "Strategy: state the failing polynomial or modular identity as a "
           "lemma or assert proved `by (integer_ring)`. Only equalities "
           "(and mod-equalities) belong there; move inequalities out."),
       always, Acceptance::Strict, {}});

  add({"reveal-opaque", ActionCategory::ProofContext,
       "Reveal the definition of an opaque function at the failure site "
       "(`reveal(f)` or `reveal_with_fuel(f, n)`) so the verifier can "
       "unfold it.",
       make_template(
           "Strategy: the failing fact likely depends on the body of an "
           "opaque or fueled function. Add `reveal(<function>);` (or "
           "`reveal_with_fuel(<function>, 2);` for recursive definitions) "
           "in a proof block right before the failing line."),
       [](const CodeFacts& f) { return !f.opaque_functions.empty(); },
       Acceptance::Strict,
       {{[](const CodeFacts& f) { return !f.opaque_functions.empty(); }, 1,
         "opaque functions present"}}});

  add({"use-lemma", ActionCategory::ProofContext,
       "Call an existing helper lemma (from this file or vstd) whose "
       "ensures clause supplies the missing fact, instantiated with the "
       "concrete arguments at the failure site.",
       make_template(
           "Strategy: pick a helper lemma whose conclusion matches the "
           "missing fact and call it with the right arguments just before "
           "the failing line (inside a proof block when in exec code). "
           "Broadcast lemmas can be brought in with `broadcast use path;`."),
       [](const CodeFacts& f) { return !f.lemmas.empty(); }, Acceptance::Strict,
       {{[](const CodeFacts& f) { return !f.lemmas.empty(); }, 1,
         "helper lemmas available"}}});

  add({"instantiate-forall", ActionCategory::Quantifier,
       "Make a universally quantified fact usable by asserting its "
       "instantiation at the concrete witnesses the failing goal needs "
       "(triggering), or prove a forall goal with `assert forall ... by`.",
       make_template(
           "Strategy: the proof is stuck on a `forall`. Either assert the "
           "specific instantiation the goal needs (so the trigger fires), "
           "or prove the quantified goal directly with "
           "`assert forall|x: T| P(x) implies Q(x) by { ... }`."),
       [](const CodeFacts& f) { return f.has_quantified_goals; },
       Acceptance::Strict,
       {{[](const CodeFacts& f) { return f.has_quantified_goals; }, 1,
         "quantified obligations in the target"}}});

  add({"instantiate-exists", ActionCategory::Quantifier,
       "Prove an existential goal by exhibiting a witness (`choose` a "
       "value, or assert the property at an explicit witness term).",
       make_template(
           "Strategy: the goal is an `exists`. Construct the witness "
           "explicitly: assert the body at the witness term, or bind it "
           "with `let w = choose|x: T| P(x);` and derive the goal from "
           "P(w)."),
       [](const CodeFacts& f) { return f.has_quantified_goals; },
       Acceptance::Strict, {}});

  add({"add-loop-invariant", ActionCategory::LoopInvariant,
       "Add or strengthen loop invariants so the loop body and exit carry "
       "the facts the rest of the proof needs.",
       make_template(
           "Strategy: the failure traces to a loop. Add `invariant` "
           "clauses to the loop header capturing what stays true across "
           "iterations (bounds, partial sums, relations between indexes "
           "and data), and a `decreases` clause when termination is in "
           "question."),
       [](const CodeFacts& f) { return f.loops_count > 0; }, Acceptance::Strict,
       {{[](const CodeFacts& f) { return f.loops_count > 0; }, 2,
         "loops present in the task"}}});

  add({"add-assert-context", ActionCategory::ProofContext,
       "State an intermediate fact the verifier already knows how to prove "
       "so it becomes available context for the failing obligation.",
       make_template(
           "Strategy: add one or two plain asserts stating facts that are "
           "obviously true at that point (from requires clauses, earlier "
           "branches, or definitions) and that together imply the failing "
           "goal."),
       always, Acceptance::Strict, {}});

  add({"repair-syntax", ActionCategory::SyntaxRepair,
       "Fix Rust/Verus compilation errors introduced by earlier proof "
       "edits (unbalanced braces, missing semicolons, wrong paths or "
       "types) without touching executable semantics.",
       make_template(
           "Strategy: the verifier reports a compilation problem, not a "
           "proof failure. Repair the syntax or naming issue exactly where "
           "reported, changing as little as possible."),
       always, Acceptance::Strict, {}});

  return registry;
}

const ActionSpec* find_action(const std::vector<ActionSpec>& registry,
                              const std::string& action_id) {
  for (const ActionSpec& a : registry)
    if (a.action_id == action_id) return &a;
  return nullptr;
}

int action_score(const ActionSpec& action, const CodeFacts& facts) {
  int score = 0;
  for (const PriorityBoost& b : action.priority_boosts)
    if (b.when && b.when(facts)) score += b.weight;
  return score;
}

std::vector<const ActionSpec*> applicable_actions(
    const std::vector<ActionSpec>& registry, const CodeFacts& facts) {
  std::vector<const ActionSpec*> out;
  for (const ActionSpec& a : registry)
    if (!a.applicability || a.applicability(facts)) out.push_back(&a);
  if (out.empty())  // a custom registry may gate everything off; keep planning
    for (const ActionSpec& a : registry) out.push_back(&a);
  std::stable_sort(out.begin(), out.end(),
                   [&](const ActionSpec* a, const ActionSpec* b) {
                     return action_score(*a, facts) > action_score(*b, facts);
                   });
  return out;
}

std::string when_to_use_tutorial() {
  // Hand-written guidance, original to this codebase.
  return
      "How to choose an action:\n"
      "- Compilation or name-resolution errors always come first: pick "
      "repair-syntax before anything else, the proof state is meaningless "
      "until the file compiles.\n"
      "- An assertion about shifts, masks, or wrap-around wants bit-vector; "
      "one about products, quotients, or remainders wants "
      "nonlinear-arithmetic; a polynomial or modular identity wants "
      "integer-ring.\n"
      "- If the missing fact is the conclusion of an existing lemma, "
      "use-lemma is cheaper and more robust than re-proving it inline.\n"
      "- If the failing fact mentions a function the verifier will not "
      "unfold, reveal-opaque brings its definition into scope.\n"
      "- Quantifiers: a stuck forall hypothesis needs an instantiation at "
      "the witnesses of the goal (instantiate-forall); an exists goal needs "
      "a concrete witness (instantiate-exists).\n"
      "- Failures at or after a loop usually mean the loop invariant is too "
      "weak: add-loop-invariant.\n"
      "- Properties of recursive definitions almost always need induction.\n"
      "- When one assertion bundles several situations, case-analysis; when "
      "the logical gap is just too wide for one query, split-assertion; "
      "both tolerate temporary extra errors inside the block they add.\n"
      "- add-assert-context is the gentle default when nothing above "
      "clearly applies: state the obvious intermediate facts.\n";
}

std::string diff_format_instructions() {
  return
      "Reply with one or more edit blocks, nothing else. Each block has the "
      "exact form:\n"
      "<<<<SEARCH\n"
      "<lines copied verbatim from the current file>\n"
      "====\n"
      "<replacement lines>\n"
      ">>>>REPLACE\n"
      "The SEARCH text must match the current file exactly once, including "
      "whitespace. Keep blocks minimal.";
}

std::string render_template(const std::string& tmpl,
                            const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    std::size_t open = tmpl.find("{{", i);
    if (open == std::string::npos) {
      out.append(tmpl, i, std::string::npos);
      break;
    }
    out.append(tmpl, i, open - i);
    std::size_t close = tmpl.find("}}", open + 2);
    if (close == std::string::npos)
      throw std::runtime_error("unterminated {{placeholder}} in template");
    std::string name = tmpl.substr(open + 2, close - open - 2);
    auto it = values.find(name);
    if (it == values.end())
      throw std::runtime_error("no value for template placeholder {{" + name +
                               "}}");
    out += it->second;
    i = close + 2;
  }
  return out;
}

}  // namespace proofsmith
