#include "proofsmith/orchestrator.hpp"

#include <gtest/gtest.h>

#include <optional>
#include <string>
#include <vector>

namespace proofsmith {
namespace {

// ---- accept_candidate truth table ----

VerificationError err(ErrorKind kind, int line, const std::string& msg) {
  VerificationError e;
  e.kind = kind;
  e.line = line;
  e.message = msg;
  return e;
}

VerificationReport failure(std::vector<VerificationError> errors) {
  VerificationReport r;
  r.outcome = errors.empty() ? Outcome::Success : Outcome::Failure;
  r.errors = std::move(errors);
  r.error_count = static_cast<int>(r.errors.size());
  return r;
}

const ActionSpec& strict_action() {
  static const std::vector<ActionSpec> reg = default_registry();
  return *find_action(reg, "bit-vector");
}

const ActionSpec& relaxed_action() {
  static const std::vector<ActionSpec> reg = default_registry();
  return *find_action(reg, "split-assertion");
}

class AcceptTable : public ::testing::Test {
 protected:
  VerificationError e1 = err(ErrorKind::AssertFailed, 10, "assertion failed: a");
  VerificationError e2 = err(ErrorKind::AssertFailed, 20, "assertion failed: b");
  VerificationError e3 = err(ErrorKind::PostconditionFailed, 30,
                             "postcondition not satisfied");
  VerificationError in1 = err(ErrorKind::AssertFailed, 21, "assertion failed: s1");
  VerificationError in2 = err(ErrorKind::AssertFailed, 22, "assertion failed: s2");
  VerificationError out1 = err(ErrorKind::AssertFailed, 40, "assertion failed: far");
  VerificationReport prev = failure({e1, e2, e3});
  // the edit landed on lines 20..25 of the new candidate
  std::optional<LineRange> span = LineRange{20, 25};

  bool strict(const VerificationReport& next) {
    return accept_candidate(prev, next, strict_action(), e2, span);
  }
  bool relaxed(const VerificationReport& next) {
    return accept_candidate(prev, next, relaxed_action(), e2, span);
  }
};

TEST_F(AcceptTable, StrictCountDownInsideSpan) {
  EXPECT_TRUE(strict(failure({e1, in1})));  // 3 -> 2
}

TEST_F(AcceptTable, StrictCountDownOutsideSpan) {
  EXPECT_TRUE(strict(failure({e1, out1})));  // span is irrelevant to strict
}

TEST_F(AcceptTable, StrictCountFlatInsideSpan) {
  EXPECT_FALSE(strict(failure({e1, e3, in1})));  // 3 -> 3
}

TEST_F(AcceptTable, StrictCountFlatOutsideSpan) {
  EXPECT_FALSE(strict(failure({e1, e3, out1})));
}

TEST_F(AcceptTable, StrictCountUpInsideSpan) {
  EXPECT_FALSE(strict(failure({e1, e3, in1, in2})));  // 3 -> 4
}

TEST_F(AcceptTable, StrictCountUpOutsideSpan) {
  EXPECT_FALSE(strict(failure({e1, e3, in1, out1})));
}

TEST_F(AcceptTable, RelaxedCountDownInsideSpan) {
  EXPECT_TRUE(relaxed(failure({e1, in1})));  // target gone, new error in span
}

TEST_F(AcceptTable, RelaxedCountDownOutsideSpan) {
  EXPECT_FALSE(relaxed(failure({e1, out1})));  // fewer errors but a stray one
}

TEST_F(AcceptTable, RelaxedCountFlatInsideSpan) {
  EXPECT_TRUE(relaxed(failure({e1, e3, in1})));
}

TEST_F(AcceptTable, RelaxedCountFlatOutsideSpan) {
  EXPECT_FALSE(relaxed(failure({e1, e3, out1})));
}

TEST_F(AcceptTable, RelaxedCountUpInsideSpan) {
  EXPECT_TRUE(relaxed(failure({e1, e3, in1, in2})));  // 3 -> 4, all in span
}

TEST_F(AcceptTable, RelaxedCountUpOutsideSpan) {
  EXPECT_FALSE(relaxed(failure({e1, e3, in1, out1})));
}

TEST_F(AcceptTable, RelaxedTargetStillPresent) {
  EXPECT_FALSE(relaxed(failure({e2, in1})));
}

TEST_F(AcceptTable, StrictRejectsNewTypeErrors) {
  VerificationReport next =
      failure({err(ErrorKind::TypeOrSyntax, 2, "mismatched types")});
  EXPECT_FALSE(strict(next));  // 3 -> 1 but the candidate broke the build
}

TEST_F(AcceptTable, TimeoutAndCrashNeverAccept) {
  VerificationReport timeout, crash;
  timeout.outcome = Outcome::Timeout;
  crash.outcome = Outcome::CrashOrUnparsable;
  EXPECT_FALSE(strict(timeout));
  EXPECT_FALSE(relaxed(timeout));
  EXPECT_FALSE(strict(crash));
  EXPECT_FALSE(relaxed(crash));
}

TEST_F(AcceptTable, SuccessAlwaysAccepts) {
  VerificationReport ok;
  ok.outcome = Outcome::Success;
  EXPECT_TRUE(strict(ok));
  EXPECT_TRUE(relaxed(ok));
}

TEST_F(AcceptTable, RelaxedWithoutSpanRejectsAnyNewError) {
  EXPECT_FALSE(accept_candidate(prev, failure({e1, e3, in1}), relaxed_action(),
                                e2, std::nullopt));
  EXPECT_TRUE(accept_candidate(prev, failure({e1, e3}), relaxed_action(), e2,
                               std::nullopt));
}

TEST_F(AcceptTable, JudgeExplainsRejections) {
  std::string reason;
  judge_candidate(prev, failure({e1, e3, in1}), strict_action(), e2, span, reason);
  EXPECT_NE(reason.find("did not strictly decrease"), std::string::npos);
  judge_candidate(prev, failure({e2, in1}), relaxed_action(), e2, span, reason);
  EXPECT_NE(reason.find("still present"), std::string::npos);
  judge_candidate(prev, failure({e1, out1}), relaxed_action(), e2, span, reason);
  EXPECT_NE(reason.find("outside the edited region"), std::string::npos);
}

// ---- focused context ----

const char kContextFile[] =
    "fn alpha() {\n"
    "    let a = 1;\n"
    "}\n"
    "\n"
    "fn beta(x: u64) -> (r: u64)\n"
    "    ensures r >= x,\n"
    "{\n"
    "    assert(x + 1 >= x);\n"
    "    x + 1\n"
    "}\n";

TEST(FocusedContext, NumbersLinesAroundError) {
  VerificationError e = err(ErrorKind::AssertFailed, 8, "assertion failed");
  std::string ctx = focused_context(kContextFile, e, 1, "beta");
  EXPECT_NE(ctx.find("    8| "), std::string::npos);
  EXPECT_NE(ctx.find("assert(x + 1 >= x);"), std::string::npos);
  EXPECT_NE(ctx.find("error at line 8: assertion failed"), std::string::npos);
  // alpha is far from the error and outside the enclosing function
  EXPECT_EQ(ctx.find("fn alpha"), std::string::npos);
}

TEST(FocusedContext, UnionsEnclosingFunctionEvenWithZeroRadius) {
  VerificationError e = err(ErrorKind::AssertFailed, 8, "assertion failed");
  std::string ctx = focused_context(kContextFile, e, 0, "beta");
  EXPECT_NE(ctx.find("fn beta"), std::string::npos);   // signature pulled in
  EXPECT_NE(ctx.find("ensures r >= x"), std::string::npos);
}

TEST(FocusedContext, NoLineFallsBackToTargetFunction) {
  VerificationError e = err(ErrorKind::Other, 0, "verification failed");
  std::string ctx = focused_context(kContextFile, e, 2, "beta");
  EXPECT_NE(ctx.find("fn beta"), std::string::npos);
  EXPECT_EQ(ctx.find("fn alpha"), std::string::npos);
  EXPECT_NE(ctx.find("error: verification failed"), std::string::npos);
}

TEST(FocusedContext, UnknownTargetShowsWholeFile) {
  VerificationError e = err(ErrorKind::Other, 0, "verification failed");
  std::string ctx = focused_context(kContextFile, e, 2, "");
  EXPECT_NE(ctx.find("fn alpha"), std::string::npos);
  EXPECT_NE(ctx.find("fn beta"), std::string::npos);
}

TEST(FocusedContext, ClampsRadiusAtFileEdges) {
  VerificationError e = err(ErrorKind::AssertFailed, 1, "assertion failed");
  std::string ctx = focused_context("line one\nline two\n", e, 50, "");
  EXPECT_NE(ctx.find("    1| line one"), std::string::npos);
  EXPECT_NE(ctx.find("    2| line two"), std::string::npos);
}

// ---- hands-off prompt ----

TEST(HandsOffPrompt, SubstitutesFileNames) {
  std::string p = render_hands_off_prompt("foo.rs");
  EXPECT_NE(p.find("The file foo.rs cannot be verified by Verus"),
            std::string::npos);
  EXPECT_NE(p.find("foo_verified.rs"), std::string::npos);
  EXPECT_NE(p.find("KEEP editing your proof annotations"), std::string::npos);
  EXPECT_NE(p.find("verus-checker foo_verified.rs"), std::string::npos);
}

TEST(HandsOffPrompt, ContainsAllSixProhibitions) {
  std::string p = render_hands_off_prompt("task.rs");
  EXPECT_NE(p.find("NEVER use admit(...) or assume(...)"), std::string::npos);
  EXPECT_NE(p.find("NEVER add external_body tag to any existing "
                   "non-external-body functions"),
            std::string::npos);
  EXPECT_NE(p.find("NOT allowed to create new axiom functions"),
            std::string::npos);
  EXPECT_NE(p.find("NOT change existing functions' pre-conditions or "
                   "post-conditions"),
            std::string::npos);
  EXPECT_NE(p.find("NOT change any executable Rust code"), std::string::npos);
  EXPECT_NE(p.find("NOT allowed to create unimplemented, external-body lemma "
                   "functions"),
            std::string::npos);
}

TEST(HandsOffPrompt, ByteStableAcrossCalls) {
  std::string a = render_hands_off_prompt("foo.rs");
  std::string b = render_hands_off_prompt("other.rs");
  std::string c = render_hands_off_prompt("foo.rs");
  EXPECT_EQ(a, c);
  EXPECT_NE(a, b);
}

TEST(HandsOffPrompt, EmptyNameThrows) {
  EXPECT_THROW(render_hands_off_prompt(""), std::invalid_argument);
}

// ---- planner reply parsing ----

TEST(PlannerReply, ParsesThreeLineProtocol) {
  auto reg = default_registry();
  std::vector<const ActionSpec*> offered = {find_action(reg, "bit-vector"),
                                            find_action(reg, "split-assertion")};
  VerificationReport report =
      failure({err(ErrorKind::AssertFailed, 12, "assertion failed")});
  std::string problem;
  auto d = parse_planner_reply(
      "action: bit-vector\ntarget: 12\nwhy: shift facts need bit blasting\n",
      offered, report, problem);
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(d->action_id, "bit-vector");
  EXPECT_EQ(d->target_error.line, 12);
  EXPECT_EQ(d->rationale, "shift facts need bit blasting");
}

TEST(PlannerReply, TolerersProseAroundTheProtocolLines) {
  auto reg = default_registry();
  std::vector<const ActionSpec*> offered = {find_action(reg, "bit-vector")};
  VerificationReport report =
      failure({err(ErrorKind::AssertFailed, 3, "assertion failed")});
  std::string problem;
  auto d = parse_planner_reply(
      "Let me think.\naction: bit-vector\ntarget: 3\nwhy: bits\nThanks!\n",
      offered, report, problem);
  EXPECT_TRUE(d.has_value());
}

TEST(PlannerReply, RejectsUnknownActionAndBadTarget) {
  auto reg = default_registry();
  std::vector<const ActionSpec*> offered = {find_action(reg, "bit-vector")};
  VerificationReport report =
      failure({err(ErrorKind::AssertFailed, 3, "assertion failed")});
  std::string problem;
  EXPECT_FALSE(parse_planner_reply("action: warp-speed\ntarget: 3\nwhy: x\n",
                                   offered, report, problem)
                   .has_value());
  EXPECT_NE(problem.find("warp-speed"), std::string::npos);
  EXPECT_FALSE(parse_planner_reply("action: bit-vector\ntarget: 99\nwhy: x\n",
                                   offered, report, problem)
                   .has_value());
  EXPECT_FALSE(parse_planner_reply("action: bit-vector\nwhy: no target\n",
                                   offered, report, problem)
                   .has_value());
  EXPECT_FALSE(
      parse_planner_reply("gibberish", offered, report, problem).has_value());
}

TEST(PlannerReply, SyntheticTargetWhenReportHasNoErrorList) {
  auto reg = default_registry();
  std::vector<const ActionSpec*> offered = {find_action(reg, "bit-vector")};
  VerificationReport report;
  report.outcome = Outcome::Failure;
  report.error_count = 1;  // summary said one error, blocks were unparsable
  std::string problem;
  auto d = parse_planner_reply("action: bit-vector\ntarget: 7\nwhy: guess\n",
                               offered, report, problem);
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(d->target_error.line, 7);
  EXPECT_EQ(d->target_error.kind, ErrorKind::Other);
}

// ---- split span ----

TEST(SplitSpan, LocatesReplaceTextInNewCandidate) {
  std::string next = "line a\nNEW ONE\nNEW TWO\nline b\n";
  std::vector<SearchReplaceBlock> blocks = {{"old\n", "NEW ONE\nNEW TWO\n"}};
  auto span = compute_split_span(next, blocks);
  ASSERT_TRUE(span.has_value());
  EXPECT_EQ(span->first, 2);
  EXPECT_EQ(span->last, 3);
}

TEST(SplitSpan, UnionsMultipleBlocks) {
  std::string next = "AAA\nmid\nBBB\n";
  std::vector<SearchReplaceBlock> blocks = {{"x\n", "AAA\n"}, {"y\n", "BBB\n"}};
  auto span = compute_split_span(next, blocks);
  ASSERT_TRUE(span.has_value());
  EXPECT_EQ(span->first, 1);
  EXPECT_EQ(span->last, 3);
}

TEST(SplitSpan, PureDeletionsYieldNothing) {
  std::vector<SearchReplaceBlock> blocks = {{"gone\n", ""}};
  EXPECT_FALSE(compute_split_span("whatever\n", blocks).has_value());
}

}  // namespace
}  // namespace proofsmith
