#include "proofsmith/model.hpp"

#include <gtest/gtest.h>

#include <climits>

namespace proofsmith {
namespace {

AttemptRecord make_record(int step, const std::string& detail) {
  AttemptRecord r;
  r.step = step;
  r.action_id = "bit-vector";
  r.target_error.kind = ErrorKind::AssertFailed;
  r.target_error.line = 12;
  r.target_error.message = "assertion failed";
  r.diff_summary = "1 block(s)";
  r.outcome = step % 2 ? AttemptOutcome::Rejected : AttemptOutcome::Accepted;
  r.errors_before = 3;
  r.errors_after = 2;
  r.detail = detail;
  return r;
}

TEST(Model, ErrorIdentityCollapsesWhitespaceAndTruncates) {
  VerificationError a, b;
  a.kind = b.kind = ErrorKind::AssertFailed;
  a.line = b.line = 7;
  a.message = "assertion   failed:\n  x > 0";
  b.message = "assertion failed: x > 0";
  EXPECT_TRUE(a.same_error(b));

  // differences beyond the first 80 collapsed chars do not matter
  std::string head(80, 'm');
  a.message = head + "TAIL_ONE";
  b.message = head + "TAIL_TWO";
  EXPECT_TRUE(a.same_error(b));

  b.line = 8;
  EXPECT_FALSE(a.same_error(b));
  b.line = 7;
  b.kind = ErrorKind::PostconditionFailed;
  EXPECT_FALSE(a.same_error(b));
}

TEST(Model, ComparableErrorsOrdering) {
  VerificationReport ok, fail, timeout, crash;
  ok.outcome = Outcome::Success;
  ok.error_count = 0;
  fail.outcome = Outcome::Failure;
  fail.error_count = 4;
  timeout.outcome = Outcome::Timeout;
  crash.outcome = Outcome::CrashOrUnparsable;
  EXPECT_EQ(ok.comparable_errors(), 0);
  EXPECT_EQ(fail.comparable_errors(), 4);
  EXPECT_EQ(timeout.comparable_errors(), LONG_MAX);
  EXPECT_EQ(crash.comparable_errors(), LONG_MAX);
}

TEST(Model, ErrorKindStringsRoundTrip) {
  for (ErrorKind k :
       {ErrorKind::AssertFailed, ErrorKind::PreconditionFailed,
        ErrorKind::PostconditionFailed, ErrorKind::InvariantFailed,
        ErrorKind::ArithmeticOverflow, ErrorKind::TypeOrSyntax,
        ErrorKind::Other}) {
    EXPECT_EQ(error_kind_from_string(to_string(k)), k);
  }
}

TEST(Model, AttemptRecordJsonRoundTrip) {
  AttemptRecord r = make_record(3, "error count did not strictly decrease");
  AttemptRecord back = attempt_from_json(to_json_line(r));
  EXPECT_EQ(back.step, r.step);
  EXPECT_EQ(back.action_id, r.action_id);
  EXPECT_EQ(back.target_error.kind, r.target_error.kind);
  EXPECT_EQ(back.target_error.line, r.target_error.line);
  EXPECT_EQ(back.target_error.message, r.target_error.message);
  EXPECT_EQ(back.diff_summary, r.diff_summary);
  EXPECT_EQ(back.outcome, r.outcome);
  EXPECT_EQ(back.errors_before, r.errors_before);
  EXPECT_EQ(back.errors_after, r.errors_after);
  EXPECT_EQ(back.detail, r.detail);
}

TEST(Model, HistoryRenderUnbudgetedListsEveryRecord) {
  HistoryLog log;
  for (int i = 1; i <= 4; ++i) log.records.push_back(make_record(i, "d"));
  std::string full = history_render(log);
  int newlines = 0;
  for (char c : full)
    if (c == '\n') ++newlines;
  EXPECT_EQ(newlines, 5);  // header + one line per record
  EXPECT_NE(full.find("bit-vector"), std::string::npos);
}

TEST(Model, HistoryRenderElidesWholeOldRecordsKeepingTailBytes) {
  HistoryLog log;
  for (int i = 1; i <= 40; ++i)
    log.records.push_back(make_record(i, "some reasonably long detail text"));
  std::string full = history_render(log, 1 << 20);
  std::string tight = history_render(log, 700);
  EXPECT_LE(tight.size(), 700u);
  EXPECT_NE(tight.find("earlier steps elided"), std::string::npos);
  // the kept tail is byte-identical to the unbudgeted render's tail
  std::string tail = tight.substr(tight.find('\n', tight.find("elided")) + 1);
  ASSERT_FALSE(tail.empty());
  EXPECT_EQ(full.compare(full.size() - tail.size(), tail.size(), tail), 0);
}

TEST(Model, HistoryRenderBudgetFloorIsHalfKilobyte) {
  HistoryLog log;
  for (int i = 1; i <= 3; ++i) log.records.push_back(make_record(i, "x"));
  // absurdly small budgets clamp to 512 rather than erasing everything
  EXPECT_EQ(history_render(log, 1), history_render(log, 512));
}

TEST(Model, OutcomeNames) {
  // the JSON reader parses these back, so they stay lower snake case
  EXPECT_STREQ(to_string(Outcome::Success), "success");
  EXPECT_STREQ(to_string(Outcome::CrashOrUnparsable), "crash_or_unparsable");
  EXPECT_STREQ(to_string(AttemptOutcome::ApplyFailed), "ApplyFailed");
  EXPECT_STREQ(to_string(AttemptOutcome::LlmMalformed), "LlmMalformed");
}

}  // namespace
}  // namespace proofsmith
