#include "proofsmith/verifier.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <cstdlib>
#include <fstream>

#include "proofsmith/util.hpp"
#include "test_support.hpp"

namespace proofsmith {
namespace {

using testsupport::TempDir;

const char kRealishOutput[] =
    "error: assertion failed\n"
    "  --> /tmp/task.rs:12:5\n"
    "   |\n"
    "12 |     assert(x > 0);\n"
    "   |     ^^^^^^^^^^^^^ assertion failed\n"
    "\n"
    "error: postcondition not satisfied\n"
    "  --> /tmp/task.rs:30:1\n"
    "   |\n"
    "30 | }\n"
    "   | ^ at the end of the function body\n"
    "\n"
    "verification results:: 7 verified, 2 errors\n";

TEST(ParseSummary, ReadsLastSummaryLine) {
  int v = -1, e = -1;
  ASSERT_TRUE(parse_summary(kRealishOutput, v, e));
  EXPECT_EQ(v, 7);
  EXPECT_EQ(e, 2);

  ASSERT_TRUE(parse_summary("verification results:: 1 verified, 0 errors\n"
                            "verification results:: 3 verified, 4 errors\n",
                            v, e));
  EXPECT_EQ(v, 3);
  EXPECT_EQ(e, 4);

  EXPECT_FALSE(parse_summary("no summary here\n", v, e));
}

TEST(ParseOutput, ClassifiesKindsAndPositions) {
  VerificationReport r = parse_verifier_output(kRealishOutput, 1, false, 2.5);
  EXPECT_EQ(r.outcome, Outcome::Failure);
  EXPECT_EQ(r.verified_count, 7);
  EXPECT_EQ(r.error_count, 2);
  ASSERT_EQ(r.errors.size(), 2u);
  EXPECT_EQ(r.errors[0].kind, ErrorKind::AssertFailed);
  EXPECT_EQ(r.errors[0].line, 12);
  EXPECT_EQ(r.errors[0].column, 5);
  EXPECT_EQ(r.errors[1].kind, ErrorKind::PostconditionFailed);
  EXPECT_EQ(r.errors[1].line, 30);
  EXPECT_DOUBLE_EQ(r.wall_seconds, 2.5);
}

TEST(ParseOutput, SuccessDoesNotRequireExitCodeZero) {
  VerificationReport r = parse_verifier_output(
      "verification results:: 3 verified, 0 errors\n", 101, false, 0.1);
  EXPECT_TRUE(r.success());
  EXPECT_EQ(r.error_count, 0);
}

TEST(ParseOutput, RustcCodesAreTypeOrSyntax) {
  VerificationReport r = parse_verifier_output(
      "error[E0308]: mismatched types\n"
      "  --> /tmp/task.rs:4:9\n",
      1, false, 0.0);
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].kind, ErrorKind::TypeOrSyntax);
  EXPECT_EQ(r.errors[0].code, "E0308");
  EXPECT_TRUE(r.has_type_errors());
  // error blocks without a summary still mean Failure, not a crash
  EXPECT_EQ(r.outcome, Outcome::Failure);
}

TEST(ParseOutput, ErrorCountNeverBelowParsedBlocks) {
  VerificationReport r = parse_verifier_output(
      "error: assertion failed\n  --> /tmp/t.rs:3:1\n"
      "error: assertion failed\n  --> /tmp/t.rs:9:1\n"
      "verification results:: 0 verified, 1 errors\n",
      1, false, 0.0);
  EXPECT_EQ(r.error_count, 2);
}

TEST(ParseOutput, TimeoutAndCrash) {
  VerificationReport t = parse_verifier_output("partial...", 137, true, 9.9);
  EXPECT_EQ(t.outcome, Outcome::Timeout);
  VerificationReport c = parse_verifier_output("Segmentation fault\n", 139,
                                               false, 0.2);
  EXPECT_EQ(c.outcome, Outcome::CrashOrUnparsable);
}

// ---- ProcessVerifier against fake verifier scripts ----

std::string write_script(const TempDir& dir, const std::string& name,
                         const std::string& body) {
  std::string path = dir.file(name);
  write_file(path, "#!/bin/sh\n" + body);
  std::string cmd = "chmod +x " + path;
  EXPECT_EQ(std::system(cmd.c_str()), 0);
  return path;
}

TEST(ProcessVerifier, ParsesFakeVerifierRun) {
  TempDir dir;
  std::string script = write_script(
      dir, "fake_verus.sh",
      "echo 'error: assertion failed'\n"
      "echo '  --> '$1':5:3'\n"
      "echo 'verification results:: 2 verified, 1 errors'\n"
      "exit 1\n");
  ProcessVerifier v(VerifierConfig{script, {}, 10.0, 0});
  VerificationReport r = v.check("fn f() {}", "task");
  EXPECT_EQ(r.outcome, Outcome::Failure);
  EXPECT_EQ(r.error_count, 1);
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].line, 5);
  EXPECT_EQ(v.runs(), 1);
}

TEST(ProcessVerifier, KillsOnTimeout) {
  TempDir dir;
  std::string script = write_script(dir, "slow.sh", "sleep 30\n");
  ProcessVerifier v(VerifierConfig{script, {}, 0.3, 0});
  auto start = std::chrono::steady_clock::now();
  VerificationReport r = v.check("fn f() {}", "task");
  double took = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  EXPECT_EQ(r.outcome, Outcome::Timeout);
  EXPECT_LT(took, 5.0);
}

TEST(ProcessVerifier, MissingBinaryIsCrash) {
  ProcessVerifier v(VerifierConfig{"/nonexistent/verus-binary", {}, 5.0, 0});
  VerificationReport r = v.check("fn f() {}", "task");
  EXPECT_EQ(r.outcome, Outcome::CrashOrUnparsable);
}

// ---- MockVerifier ----

TEST(MockVerifier, BuiltInDefaultFailsWithOneAssert) {
  auto mock = MockVerifier::from_json("{}");
  VerificationReport r = mock->check("anything", "t");
  EXPECT_EQ(r.outcome, Outcome::Failure);
  EXPECT_EQ(r.error_count, 1);
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].kind, ErrorKind::AssertFailed);
  EXPECT_NE(r.output.find("verification results::"), std::string::npos);
}

TEST(MockVerifier, FirstMatchingRuleWins) {
  auto mock = MockVerifier::from_json(R"({
    "rules": [
      {"match": {"contains": "alpha"}, "report": {"verified": 1, "errors": 0}},
      {"match": {"contains": "beta"},
       "report": {"errors": 2,
                  "diagnostics": [{"kind": "assert_failed", "line": 3,
                                   "message": "assertion failed"}]}}
    ],
    "default": {"errors": 9}
  })");
  EXPECT_TRUE(mock->check("has alpha and beta", "t").success());
  VerificationReport r = mock->check("only beta here", "t");
  EXPECT_EQ(r.error_count, 2);
  ASSERT_GE(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].line, 3);
  EXPECT_EQ(mock->check("neither marker", "t").error_count, 9);
}

TEST(MockVerifier, LacksRuleExpressesRequiredMarkers) {
  // success only when every required marker is present
  auto mock = MockVerifier::from_json(R"({
    "rules": [
      {"match": {"lacks": "M2"}, "report": {"errors": 1}},
      {"match": {"lacks": "M5"}, "report": {"errors": 1}}
    ],
    "default": {"verified": 8, "errors": 0}
  })");
  EXPECT_TRUE(mock->check("M2 M5", "t").success());
  EXPECT_FALSE(mock->check("M2 only", "t").success());
  EXPECT_FALSE(mock->check("M5 only", "t").success());
}

TEST(MockVerifier, SourceHashRule) {
  std::string src = "fn exact() {}";
  auto mock = MockVerifier::from_json(R"({
    "rules": [{"match": {"source_hash": ")" + hash_hex(src) + R"("},
               "report": {"verified": 1, "errors": 0}}],
    "default": {"errors": 1}
  })");
  EXPECT_TRUE(mock->check(src, "t").success());
  EXPECT_FALSE(mock->check(src + " ", "t").success());
}

TEST(MockVerifier, SynthesizedOutputParsesBack) {
  auto mock = MockVerifier::from_json(
      R"({"default": {"verified": 4, "errors": 2,
          "diagnostics": [{"kind": "assert_failed", "line": 7,
                           "message": "assertion failed"}]}})");
  VerificationReport r = mock->check("x", "t");
  VerificationReport reparsed =
      parse_verifier_output(r.output, r.exit_code, false, 0.0);
  EXPECT_EQ(reparsed.outcome, Outcome::Failure);
  EXPECT_EQ(reparsed.verified_count, 4);
  EXPECT_EQ(reparsed.error_count, 2);
}

TEST(MockVerifier, RejectsAmbiguousRuleMatchers) {
  EXPECT_THROW(MockVerifier::from_json(
                   R"({"rules": [{"match": {"contains": "a", "lacks": "b"},
                                  "report": {}}]})"),
               std::runtime_error);
  EXPECT_THROW(MockVerifier::from_json(R"({"rules": [{"match": {}, "report": {}}]})"),
               std::runtime_error);
}

// ---- optional live check against a real Verus install ----

TEST(LiveVerus, ThreeFunctionFixtureClassifies) {
  if (std::system("command -v verus >/dev/null 2>&1") != 0)
    GTEST_SKIP() << "verus not installed";
  ProcessVerifier v(VerifierConfig{"verus", {}, 60.0, 0});
  std::string good = testsupport::read_fixture("live_three_fn.rs");
  VerificationReport ok = v.check(good, "live_three_fn");
  EXPECT_TRUE(ok.success());
  EXPECT_GE(ok.verified_count, 3);
  // breaking one ensures must flip the verdict
  std::string bad = good;
  auto pos = bad.find("ensures r == a + b");
  ASSERT_NE(pos, std::string::npos);
  bad.replace(pos, 18, "ensures r == a + b + 1");
  VerificationReport fail = v.check(bad, "live_three_fn_bad");
  EXPECT_FALSE(fail.success());
  EXPECT_GE(fail.error_count, 1);
}

}  // namespace
}  // namespace proofsmith
