#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <vector>

#include "proofsmith/model.hpp"

namespace proofsmith {

/// Last "verification results:: N verified, M errors" line in `text`.
/// Returns false when no such line exists.
bool parse_summary(const std::string& text, int& verified, int& errors);

/// Builds a report from captured verifier output. Errors come from
/// rustc-style rendered blocks ("error: ...", "error[E0308]: ...", with a
/// "--> file:line:col" locator). Blocks with a rustc code or parser-looking
/// headlines classify as TypeOrSyntax; assertion/precondition/postcondition/
/// invariant/overflow messages map to their kinds; the rest are Other.
/// Outcome: Timeout when flagged; with a parsed summary, Success iff it
/// reports 0 errors, else Failure; without one, Failure when error blocks
/// were parsed and CrashOrUnparsable otherwise.
VerificationReport parse_verifier_output(const std::string& text, int exit_code,
                                         bool timed_out, double wall_seconds);

struct ProcessResult {
  std::string output;  // merged stdout+stderr
  int exit_code = 0;   // 128+signal when signaled
  bool timed_out = false;
  double wall_seconds = 0.0;
};

/// Runs argv[0] with the given arguments, capturing merged stdout+stderr.
/// The child gets its own process group; on timeout the whole group is
/// SIGKILLed. rlimit_virtual_mb, when nonzero, caps the child address space.
ProcessResult run_captured(const std::vector<std::string>& argv,
                           double timeout_seconds, long rlimit_virtual_mb = 0);

struct VerifierConfig {
  std::string path;  // verifier binary
  std::vector<std::string> extra_flags;
  double timeout_seconds = 120.0;
  long rlimit_virtual_mb = 0;  // 0: unlimited
};

class Verifier {
 public:
  virtual ~Verifier() = default;

  /// Checks `source` as a standalone file named `<file_stem>.rs`.
  VerificationReport check(const std::string& source, const std::string& file_stem) {
    ++runs_;
    return do_check(source, file_stem);
  }
  int runs() const { return runs_.load(); }

 protected:
  virtual VerificationReport do_check(const std::string& source,
                                      const std::string& file_stem) = 0;

 private:
  std::atomic<int> runs_{0};
};

/// Invokes a real verifier binary on a temp file.
class ProcessVerifier : public Verifier {
 public:
  explicit ProcessVerifier(VerifierConfig config) : config_(std::move(config)) {}
  const VerifierConfig& config() const { return config_; }

 protected:
  VerificationReport do_check(const std::string& source,
                              const std::string& file_stem) override;

 private:
  VerifierConfig config_;
};

/// One canned-response rule. A rule matches when `source_hash` equals the
/// content hash of the checked source, when `contains` is a substring of it,
/// or when `lacks` is NOT a substring of it. Exactly one of the three is set
/// per rule; first match wins, then the default report applies.
struct MockRule {
  std::string source_hash;
  std::string contains;
  std::string lacks;
  VerificationReport report;
  double delay_seconds = 0.0;  // simulates a slow verifier
};

/// Deterministic stand-in for the verifier, driven by a rule table.
///
/// JSON schema (see from_json):
///   {
///     "default": <report>,
///     "rules": [ {"match": {"source_hash": "<16 hex>"}, "report": <report>},
///                {"match": {"contains": "<marker>"},    "report": <report>},
///                {"match": {"lacks": "<marker>"},       "report": <report>} ]
///   }
/// where <report> is
///   { "outcome": "success"|"failure"|"timeout"|"crash_or_unparsable",
///     "verified": N, "errors": M, "delay_seconds": S,
///     "diagnostics": [ {"kind": "assert_failed"|"precondition_failed"|
///                               "postcondition_failed"|"invariant_failed"|
///                               "arithmetic_overflow"|"type_or_syntax"|"other",
///                       "line": L, "message": "...", "code": "E0308",
///                       "function": "f"} ],
///     "output": "raw text" }
/// All report fields are optional: "outcome" defaults to success iff
/// errors == 0, and a summary-line "output" is synthesized when missing so
/// downstream parsing sees realistic text.
class MockVerifier : public Verifier {
 public:
  MockVerifier(std::vector<MockRule> rules, VerificationReport default_report,
               double default_delay_seconds = 0.0)
      : rules_(std::move(rules)),
        default_(std::move(default_report)),
        default_delay_(default_delay_seconds) {}

  static std::unique_ptr<MockVerifier> from_json(const std::string& text);
  static std::unique_ptr<MockVerifier> from_json_file(const std::string& path);

 protected:
  VerificationReport do_check(const std::string& source,
                              const std::string& file_stem) override;

 private:
  std::vector<MockRule> rules_;
  VerificationReport default_;
  double default_delay_ = 0.0;
};

}  // namespace proofsmith
