#include "proofsmith/model.hpp"

#include <sstream>

#include "json.hpp"
#include "proofsmith/util.hpp"

namespace proofsmith {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::AssertFailed: return "assert_failed";
    case ErrorKind::PreconditionFailed: return "precondition_failed";
    case ErrorKind::PostconditionFailed: return "postcondition_failed";
    case ErrorKind::InvariantFailed: return "invariant_failed";
    case ErrorKind::ArithmeticOverflow: return "arithmetic_overflow";
    case ErrorKind::TypeOrSyntax: return "type_or_syntax";
    case ErrorKind::Other: return "other";
  }
  return "other";
}

ErrorKind error_kind_from_string(const std::string& name) {
  if (name == "assert_failed") return ErrorKind::AssertFailed;
  if (name == "precondition_failed") return ErrorKind::PreconditionFailed;
  if (name == "postcondition_failed") return ErrorKind::PostconditionFailed;
  if (name == "invariant_failed") return ErrorKind::InvariantFailed;
  if (name == "arithmetic_overflow") return ErrorKind::ArithmeticOverflow;
  if (name == "type_or_syntax") return ErrorKind::TypeOrSyntax;
  return ErrorKind::Other;
}

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Success: return "success";
    case Outcome::Failure: return "failure";
    case Outcome::Timeout: return "timeout";
    case Outcome::CrashOrUnparsable: return "crash_or_unparsable";
  }
  return "?";
}

const char* to_string(AttemptOutcome outcome) {
  switch (outcome) {
    case AttemptOutcome::Accepted: return "Accepted";
    case AttemptOutcome::Rejected: return "Rejected";
    case AttemptOutcome::ApplyFailed: return "ApplyFailed";
    case AttemptOutcome::LlmMalformed: return "LlmMalformed";
  }
  return "?";
}

std::string VerificationError::identity_key() const {
  std::string msg = collapse_ws(message);
  if (msg.size() > 80) msg.resize(80);
  std::ostringstream ss;
  ss << to_string(kind) << '|' << line << '|' << msg;
  return ss.str();
}

bool VerificationReport::has_type_errors() const {
  for (const VerificationError& e : errors)
    if (e.kind == ErrorKind::TypeOrSyntax) return true;
  return false;
}

namespace {

std::string render_record(const AttemptRecord& r) {
  std::ostringstream ss;
  ss << "step " << r.step << ": " << r.action_id;
  if (r.target_error.line > 0) ss << " on error@" << r.target_error.line;
  ss << " -> " << to_string(r.outcome);
  if (r.errors_before >= 0 && r.errors_after >= 0)
    ss << ", errors " << r.errors_before << " -> " << r.errors_after;
  else if (r.errors_after >= 0)
    ss << ", errors now " << r.errors_after;
  if (!r.detail.empty()) ss << " (" << r.detail << ")";
  return ss.str();
}

}  // namespace

std::string history_render(const HistoryLog& log, std::size_t budget) {
  if (budget < 512) budget = 512;
  static const char* kHeader = "History of proof attempts (oldest first):";
  if (log.records.empty()) return std::string(kHeader) + "\n";

  std::vector<std::string> lines;
  lines.reserve(log.records.size());
  std::size_t full = std::string(kHeader).size() + 1;
  for (const AttemptRecord& r : log.records) {
    lines.push_back(render_record(r));
    full += lines.back().size() + 1;
  }
  if (full <= budget) {
    std::string out = std::string(kHeader) + "\n";
    for (const std::string& l : lines) out += l + "\n";
    return out;
  }
  // keep the longest suffix of whole records that fits with the marker
  for (std::size_t drop = 1; drop <= lines.size(); ++drop) {
    std::ostringstream marker;
    marker << "[... " << drop << " earlier steps elided ...]";
    std::size_t size = std::string(kHeader).size() + 1 + marker.str().size() + 1;
    for (std::size_t i = drop; i < lines.size(); ++i) size += lines[i].size() + 1;
    if (size > budget) continue;
    std::string out = std::string(kHeader) + "\n" + marker.str() + "\n";
    for (std::size_t i = drop; i < lines.size(); ++i) out += lines[i] + "\n";
    return out;
  }
  std::ostringstream marker;
  marker << "[... " << lines.size() << " earlier steps elided ...]";
  return std::string(kHeader) + "\n" + marker.str() + "\n";
}

std::string to_json_line(const AttemptRecord& r) {
  nlohmann::json j;
  j["step"] = r.step;
  j["action"] = r.action_id;
  j["target_line"] = r.target_error.line;
  j["target_kind"] = to_string(r.target_error.kind);
  j["target_message"] = r.target_error.message;
  j["diff_summary"] = r.diff_summary;
  j["outcome"] = to_string(r.outcome);
  j["errors_before"] = r.errors_before;
  j["errors_after"] = r.errors_after;
  j["detail"] = r.detail;
  return j.dump();
}

AttemptRecord attempt_from_json(const std::string& line) {
  nlohmann::json j = nlohmann::json::parse(line);
  AttemptRecord r;
  r.step = j.value("step", 0);
  r.action_id = j.value("action", "");
  r.target_error.line = j.value("target_line", 0);
  r.target_error.kind = error_kind_from_string(j.value("target_kind", "other"));
  r.target_error.message = j.value("target_message", "");
  r.diff_summary = j.value("diff_summary", "");
  std::string outcome = j.value("outcome", "Rejected");
  if (outcome == "Accepted") r.outcome = AttemptOutcome::Accepted;
  else if (outcome == "ApplyFailed") r.outcome = AttemptOutcome::ApplyFailed;
  else if (outcome == "LlmMalformed") r.outcome = AttemptOutcome::LlmMalformed;
  else r.outcome = AttemptOutcome::Rejected;
  r.errors_before = j.value("errors_before", -1);
  r.errors_after = j.value("errors_after", -1);
  r.detail = j.value("detail", "");
  return r;
}

}  // namespace proofsmith
