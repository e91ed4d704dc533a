#include "proofsmith/verifier.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cctype>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "proofsmith/util.hpp"

namespace proofsmith {

namespace {

bool parse_two_ints(const std::string& s, int& a, int& b) {
  int vals[2];
  int found = 0;
  std::size_t i = 0;
  while (i < s.size() && found < 2) {
    if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      long v = 0;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        v = v * 10 + (s[i] - '0');
        ++i;
      }
      vals[found++] = static_cast<int>(v);
    } else {
      ++i;
    }
  }
  if (found < 2) return false;
  a = vals[0];
  b = vals[1];
  return true;
}

bool looks_like_syntax_error(const std::string& msg) {
  static const char* kPrefixes[] = {
      "expected",   "unexpected",  "unclosed",      "mismatched closing",
      "unresolved", "cannot find", "unknown start", "failed to parse",
      "missing",    "this file contains an unclosed",
  };
  for (const char* p : kPrefixes)
    if (msg.rfind(p, 0) == 0) return true;
  return false;
}

ErrorKind classify_message(const std::string& code, const std::string& msg) {
  if (!code.empty() || looks_like_syntax_error(msg)) return ErrorKind::TypeOrSyntax;
  if (msg.find("assertion failed") != std::string::npos)
    return ErrorKind::AssertFailed;
  if (msg.find("precondition not satisfied") != std::string::npos)
    return ErrorKind::PreconditionFailed;
  if (msg.find("postcondition not satisfied") != std::string::npos)
    return ErrorKind::PostconditionFailed;
  if (msg.find("invariant not satisfied") != std::string::npos ||
      msg.find("invariant not maintained") != std::string::npos)
    return ErrorKind::InvariantFailed;
  if (msg.find("arithmetic underflow") != std::string::npos ||
      msg.find("arithmetic overflow") != std::string::npos ||
      msg.find("possible arithmetic") != std::string::npos)
    return ErrorKind::ArithmeticOverflow;
  return ErrorKind::Other;
}

void locator_position(const std::string& line, int& out_line, int& out_col) {
  // "  --> path/file.rs:37:9"
  std::size_t arrow = line.find("-->");
  if (arrow == std::string::npos) return;
  std::size_t last_colon = line.rfind(':');
  if (last_colon == std::string::npos || last_colon <= arrow) return;
  std::size_t prev_colon = line.rfind(':', last_colon - 1);
  if (prev_colon == std::string::npos || prev_colon <= arrow) return;
  int ln = 0, col = 0;
  for (std::size_t i = prev_colon + 1; i < last_colon; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(line[i]))) return;
    ln = ln * 10 + (line[i] - '0');
  }
  for (std::size_t i = last_colon + 1; i < line.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(line[i]))) break;
    col = col * 10 + (line[i] - '0');
  }
  out_line = ln;
  out_col = col;
}

}  // namespace

bool parse_summary(const std::string& text, int& verified, int& errors) {
  static const std::string kMarker = "verification results::";
  std::size_t pos = text.rfind(kMarker);
  if (pos == std::string::npos) return false;
  std::size_t eol = text.find('\n', pos);
  std::string rest =
      text.substr(pos + kMarker.size(), eol == std::string::npos
                                            ? std::string::npos
                                            : eol - pos - kMarker.size());
  return parse_two_ints(rest, verified, errors);
}

VerificationReport parse_verifier_output(const std::string& text, int exit_code,
                                         bool timed_out, double wall_seconds) {
  VerificationReport report;
  report.output = text;
  report.exit_code = exit_code;
  report.wall_seconds = wall_seconds;

  std::vector<std::string> lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    std::string code, message;
    if (line.rfind("error:", 0) == 0) {
      message = trim(line.substr(6));
    } else if (line.rfind("error[", 0) == 0) {
      std::size_t close = line.find(']');
      if (close == std::string::npos) continue;
      code = line.substr(6, close - 6);
      std::size_t colon = line.find(':', close);
      if (colon == std::string::npos) continue;
      message = trim(line.substr(colon + 1));
    } else {
      continue;
    }
    if (message.rfind("aborting due to", 0) == 0) continue;

    VerificationError e;
    e.code = code;
    e.message = message;
    e.raw = line;
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const std::string& body = lines[j];
      if (body.empty() || body.rfind("error", 0) == 0 ||
          body.rfind("warning", 0) == 0)
        break;
      e.raw += '\n';
      e.raw += body;
      if (e.line == 0) locator_position(body, e.line, e.column);
    }
    e.kind = classify_message(code, message);
    report.errors.push_back(std::move(e));
  }

  int verified = 0, errors = 0;
  bool has_summary = parse_summary(text, verified, errors);
  if (has_summary) {
    report.verified_count = verified;
    // the summary may count errors the diagnostics list truncates, never fewer
    report.error_count =
        std::max(errors, static_cast<int>(report.errors.size()));
  } else {
    report.error_count = static_cast<int>(report.errors.size());
  }

  if (timed_out) {
    report.outcome = Outcome::Timeout;
  } else if (has_summary) {
    report.outcome = report.error_count == 0 ? Outcome::Success : Outcome::Failure;
  } else if (!report.errors.empty()) {
    report.outcome = Outcome::Failure;
  } else {
    report.outcome = Outcome::CrashOrUnparsable;
  }
  return report;
}

ProcessResult run_captured(const std::vector<std::string>& argv,
                           double timeout_seconds, long rlimit_virtual_mb) {
  ProcessResult result;
  if (argv.empty()) throw std::runtime_error("run_captured: empty argv");

  int fds[2];
  if (pipe(fds) != 0) throw std::runtime_error("pipe failed");

  auto start = std::chrono::steady_clock::now();
  pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    throw std::runtime_error("fork failed");
  }
  if (pid == 0) {
    setpgid(0, 0);  // own group, so a timeout kill reaps grandchildren too
    dup2(fds[1], STDOUT_FILENO);
    dup2(fds[1], STDERR_FILENO);
    close(fds[0]);
    close(fds[1]);
    if (rlimit_virtual_mb > 0) {
      rlimit lim;
      lim.rlim_cur = lim.rlim_max =
          static_cast<rlim_t>(rlimit_virtual_mb) * 1024 * 1024;
      setrlimit(RLIMIT_AS, &lim);
    }
    std::vector<char*> cargv;
    cargv.reserve(argv.size() + 1);
    for (const std::string& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);
    execvp(cargv[0], cargv.data());
    const char* msg = "exec failed\n";
    ssize_t ignored = write(STDERR_FILENO, msg, std::strlen(msg));
    (void)ignored;
    _exit(127);
  }

  close(fds[1]);
  auto deadline =
      start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                  std::chrono::duration<double>(timeout_seconds));
  char buf[4096];
  bool open = true;
  while (open) {
    auto now = std::chrono::steady_clock::now();
    int wait_ms = -1;
    if (!result.timed_out) {
      auto left =
          std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now);
      wait_ms = static_cast<int>(left.count());
      if (wait_ms <= 0) {
        result.timed_out = true;
        kill(-pid, SIGKILL);
        kill(pid, SIGKILL);  // in case setpgid lost the race
        continue;
      }
    }
    pollfd p{fds[0], POLLIN, 0};
    int rc = poll(&p, 1, wait_ms);
    if (rc == 0) continue;  // deadline hit; loop re-checks the clock
    if (rc < 0) {
      if (errno == EINTR) continue;
      break;
    }
    ssize_t n = read(fds[0], buf, sizeof(buf));
    if (n > 0) result.output.append(buf, static_cast<std::size_t>(n));
    else open = false;  // EOF or error: every writer is gone
  }
  close(fds[0]);

  int status = 0;
  waitpid(pid, &status, 0);
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  else if (WIFSIGNALED(status)) result.exit_code = 128 + WTERMSIG(status);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

VerificationReport ProcessVerifier::do_check(const std::string& source,
                                             const std::string& file_stem) {
  namespace fs = std::filesystem;
  char tmpl[] = "/tmp/proofsmith.XXXXXX";
  char* dir = mkdtemp(tmpl);
  if (!dir) throw std::runtime_error("mkdtemp failed");
  fs::path workdir(dir);
  fs::path file = workdir / (file_stem + ".rs");
  write_file(file.string(), source);

  std::vector<std::string> argv;
  argv.push_back(config_.path);
  argv.push_back(file.string());
  for (const std::string& f : config_.extra_flags) argv.push_back(f);

  ProcessResult pr;
  std::string failure;
  try {
    pr = run_captured(argv, config_.timeout_seconds, config_.rlimit_virtual_mb);
  } catch (const std::exception& e) {
    failure = e.what();
  }
  std::error_code ec;
  fs::remove_all(workdir, ec);
  if (!failure.empty()) throw std::runtime_error(failure);
  return parse_verifier_output(pr.output, pr.exit_code, pr.timed_out,
                               pr.wall_seconds);
}

namespace {

VerificationReport report_from_json(const nlohmann::json& j) {
  VerificationReport r;
  r.verified_count = j.value("verified", 0);
  r.error_count = j.value("errors", 0);
  if (j.contains("diagnostics")) {
    for (const auto& dj : j.at("diagnostics")) {
      VerificationError e;
      e.kind = error_kind_from_string(dj.value("kind", "other"));
      e.line = dj.value("line", 0);
      e.column = dj.value("column", 0);
      e.message = dj.value("message", "");
      e.code = dj.value("code", "");
      e.function = dj.value("function", "");
      e.raw = e.message;
      r.errors.push_back(std::move(e));
    }
  }
  if (r.error_count < static_cast<int>(r.errors.size()))
    r.error_count = static_cast<int>(r.errors.size());
  std::string outcome = j.value("outcome", "");
  if (outcome == "success") r.outcome = Outcome::Success;
  else if (outcome == "failure") r.outcome = Outcome::Failure;
  else if (outcome == "timeout") r.outcome = Outcome::Timeout;
  else if (outcome == "crash_or_unparsable") r.outcome = Outcome::CrashOrUnparsable;
  else r.outcome = r.error_count == 0 ? Outcome::Success : Outcome::Failure;
  if (j.contains("output")) {
    r.output = j.at("output").get<std::string>();
  } else {
    std::string out;
    for (const VerificationError& e : r.errors) {
      out += "error: " + e.message + "\n";
      if (e.line > 0) {
        char loc[64];
        std::snprintf(loc, sizeof(loc), "  --> task.rs:%d:1\n", e.line);
        out += loc;
      }
      out += "\n";
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf),
                  "verification results:: %d verified, %d errors\n",
                  r.verified_count, r.error_count);
    out += buf;
    r.output = std::move(out);
  }
  r.exit_code = r.outcome == Outcome::Success ? 0 : 1;
  return r;
}

}  // namespace

std::unique_ptr<MockVerifier> MockVerifier::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::vector<MockRule> rules;
  if (j.contains("rules")) {
    for (const auto& rj : j.at("rules")) {
      MockRule rule;
      const auto& m = rj.at("match");
      int set = 0;
      if (m.contains("source_hash")) { rule.source_hash = m.at("source_hash"); ++set; }
      if (m.contains("contains")) { rule.contains = m.at("contains"); ++set; }
      if (m.contains("lacks")) { rule.lacks = m.at("lacks"); ++set; }
      if (set != 1)
        throw std::runtime_error(
            "mock rule must set exactly one of source_hash / contains / lacks");
      rule.report = report_from_json(rj.at("report"));
      rule.delay_seconds = rj.at("report").value("delay_seconds", 0.0);
      rules.push_back(std::move(rule));
    }
  }
  VerificationReport fallback;
  double fallback_delay = 0.0;
  if (j.contains("default")) {
    fallback = report_from_json(j.at("default"));
    fallback_delay = j.at("default").value("delay_seconds", 0.0);
  } else {
    fallback.outcome = Outcome::Failure;
    fallback.error_count = 1;
    VerificationError e;
    e.kind = ErrorKind::AssertFailed;
    e.message = "assertion failed (mock default)";
    e.line = 1;
    e.raw = e.message;
    fallback.errors.push_back(std::move(e));
    fallback.output =
        "error: assertion failed (mock default)\n"
        "verification results:: 0 verified, 1 errors\n";
    fallback.exit_code = 1;
  }
  return std::make_unique<MockVerifier>(std::move(rules), std::move(fallback),
                                        fallback_delay);
}

std::unique_ptr<MockVerifier> MockVerifier::from_json_file(
    const std::string& path) {
  return from_json(read_file(path));
}

VerificationReport MockVerifier::do_check(const std::string& source,
                                          const std::string& /*file_stem*/) {
  std::string h = hash_hex(source);
  const VerificationReport* chosen = &default_;
  double delay = default_delay_;
  for (const MockRule& rule : rules_) {
    bool hit = false;
    if (!rule.source_hash.empty()) hit = rule.source_hash == h;
    else if (!rule.contains.empty())
      hit = source.find(rule.contains) != std::string::npos;
    else if (!rule.lacks.empty())
      hit = source.find(rule.lacks) == std::string::npos;
    if (hit) {
      chosen = &rule.report;
      delay = rule.delay_seconds;
      break;
    }
  }
  if (delay > 0)
    std::this_thread::sleep_for(std::chrono::duration<double>(delay));
  return *chosen;
}

}  // namespace proofsmith
