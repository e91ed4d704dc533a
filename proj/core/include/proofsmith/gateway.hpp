#pragma once

#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace proofsmith {

enum class Role { System, User, Assistant };
const char* to_string(Role role);

struct ChatMessage {
  Role role = Role::User;
  std::string content;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;  // non-empty; first is System or User
  std::string model_id;
  int max_output_tokens = 4096;
  double temperature = 0.0;  // 0 by default: maximize replayability
};

struct ChatResponse {
  std::string content;
  long input_tokens = 0;
  long output_tokens = 0;
  bool tokens_estimated = false;  // true when derived from character counts
};

class GatewayError : public std::runtime_error {
 public:
  enum class Kind {
    Auth,
    RateLimited,
    ReplayExhausted,
    ReplayMismatch,
    MalformedResponse,
    Network,
  };
  GatewayError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual ChatResponse complete(const ChatRequest& request) = 0;
};

/// Stable hash of a message list; used by replay transcripts to pin a
/// scripted response to the exact request that should trigger it.
std::string messages_hash(const std::vector<ChatMessage>& messages);

/// One scripted response. Matching is strict and in-order: entry k serves
/// call k. `ordinal` (1-based), when nonzero, must equal the call number;
/// `expect_hash`, when set, must equal messages_hash of the actual request.
struct ReplayEntry {
  int ordinal = 0;
  std::string expect_hash;
  std::string content;
  long input_tokens = 0;
  long output_tokens = 0;
};

/// Deterministic transcript playback.
///
/// Transcript format: JSON lines, each
///   {"content": "...", "input_tokens": N, "output_tokens": M,
///    "match": {"ordinal": K} | {"messages_hash": "<16 hex>"}}   // optional
/// Calls past the end of the transcript raise ReplayExhausted; an ordinal
/// or hash mismatch raises ReplayMismatch (a test misconfiguration).
class ReplayBackend : public ChatBackend {
 public:
  explicit ReplayBackend(std::vector<ReplayEntry> entries)
      : entries_(std::move(entries)) {}

  static std::unique_ptr<ReplayBackend> from_jsonl(const std::string& text);
  static std::unique_ptr<ReplayBackend> from_jsonl_file(const std::string& path);

  ChatResponse complete(const ChatRequest& request) override;
  int calls() const { return cursor_; }

 private:
  std::vector<ReplayEntry> entries_;
  int cursor_ = 0;
  std::mutex mutex_;
};

/// OpenAI-style chat-completions client over HTTP(S).
class LiveBackend : public ChatBackend {
 public:
  struct Options {
    std::string endpoint;  // e.g. "https://host:443/v1"
    std::string api_key;   // sent as a bearer token when non-empty
    int max_attempts = 3;  // transient failures retried with backoff
    double backoff_seconds = 0.25;
    double timeout_seconds = 120.0;
  };
  explicit LiveBackend(Options options) : options_(std::move(options)) {}

  ChatResponse complete(const ChatRequest& request) override;

 private:
  Options options_;
};

// ---- model-emitted diff blocks ----

struct SearchReplaceBlock {
  std::string search;  // must match the current file exactly once
  std::string replace;
};

class MalformedDiff : public std::runtime_error {
 public:
  explicit MalformedDiff(const std::string& message)
      : std::runtime_error(message) {}
};

class ApplyError : public std::runtime_error {
 public:
  enum class Kind { SearchNotFound, AmbiguousSearch };
  ApplyError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Extracts fenced edit blocks of the form
///   <<<<SEARCH
///   exact current text
///   ====
///   replacement text
///   >>>>REPLACE
/// (markers alone on their lines). Prose outside fences is ignored; no
/// fences means an empty list. An unterminated fence or an empty search
/// text raises MalformedDiff.
std::vector<SearchReplaceBlock> parse_blocks(const std::string& content);

/// Applies blocks in order. Each search text must occur exactly once in the
/// current text: zero matches raise ApplyError(SearchNotFound), two or more
/// raise ApplyError(AmbiguousSearch) - never "replace the first one", which
/// would silently corrupt candidates.
std::string apply_blocks(const std::string& source,
                         const std::vector<SearchReplaceBlock>& blocks);

/// Short human-readable digest of a block list for history records.
std::string describe_blocks(const std::vector<SearchReplaceBlock>& blocks);

}  // namespace proofsmith
