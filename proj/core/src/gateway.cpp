#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "proofsmith/gateway.hpp"

#include <chrono>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "proofsmith/util.hpp"

namespace proofsmith {

const char* to_string(Role role) {
  switch (role) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "user";
}

std::string messages_hash(const std::vector<ChatMessage>& messages) {
  std::string acc;
  for (const ChatMessage& m : messages) {
    acc += to_string(m.role);
    acc += '\n';
    acc += m.content;
    acc += '\x1e';  // record separator keeps adjacent contents apart
  }
  return hash_hex(acc);
}

namespace {

long estimate_tokens(const std::string& text) {
  return static_cast<long>((text.size() + 3) / 4);
}

}  // namespace

std::unique_ptr<ReplayBackend> ReplayBackend::from_jsonl(const std::string& text) {
  std::vector<ReplayEntry> entries;
  for (const std::string& line : split_lines(text)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    nlohmann::json j = nlohmann::json::parse(t);
    ReplayEntry e;
    e.content = j.value("content", "");
    e.input_tokens = j.value("input_tokens", 0L);
    e.output_tokens = j.value("output_tokens", 0L);
    if (j.contains("match")) {
      const auto& m = j.at("match");
      e.ordinal = m.value("ordinal", 0);
      e.expect_hash = m.value("messages_hash", "");
    }
    entries.push_back(std::move(e));
  }
  return std::make_unique<ReplayBackend>(std::move(entries));
}

std::unique_ptr<ReplayBackend> ReplayBackend::from_jsonl_file(
    const std::string& path) {
  return from_jsonl(read_file(path));
}

ChatResponse ReplayBackend::complete(const ChatRequest& request) {
  std::lock_guard<std::mutex> lock(mutex_);
  if (cursor_ >= static_cast<int>(entries_.size())) {
    std::ostringstream ss;
    ss << "replay transcript exhausted after " << entries_.size()
       << " scripted responses (call " << cursor_ + 1 << ")";
    throw GatewayError(GatewayError::Kind::ReplayExhausted, ss.str());
  }
  const ReplayEntry& e = entries_[cursor_];
  int call_number = cursor_ + 1;
  if (e.ordinal != 0 && e.ordinal != call_number) {
    std::ostringstream ss;
    ss << "replay entry " << call_number << " is pinned to ordinal " << e.ordinal;
    throw GatewayError(GatewayError::Kind::ReplayMismatch, ss.str());
  }
  if (!e.expect_hash.empty()) {
    std::string actual = messages_hash(request.messages);
    if (actual != e.expect_hash) {
      std::ostringstream ss;
      ss << "replay entry " << call_number << " expects messages_hash "
         << e.expect_hash << " but the request hashes to " << actual;
      throw GatewayError(GatewayError::Kind::ReplayMismatch, ss.str());
    }
  }
  ++cursor_;
  ChatResponse resp;
  resp.content = e.content;
  resp.input_tokens = e.input_tokens;
  resp.output_tokens = e.output_tokens;
  if (resp.input_tokens <= 0 && resp.output_tokens <= 0) {
    std::string prompt;
    for (const ChatMessage& m : request.messages) prompt += m.content;
    resp.input_tokens = estimate_tokens(prompt);
    resp.output_tokens = estimate_tokens(e.content);
    resp.tokens_estimated = true;
  }
  return resp;
}

namespace {

void split_endpoint(const std::string& endpoint, std::string& base,
                    std::string& path_prefix) {
  std::size_t scheme = endpoint.find("://");
  std::size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
  std::size_t slash = endpoint.find('/', host_start);
  if (slash == std::string::npos) {
    base = endpoint;
    path_prefix.clear();
  } else {
    base = endpoint.substr(0, slash);
    path_prefix = endpoint.substr(slash);
    while (!path_prefix.empty() && path_prefix.back() == '/')
      path_prefix.pop_back();
  }
}

}  // namespace

ChatResponse LiveBackend::complete(const ChatRequest& request) {
  if (request.messages.empty())
    throw GatewayError(GatewayError::Kind::MalformedResponse,
                       "chat request has no messages");

  nlohmann::json payload;
  payload["model"] = request.model_id;
  payload["max_tokens"] = request.max_output_tokens;
  payload["temperature"] = request.temperature;
  payload["messages"] = nlohmann::json::array();
  for (const ChatMessage& m : request.messages)
    payload["messages"].push_back(
        {{"role", to_string(m.role)}, {"content", m.content}});
  std::string body = payload.dump();

  std::string base, prefix;
  split_endpoint(options_.endpoint, base, prefix);
  std::string path = prefix + "/chat/completions";

  httplib::Headers headers;
  if (!options_.api_key.empty())
    headers.emplace("Authorization", "Bearer " + options_.api_key);

  std::string last_error;
  for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
    if (attempt > 1) {
      double delay = options_.backoff_seconds * (1 << (attempt - 2));
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }
    httplib::Client client(base);
    client.set_connection_timeout(
        std::chrono::duration<double>(options_.timeout_seconds));
    client.set_read_timeout(
        std::chrono::duration<double>(options_.timeout_seconds));
    auto res = client.Post(path, headers, body, "application/json");
    if (!res) {
      last_error = "network error: " + httplib::to_string(res.error());
      continue;  // transient: retry
    }
    if (res->status == 401 || res->status == 403)
      throw GatewayError(GatewayError::Kind::Auth,
                         "endpoint rejected credentials (HTTP " +
                             std::to_string(res->status) + ")");
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;  // transient: retry
    }
    if (res->status != 200)
      throw GatewayError(GatewayError::Kind::MalformedResponse,
                         "unexpected HTTP status " + std::to_string(res->status) +
                             ": " + res->body);
    try {
      nlohmann::json j = nlohmann::json::parse(res->body);
      ChatResponse out;
      out.content = j.at("choices").at(0).at("message").at("content");
      if (j.contains("usage")) {
        out.input_tokens = j["usage"].value("prompt_tokens", 0L);
        out.output_tokens = j["usage"].value("completion_tokens", 0L);
      }
      if (out.input_tokens == 0 && out.output_tokens == 0) {
        long in = 0;
        for (const ChatMessage& m : request.messages)
          in += estimate_tokens(m.content);
        out.input_tokens = in;
        out.output_tokens = estimate_tokens(out.content);
        out.tokens_estimated = true;
      }
      return out;
    } catch (const nlohmann::json::exception& e) {
      throw GatewayError(GatewayError::Kind::MalformedResponse,
                         std::string("cannot parse completion response: ") +
                             e.what());
    }
  }
  if (last_error.rfind("HTTP 429", 0) == 0)
    throw GatewayError(GatewayError::Kind::RateLimited,
                       "rate limited after " +
                           std::to_string(options_.max_attempts) + " attempts");
  throw GatewayError(GatewayError::Kind::Network,
                     "giving up after " + std::to_string(options_.max_attempts) +
                         " attempts: " + last_error);
}

// ---- diff blocks ----

namespace {
const char* kOpen = "<<<<SEARCH";
const char* kSep = "====";
const char* kClose = ">>>>REPLACE";
}  // namespace

std::vector<SearchReplaceBlock> parse_blocks(const std::string& content) {
  std::vector<SearchReplaceBlock> blocks;
  std::vector<std::string> lines = split_lines(content);
  std::size_t i = 0;
  while (i < lines.size()) {
    if (trim(lines[i]) != kOpen) {
      ++i;
      continue;
    }
    ++i;
    std::vector<std::string> search, replace;
    bool sep_seen = false, closed = false;
    for (; i < lines.size(); ++i) {
      std::string t = trim(lines[i]);
      if (!sep_seen && t == kSep) {
        sep_seen = true;
        continue;
      }
      if (sep_seen && t == kClose) {
        closed = true;
        ++i;
        break;
      }
      (sep_seen ? replace : search).push_back(lines[i]);
    }
    if (!closed)
      throw MalformedDiff(sep_seen ? "diff fence missing >>>>REPLACE"
                                   : "diff fence missing ==== separator");
    SearchReplaceBlock b;
    // whole lines, each with its newline: a deletion takes the line break too
    for (const std::string& s : search) {
      b.search += s;
      b.search += '\n';
    }
    for (const std::string& s : replace) {
      b.replace += s;
      b.replace += '\n';
    }
    if (trim(b.search).empty())
      throw MalformedDiff("diff block has an empty search text");
    blocks.push_back(std::move(b));
  }
  return blocks;
}

namespace {

std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
  std::size_t count = 0, pos = 0;
  while ((pos = haystack.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
    if (count > 1) break;  // two is already ambiguous
  }
  return count;
}

std::string excerpt(const std::string& s) {
  std::string one = collapse_ws(s);
  if (one.size() > 60) {
    one.resize(57);
    one += "...";
  }
  return one;
}

}  // namespace

std::string apply_blocks(const std::string& source,
                         const std::vector<SearchReplaceBlock>& blocks) {
  std::string text = source;
  for (const SearchReplaceBlock& b : blocks) {
    std::size_t n = count_occurrences(text, b.search);
    if (n == 0)
      throw ApplyError(ApplyError::Kind::SearchNotFound,
                       "search text not found: \"" + excerpt(b.search) + "\"");
    if (n > 1)
      throw ApplyError(ApplyError::Kind::AmbiguousSearch,
                       "search text matches more than once: \"" +
                           excerpt(b.search) + "\"");
    std::size_t pos = text.find(b.search);
    text = text.substr(0, pos) + b.replace + text.substr(pos + b.search.size());
  }
  return text;
}

std::string describe_blocks(const std::vector<SearchReplaceBlock>& blocks) {
  std::size_t removed = 0, added = 0;
  for (const SearchReplaceBlock& b : blocks) {
    removed += b.search.size();
    added += b.replace.size();
  }
  std::ostringstream ss;
  ss << blocks.size() << " block(s), -" << removed << "/+" << added << " chars";
  return ss.str();
}

}  // namespace proofsmith
