#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "proofsmith/gateway.hpp"
#include "test_support.hpp"

namespace proofsmith {
namespace {

ChatRequest simple_request(const std::string& user_text) {
  ChatRequest r;
  r.messages = {{Role::System, "system text"}, {Role::User, user_text}};
  r.model_id = "replay-model";
  return r;
}

TEST(Replay, ServesEntriesInOrder) {
  auto backend = ReplayBackend::from_jsonl(
      "{\"content\": \"first\", \"input_tokens\": 10, \"output_tokens\": 2}\n"
      "# comments are skipped\n"
      "{\"content\": \"second\"}\n");
  ChatResponse a = backend->complete(simple_request("q1"));
  EXPECT_EQ(a.content, "first");
  EXPECT_EQ(a.input_tokens, 10);
  EXPECT_EQ(a.output_tokens, 2);
  EXPECT_FALSE(a.tokens_estimated);
  EXPECT_EQ(backend->complete(simple_request("q2")).content, "second");
  EXPECT_EQ(backend->calls(), 2);
}

TEST(Replay, ExhaustionRaises) {
  auto backend = ReplayBackend::from_jsonl("{\"content\": \"only\"}\n");
  backend->complete(simple_request("q"));
  try {
    backend->complete(simple_request("q"));
    FAIL() << "expected ReplayExhausted";
  } catch (const GatewayError& e) {
    EXPECT_EQ(e.kind(), GatewayError::Kind::ReplayExhausted);
  }
}

TEST(Replay, OrdinalPinning) {
  auto ok = ReplayBackend::from_jsonl(
      "{\"content\": \"a\", \"match\": {\"ordinal\": 1}}\n"
      "{\"content\": \"b\", \"match\": {\"ordinal\": 2}}\n");
  EXPECT_EQ(ok->complete(simple_request("q")).content, "a");
  EXPECT_EQ(ok->complete(simple_request("q")).content, "b");

  auto bad = ReplayBackend::from_jsonl(
      "{\"content\": \"a\", \"match\": {\"ordinal\": 2}}\n");
  try {
    bad->complete(simple_request("q"));
    FAIL() << "expected ReplayMismatch";
  } catch (const GatewayError& e) {
    EXPECT_EQ(e.kind(), GatewayError::Kind::ReplayMismatch);
  }
}

TEST(Replay, MessagesHashPinning) {
  ChatRequest req = simple_request("the exact question");
  std::string h = messages_hash(req.messages);
  auto ok = ReplayBackend::from_jsonl(
      "{\"content\": \"pinned\", \"match\": {\"messages_hash\": \"" + h + "\"}}\n");
  EXPECT_EQ(ok->complete(req).content, "pinned");

  auto bad = ReplayBackend::from_jsonl(
      "{\"content\": \"pinned\", \"match\": {\"messages_hash\": \"" + h + "\"}}\n");
  try {
    bad->complete(simple_request("a different question"));
    FAIL() << "expected ReplayMismatch";
  } catch (const GatewayError& e) {
    EXPECT_EQ(e.kind(), GatewayError::Kind::ReplayMismatch);
  }
}

TEST(Replay, HashCoversRolesAndContent) {
  std::vector<ChatMessage> a = {{Role::User, "x"}};
  std::vector<ChatMessage> b = {{Role::Assistant, "x"}};
  std::vector<ChatMessage> c = {{Role::User, "y"}};
  EXPECT_NE(messages_hash(a), messages_hash(b));
  EXPECT_NE(messages_hash(a), messages_hash(c));
  EXPECT_EQ(messages_hash(a), messages_hash({{Role::User, "x"}}));
  EXPECT_EQ(messages_hash(a).size(), 16u);
}

TEST(Replay, MissingTokenCountsAreEstimated) {
  auto backend = ReplayBackend::from_jsonl("{\"content\": \"reply text\"}\n");
  ChatResponse r = backend->complete(simple_request("some question"));
  EXPECT_TRUE(r.tokens_estimated);
  EXPECT_GT(r.input_tokens, 0);
  EXPECT_GT(r.output_tokens, 0);
}

// ---- live backend against a local HTTP server ----

class LocalServer {
 public:
  LocalServer() {
    server_.Post("/v1/chat/completions",
                 [this](const httplib::Request& req, httplib::Response& res) {
                   ++hits_;
                   last_auth_ = req.get_header_value("Authorization");
                   last_body_ = req.body;
                   if (fail_first_ && hits_ == 1) {
                     res.status = 500;
                     res.set_content("overloaded", "text/plain");
                     return;
                   }
                   res.set_content(
                       R"({"choices": [{"message": {"content": "pong"}}],
                           "usage": {"prompt_tokens": 42, "completion_tokens": 7}})",
                       "application/json");
                 });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    thread_.join();
  }

  std::string endpoint() const {
    return "http://127.0.0.1:" + std::to_string(port_) + "/v1";
  }

  std::atomic<int> hits_{0};
  bool fail_first_ = false;
  std::string last_auth_;
  std::string last_body_;

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST(LiveBackend, PostsOpenAiStylePayload) {
  LocalServer server;
  LiveBackend backend({server.endpoint(), "sk-test", 3, 0.01, 5.0});
  ChatResponse r = backend.complete(simple_request("ping"));
  EXPECT_EQ(r.content, "pong");
  EXPECT_EQ(r.input_tokens, 42);
  EXPECT_EQ(r.output_tokens, 7);
  EXPECT_FALSE(r.tokens_estimated);
  EXPECT_EQ(server.last_auth_, "Bearer sk-test");
  EXPECT_NE(server.last_body_.find("\"messages\""), std::string::npos);
  EXPECT_NE(server.last_body_.find("replay-model"), std::string::npos);
}

TEST(LiveBackend, RetriesTransientServerErrors) {
  LocalServer server;
  server.fail_first_ = true;
  LiveBackend backend({server.endpoint(), "", 3, 0.01, 5.0});
  ChatResponse r = backend.complete(simple_request("ping"));
  EXPECT_EQ(r.content, "pong");
  EXPECT_EQ(server.hits_.load(), 2);
}

TEST(LiveBackend, UnreachableHostRaisesNetwork) {
  LiveBackend backend({"http://127.0.0.1:1/v1", "", 1, 0.01, 0.5});
  try {
    backend.complete(simple_request("ping"));
    FAIL() << "expected GatewayError";
  } catch (const GatewayError& e) {
    EXPECT_EQ(e.kind(), GatewayError::Kind::Network);
  }
}

// ---- search/replace edit blocks ----

const char kReply[] =
    "Some prose before.\n"
    "<<<<SEARCH\n"
    "old line one\n"
    "old line two\n"
    "====\n"
    "new line\n"
    ">>>>REPLACE\n"
    "Prose between blocks.\n"
    "<<<<SEARCH\n"
    "second target\n"
    "====\n"
    ">>>>REPLACE\n"
    "Trailing prose.\n";

TEST(DiffBlocks, ParsesFencedBlocks) {
  auto blocks = parse_blocks(kReply);
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_EQ(blocks[0].search, "old line one\nold line two\n");
  EXPECT_EQ(blocks[0].replace, "new line\n");
  EXPECT_EQ(blocks[1].search, "second target\n");
  EXPECT_EQ(blocks[1].replace, "");  // pure deletion
}

TEST(DiffBlocks, NoFencesMeansEmptyList) {
  EXPECT_TRUE(parse_blocks("just prose, no edits").empty());
}

TEST(DiffBlocks, MalformedFencesThrow) {
  EXPECT_THROW(parse_blocks("<<<<SEARCH\nabc\n"), MalformedDiff);
  EXPECT_THROW(parse_blocks("<<<<SEARCH\nabc\n====\nxyz\n"), MalformedDiff);
  EXPECT_THROW(parse_blocks("<<<<SEARCH\n====\nxyz\n>>>>REPLACE\n"), MalformedDiff);
}

TEST(DiffBlocks, ApplyReplacesExactlyOnce) {
  std::string src = "aaa\nold line one\nold line two\nbbb\nsecond target\nccc\n";
  std::string out = apply_blocks(src, parse_blocks(kReply));
  EXPECT_EQ(out, "aaa\nnew line\nbbb\nccc\n");
}

TEST(DiffBlocks, ApplyErrorsAreTyped) {
  std::vector<SearchReplaceBlock> missing = {{"not present\n", "x\n"}};
  try {
    apply_blocks("abc\n", missing);
    FAIL() << "expected SearchNotFound";
  } catch (const ApplyError& e) {
    EXPECT_EQ(e.kind(), ApplyError::Kind::SearchNotFound);
  }

  std::vector<SearchReplaceBlock> dup = {{"dup\n", "x\n"}};
  try {
    apply_blocks("dup\nmiddle\ndup\n", dup);
    FAIL() << "expected AmbiguousSearch";
  } catch (const ApplyError& e) {
    EXPECT_EQ(e.kind(), ApplyError::Kind::AmbiguousSearch);
  }
}

TEST(DiffBlocks, DescribeSummarizesSizes) {
  std::string d = describe_blocks(parse_blocks(kReply));
  EXPECT_NE(d.find("2 block(s)"), std::string::npos);
}

}  // namespace
}  // namespace proofsmith
