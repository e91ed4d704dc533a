#include "proofsmith/config.hpp"

#include <gtest/gtest.h>

#include <string>

#include "test_support.hpp"

namespace proofsmith {
namespace {

ChatRequest any_request() {
  ChatRequest req;
  req.messages = {{Role::User, "hello"}};
  return req;
}

TEST(Config, EmptyJsonKeepsEveryDefault) {
  ToolConfig cfg = config_from_json("{}");
  EXPECT_EQ(cfg.verifier.mode, "process");
  EXPECT_EQ(cfg.verifier.path, "verus");
  EXPECT_DOUBLE_EQ(cfg.verifier.timeout_seconds, 120.0);
  EXPECT_EQ(cfg.gateway.mode, "replay");
  EXPECT_EQ(cfg.gateway.model, "replay-model");
  EXPECT_EQ(cfg.budget.max_steps, 20);
  EXPECT_DOUBLE_EQ(cfg.budget.max_wall_time, 1200.0);
  EXPECT_EQ(cfg.context_radius, 30);
  EXPECT_TRUE(cfg.disabled_actions.empty());
  EXPECT_TRUE(cfg.pricing.empty());
  EXPECT_EQ(cfg.eval_parallel, 1);
  EXPECT_EQ(cfg.eval_runs, 1);
}

TEST(Config, FullJsonSetsEveryField) {
  ToolConfig cfg = config_from_json(R"({
    "verifier": {"mode": "mock", "path": "/opt/verus", "extra_flags": ["--crate-type", "lib"],
                 "timeout_seconds": 5.5, "rlimit_mb": 4096, "mock_rules_file": "rules.json"},
    "gateway": {"mode": "live", "endpoint": "http://localhost:9/v1", "model": "m-1",
                "api_key_env": "KEY_ENV", "replay": "transcripts/",
                "max_output_tokens": 1024, "temperature": 0.7},
    "budget": {"max_steps": 5, "max_wall_time_seconds": 60},
    "context_radius": 12,
    "actions": {"disable": ["bit-vector", "integer-ring"]},
    "pricing": {"m-1": {"input_usd_per_mtok": 3.0, "output_usd_per_mtok": 15.0}},
    "eval": {"parallel": 8, "runs": 3}
  })");
  EXPECT_EQ(cfg.verifier.mode, "mock");
  EXPECT_EQ(cfg.verifier.path, "/opt/verus");
  ASSERT_EQ(cfg.verifier.extra_flags.size(), 2u);
  EXPECT_EQ(cfg.verifier.extra_flags[1], "lib");
  EXPECT_DOUBLE_EQ(cfg.verifier.timeout_seconds, 5.5);
  EXPECT_EQ(cfg.verifier.rlimit_mb, 4096);
  EXPECT_EQ(cfg.verifier.mock_rules_file, "rules.json");
  EXPECT_EQ(cfg.gateway.mode, "live");
  EXPECT_EQ(cfg.gateway.endpoint, "http://localhost:9/v1");
  EXPECT_EQ(cfg.gateway.model, "m-1");
  EXPECT_EQ(cfg.gateway.api_key_env, "KEY_ENV");
  EXPECT_EQ(cfg.gateway.replay_path, "transcripts/");
  EXPECT_EQ(cfg.gateway.max_output_tokens, 1024);
  EXPECT_DOUBLE_EQ(cfg.gateway.temperature, 0.7);
  EXPECT_EQ(cfg.budget.max_steps, 5);
  EXPECT_DOUBLE_EQ(cfg.budget.max_wall_time, 60.0);
  EXPECT_EQ(cfg.context_radius, 12);
  ASSERT_EQ(cfg.disabled_actions.size(), 2u);
  ASSERT_EQ(cfg.pricing.count("m-1"), 1u);
  EXPECT_DOUBLE_EQ(cfg.pricing["m-1"].output_usd_per_mtok, 15.0);
  EXPECT_EQ(cfg.eval_parallel, 8);
  EXPECT_EQ(cfg.eval_runs, 3);
}

TEST(Config, RejectsInvalidValues) {
  EXPECT_THROW(config_from_json(R"({"verifier": {"mode": "dream"}})"),
               std::runtime_error);
  EXPECT_THROW(config_from_json(R"({"gateway": {"mode": "psychic"}})"),
               std::runtime_error);
  EXPECT_THROW(config_from_json(R"({"budget": {"max_steps": 0}})"),
               std::runtime_error);
  EXPECT_THROW(
      config_from_json(R"({"budget": {"max_wall_time_seconds": -1}})"),
      std::runtime_error);
  EXPECT_THROW(
      config_from_json(
          R"({"pricing": {"m": {"input_usd_per_mtok": -0.5}}})"),
      std::runtime_error);
  EXPECT_THROW(config_from_json(R"({"eval": {"parallel": 0}})"),
               std::runtime_error);
  EXPECT_THROW(config_from_json("not json"), std::exception);
}

TEST(Config, LoadReadsAFile) {
  testsupport::TempDir dir;
  testsupport::write_file(dir.file("cfg.json"),
                          R"({"context_radius": 3})");
  EXPECT_EQ(load_config(dir.file("cfg.json")).context_radius, 3);
  EXPECT_THROW(load_config(dir.file("absent.json")), std::runtime_error);
}

// ---- factories ----

TEST(ConfigFactories, MockVerifierFromRulesFile) {
  testsupport::TempDir dir;
  testsupport::write_file(dir.file("rules.json"), R"({
    "rules": [{"match": {"contains": "bad"}, "report": {"errors": 2}}],
    "default": {"verified": 1, "errors": 0}
  })");
  ToolConfig cfg = config_from_json("{}");
  cfg.verifier.mode = "mock";
  cfg.verifier.mock_rules_file = dir.file("rules.json");
  auto verifier = make_verifier(cfg);
  EXPECT_TRUE(verifier->check("fine", "t").success());
  EXPECT_FALSE(verifier->check("bad", "t").success());
}

TEST(ConfigFactories, MockVerifierWithoutRulesUsesTheBuiltInFailure) {
  ToolConfig cfg = config_from_json("{}");
  cfg.verifier.mode = "mock";
  auto verifier = make_verifier(cfg);
  EXPECT_FALSE(verifier->check("anything", "t").success());
}

TEST(ConfigFactories, ProcessVerifierCarriesThePath) {
  ToolConfig cfg = config_from_json("{}");
  auto verifier = make_verifier(cfg);
  EXPECT_NE(dynamic_cast<ProcessVerifier*>(verifier.get()), nullptr);
}

TEST(ConfigFactories, ReplayFileBackend) {
  testsupport::TempDir dir;
  testsupport::write_file(dir.file("t.jsonl"),
                          R"({"content": "from file", "input_tokens": 1, "output_tokens": 1})"
                          "\n");
  ToolConfig cfg = config_from_json("{}");
  cfg.gateway.replay_path = dir.file("t.jsonl");
  ProofTask task;
  task.task_id = "whatever";
  auto backend = make_backend(cfg, task);
  EXPECT_EQ(backend->complete(any_request()).content, "from file");
}

TEST(ConfigFactories, ReplayDirectoryPrefersThePerRunTranscript) {
  testsupport::TempDir dir;
  testsupport::write_file(dir.file("alpha.jsonl"),
                          R"({"content": "base"})" "\n");
  testsupport::write_file(dir.file("alpha.run2.jsonl"),
                          R"({"content": "second run"})" "\n");
  ToolConfig cfg = config_from_json("{}");
  cfg.gateway.replay_path = dir.str();
  ProofTask task;
  task.task_id = "alpha";
  EXPECT_EQ(make_backend(cfg, task, 1)->complete(any_request()).content,
            "base");
  EXPECT_EQ(make_backend(cfg, task, 2)->complete(any_request()).content,
            "second run");
  task.task_id = "missing";
  EXPECT_THROW(make_backend(cfg, task, 1), std::runtime_error);
}

TEST(ConfigFactories, ReplayModeNeedsAPath) {
  ToolConfig cfg = config_from_json("{}");
  ProofTask task;
  EXPECT_THROW(make_backend(cfg, task), std::runtime_error);
}

TEST(ConfigFactories, RegistryDropsDisabledActions) {
  ToolConfig cfg = config_from_json("{}");
  EXPECT_EQ(build_registry(cfg).size(), default_registry().size());

  cfg.disabled_actions = {"bit-vector", "induction"};
  auto registry = build_registry(cfg);
  EXPECT_EQ(registry.size(), default_registry().size() - 2);
  for (const auto& a : registry) {
    EXPECT_NE(a.action_id, "bit-vector");
    EXPECT_NE(a.action_id, "induction");
  }

  for (const auto& a : default_registry())
    cfg.disabled_actions.push_back(a.action_id);
  EXPECT_THROW(build_registry(cfg), std::runtime_error);
}

TEST(ConfigFactories, OrchestratorOptionsMirrorTheConfig) {
  ToolConfig cfg = config_from_json(R"({
    "gateway": {"model": "m-9", "max_output_tokens": 777, "temperature": 0.3},
    "budget": {"max_steps": 4, "max_wall_time_seconds": 9},
    "context_radius": 5
  })");
  OrchestratorOptions o = orchestrator_options(cfg);
  EXPECT_EQ(o.budget.max_steps, 4);
  EXPECT_DOUBLE_EQ(o.budget.max_wall_time, 9.0);
  EXPECT_EQ(o.context_radius, 5);
  EXPECT_EQ(o.model_id, "m-9");
  EXPECT_EQ(o.max_output_tokens, 777);
  EXPECT_DOUBLE_EQ(o.temperature, 0.3);
}

}  // namespace
}  // namespace proofsmith
