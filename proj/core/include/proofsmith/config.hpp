#pragma once

#include <memory>
#include <string>
#include <vector>

#include "proofsmith/actions.hpp"
#include "proofsmith/gateway.hpp"
#include "proofsmith/model.hpp"
#include "proofsmith/orchestrator.hpp"
#include "proofsmith/verifier.hpp"

namespace proofsmith {

struct VerifierSettings {
  std::string mode = "process";  // "process" or "mock"
  std::string path = "verus";
  std::vector<std::string> extra_flags;
  double timeout_seconds = 120.0;
  long rlimit_mb = 0;
  std::string mock_rules_file;  // mock mode; empty uses the built-in default
};

struct GatewaySettings {
  std::string mode = "replay";  // "replay" or "live"
  std::string endpoint;
  std::string model = "replay-model";
  std::string api_key_env;  // environment variable holding the key
  std::string replay_path;  // transcript file, or a directory of
                            // <task_id>.jsonl / <task_id>.run<K>.jsonl
  int max_output_tokens = 4096;
  double temperature = 0.0;
};

/// Everything the CLI tools read from one JSON config file:
///   { "verifier": {"mode", "path", "extra_flags", "timeout_seconds",
///                  "rlimit_mb", "mock_rules_file"},
///     "gateway":  {"mode", "endpoint", "model", "api_key_env", "replay",
///                  "max_output_tokens", "temperature"},
///     "budget":   {"max_steps", "max_wall_time_seconds"},
///     "context_radius": N,
///     "actions":  {"disable": ["id", ...]},
///     "pricing":  {"model-id": {"input_usd_per_mtok": X,
///                               "output_usd_per_mtok": Y}},
///     "eval":     {"parallel": N, "runs": K} }
/// Every field is optional; absent fields keep their defaults.
struct ToolConfig {
  VerifierSettings verifier;
  GatewaySettings gateway;
  RunBudget budget;
  int context_radius = 30;
  std::vector<std::string> disabled_actions;
  PricingTable pricing;
  int eval_parallel = 1;
  int eval_runs = 1;
};

ToolConfig config_from_json(const std::string& text);
ToolConfig load_config(const std::string& path);

std::unique_ptr<Verifier> make_verifier(const ToolConfig& config);

/// Replay mode resolves a directory replay_path to the task's own
/// transcript (preferring <task_id>.run<K>.jsonl over <task_id>.jsonl).
/// Live mode reads the API key from the configured environment variable.
std::unique_ptr<ChatBackend> make_backend(const ToolConfig& config,
                                          const ProofTask& task, int run = 1);

/// The default registry minus the disabled action ids.
std::vector<ActionSpec> build_registry(const ToolConfig& config);

OrchestratorOptions orchestrator_options(const ToolConfig& config);

}  // namespace proofsmith
