#include "proofsmith/config.hpp"

#include <sys/stat.h>

#include <cstdlib>
#include <stdexcept>

#include "json.hpp"
#include "proofsmith/util.hpp"

namespace proofsmith {

namespace {

bool is_directory(const std::string& path) {
  struct stat st{};
  return ::stat(path.c_str(), &st) == 0 && S_ISDIR(st.st_mode);
}

bool file_exists(const std::string& path) {
  struct stat st{};
  return ::stat(path.c_str(), &st) == 0 && S_ISREG(st.st_mode);
}

}  // namespace

ToolConfig config_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ToolConfig cfg;

  if (j.contains("verifier")) {
    const auto& v = j.at("verifier");
    cfg.verifier.mode = v.value("mode", cfg.verifier.mode);
    cfg.verifier.path = v.value("path", cfg.verifier.path);
    if (v.contains("extra_flags"))
      cfg.verifier.extra_flags =
          v.at("extra_flags").get<std::vector<std::string>>();
    cfg.verifier.timeout_seconds =
        v.value("timeout_seconds", cfg.verifier.timeout_seconds);
    cfg.verifier.rlimit_mb = v.value("rlimit_mb", cfg.verifier.rlimit_mb);
    cfg.verifier.mock_rules_file =
        v.value("mock_rules_file", cfg.verifier.mock_rules_file);
    if (cfg.verifier.mode != "process" && cfg.verifier.mode != "mock")
      throw std::runtime_error("verifier.mode must be 'process' or 'mock'");
  }
  if (j.contains("gateway")) {
    const auto& g = j.at("gateway");
    cfg.gateway.mode = g.value("mode", cfg.gateway.mode);
    cfg.gateway.endpoint = g.value("endpoint", cfg.gateway.endpoint);
    cfg.gateway.model = g.value("model", cfg.gateway.model);
    cfg.gateway.api_key_env = g.value("api_key_env", cfg.gateway.api_key_env);
    cfg.gateway.replay_path = g.value("replay", cfg.gateway.replay_path);
    cfg.gateway.max_output_tokens =
        g.value("max_output_tokens", cfg.gateway.max_output_tokens);
    cfg.gateway.temperature = g.value("temperature", cfg.gateway.temperature);
    if (cfg.gateway.mode != "replay" && cfg.gateway.mode != "live")
      throw std::runtime_error("gateway.mode must be 'replay' or 'live'");
  }
  if (j.contains("budget")) {
    const auto& b = j.at("budget");
    cfg.budget.max_steps = b.value("max_steps", cfg.budget.max_steps);
    cfg.budget.max_wall_time =
        b.value("max_wall_time_seconds", cfg.budget.max_wall_time);
    if (cfg.budget.max_steps <= 0 || cfg.budget.max_wall_time <= 0)
      throw std::runtime_error("budget values must be positive");
  }
  cfg.context_radius = j.value("context_radius", cfg.context_radius);
  if (j.contains("actions") && j.at("actions").contains("disable"))
    cfg.disabled_actions =
        j.at("actions").at("disable").get<std::vector<std::string>>();
  if (j.contains("pricing")) {
    for (const auto& [model, p] : j.at("pricing").items()) {
      ModelPricing mp;
      mp.input_usd_per_mtok = p.value("input_usd_per_mtok", 0.0);
      mp.output_usd_per_mtok = p.value("output_usd_per_mtok", 0.0);
      if (mp.input_usd_per_mtok < 0 || mp.output_usd_per_mtok < 0)
        throw std::runtime_error("prices must be non-negative");
      cfg.pricing[model] = mp;
    }
  }
  if (j.contains("eval")) {
    const auto& e = j.at("eval");
    cfg.eval_parallel = e.value("parallel", cfg.eval_parallel);
    cfg.eval_runs = e.value("runs", cfg.eval_runs);
    if (cfg.eval_parallel < 1 || cfg.eval_runs < 1)
      throw std::runtime_error("eval.parallel and eval.runs must be >= 1");
  }
  return cfg;
}

ToolConfig load_config(const std::string& path) {
  return config_from_json(read_file(path));
}

std::unique_ptr<Verifier> make_verifier(const ToolConfig& config) {
  if (config.verifier.mode == "mock") {
    if (config.verifier.mock_rules_file.empty())
      return MockVerifier::from_json("{}");
    return MockVerifier::from_json_file(config.verifier.mock_rules_file);
  }
  VerifierConfig vc;
  vc.path = config.verifier.path;
  vc.extra_flags = config.verifier.extra_flags;
  vc.timeout_seconds = config.verifier.timeout_seconds;
  vc.rlimit_virtual_mb = config.verifier.rlimit_mb;
  return std::make_unique<ProcessVerifier>(std::move(vc));
}

std::unique_ptr<ChatBackend> make_backend(const ToolConfig& config,
                                          const ProofTask& task, int run) {
  if (config.gateway.mode == "replay") {
    std::string path = config.gateway.replay_path;
    if (path.empty())
      throw std::runtime_error("gateway.mode=replay needs gateway.replay");
    if (is_directory(path)) {
      const std::string per_run =
          path + "/" + task.task_id + ".run" + std::to_string(run) + ".jsonl";
      const std::string base = path + "/" + task.task_id + ".jsonl";
      path = file_exists(per_run) ? per_run : base;
    }
    return ReplayBackend::from_jsonl_file(path);
  }
  LiveBackend::Options opts;
  opts.endpoint = config.gateway.endpoint;
  if (!config.gateway.api_key_env.empty()) {
    const char* key = std::getenv(config.gateway.api_key_env.c_str());
    if (key) opts.api_key = key;
  }
  return std::make_unique<LiveBackend>(std::move(opts));
}

std::vector<ActionSpec> build_registry(const ToolConfig& config) {
  std::vector<ActionSpec> registry = default_registry();
  if (config.disabled_actions.empty()) return registry;
  std::vector<ActionSpec> kept;
  for (auto& action : registry) {
    bool disabled = false;
    for (const auto& id : config.disabled_actions)
      if (id == action.action_id) disabled = true;
    if (!disabled) kept.push_back(std::move(action));
  }
  if (kept.empty()) throw std::runtime_error("all actions disabled");
  return kept;
}

OrchestratorOptions orchestrator_options(const ToolConfig& config) {
  OrchestratorOptions options;
  options.budget = config.budget;
  options.context_radius = config.context_radius;
  options.model_id = config.gateway.model;
  options.max_output_tokens = config.gateway.max_output_tokens;
  options.temperature = config.gateway.temperature;
  return options;
}

}  // namespace proofsmith
