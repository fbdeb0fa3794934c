#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "iecoregen/completion.hpp"
#include "iecoregen/external_tool.hpp"
#include "iecoregen/gateway.hpp"

namespace iecoregen {

/// Full run configuration. Values come from the configuration file,
/// overridden by IECOREGEN_<SECTION>_<KEY> environment variables,
/// overridden by command-line flags.
struct RunConfig {
  // [provider]
  std::string provider_mode = "replay";  // live | record | replay
  std::string endpoint = "http://localhost:8080/v1";
  std::string model_name = "replay-model";
  double temperature = -1.0;  // <0: 0.8 when n>1, else 0.2
  int timeout_seconds = 60;
  int max_retries = 3;
  std::string transcript_path;
  std::string api_key_env = "IECOREGEN_API_KEY";
  int max_tokens = 8192;

  // [backend]
  std::string backend_kind = "minioo";  // minioo | external
  std::string tool_command;             // external: template with {files}
  int tool_timeout_seconds = 60;
  std::string tool_pattern;             // external: named-capture regex

  // [run]
  std::string workspace = "workspace";
  int max_fix_iterations = 3;
  int context_char_budget = kDefaultContextCharBudget;
  std::int64_t step_budget = 1'000'000;
  int n = 5;
  std::vector<int> k_values{1, 3};
  int jobs = 1;
  AblationFlags ablation;

  // [prompts] — template override file paths, keyed by template name.
  std::map<std::string, std::string> prompt_files;

  /// Effective sampling temperature per the n-dependent default rule.
  double effective_temperature() const {
    if (temperature >= 0.0) return temperature;
    return n > 1 ? 0.8 : 0.2;
  }
};

/// Parses the flat `key = value` file with `[section]` headers and `#`/`;`
/// comments. Unknown keys are errors (they are usually typos).
RunConfig load_config_file(const std::string& path);

/// Applies IECOREGEN_<SECTION>_<KEY> environment overrides in place.
void apply_env_overrides(RunConfig& config);

/// Enforces the cross-field invariants (replay needs a transcript path,
/// the external backend needs a tool configuration, every k <= n).
/// Throws ConfigError.
void validate_config(const RunConfig& config);

/// Builds the provider for the configured mode. Replay never constructs a
/// transport; record wraps the live provider with the transcript writer.
std::shared_ptr<ChatProvider> make_provider(const RunConfig& config);

/// Default templates with any configured per-template file overrides
/// applied.
PromptTemplates load_templates(const RunConfig& config);

ToolConfig tool_config_of(const RunConfig& config);

}  // namespace iecoregen
