#include "iecoregen/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "iecoregen/errors.hpp"

namespace iecoregen {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int parse_int(const std::string& key, const std::string& value) {
  int out = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(),
                                 out);
  if (ec != std::errc() || p != value.data() + value.size()) {
    throw ConfigError(key + " expects an integer, got '" + value + "'");
  }
  return out;
}

std::int64_t parse_int64(const std::string& key, const std::string& value) {
  std::int64_t out = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(),
                                 out);
  if (ec != std::errc() || p != value.data() + value.size()) {
    throw ConfigError(key + " expects an integer, got '" + value + "'");
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t consumed = 0;
    double out = std::stod(value, &consumed);
    if (consumed != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    throw ConfigError(key + " expects a number, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on")
    return true;
  if (value == "false" || value == "0" || value == "no" || value == "off")
    return false;
  throw ConfigError(key + " expects a boolean, got '" + value + "'");
}

std::vector<int> parse_int_list(const std::string& key,
                                const std::string& value) {
  std::vector<int> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_int(key, item));
  }
  if (out.empty()) throw ConfigError(key + " expects a list of integers");
  return out;
}

// One setter per known "section.key".
bool apply_setting(RunConfig& c, const std::string& section,
                   const std::string& key, const std::string& value) {
  std::string full = section + "." + key;
  if (full == "provider.mode") c.provider_mode = value;
  else if (full == "provider.endpoint") c.endpoint = value;
  else if (full == "provider.model") c.model_name = value;
  else if (full == "provider.temperature") c.temperature = parse_double(full, value);
  else if (full == "provider.timeout_seconds") c.timeout_seconds = parse_int(full, value);
  else if (full == "provider.max_retries") c.max_retries = parse_int(full, value);
  else if (full == "provider.transcript") c.transcript_path = value;
  else if (full == "provider.api_key_env") c.api_key_env = value;
  else if (full == "provider.max_tokens") c.max_tokens = parse_int(full, value);
  else if (full == "backend.kind") c.backend_kind = value;
  else if (full == "backend.tool_command") c.tool_command = value;
  else if (full == "backend.tool_timeout_seconds") c.tool_timeout_seconds = parse_int(full, value);
  else if (full == "backend.tool_pattern") c.tool_pattern = value;
  else if (full == "run.workspace") c.workspace = value;
  else if (full == "run.max_fix_iterations") c.max_fix_iterations = parse_int(full, value);
  else if (full == "run.context_char_budget") c.context_char_budget = parse_int(full, value);
  else if (full == "run.step_budget") c.step_budget = parse_int64(full, value);
  else if (full == "run.n") c.n = parse_int(full, value);
  else if (full == "run.k") c.k_values = parse_int_list(full, value);
  else if (full == "run.jobs") c.jobs = parse_int(full, value);
  else if (full == "run.no_decompose") c.ablation.no_decompose = parse_bool(full, value);
  else if (full == "run.no_compress") c.ablation.no_compress = parse_bool(full, value);
  else if (full == "run.no_context") c.ablation.no_context = parse_bool(full, value);
  else if (full == "run.no_fix") c.ablation.no_fix = parse_bool(full, value);
  else if (section == "prompts") c.prompt_files[key] = value;
  else return false;
  return true;
}

const char* kSections[] = {"provider", "backend", "run", "prompts"};
const char* kKeys[] = {
    "mode", "endpoint", "model", "temperature", "timeout_seconds",
    "max_retries", "transcript", "api_key_env", "max_tokens", "kind",
    "tool_command", "tool_timeout_seconds", "tool_pattern", "workspace",
    "max_fix_iterations", "context_char_budget", "step_budget", "n", "k",
    "jobs", "no_decompose", "no_compress", "no_context", "no_fix",
    "decompose", "completion", "fix", "baseline", "baseline_fix", "testgen",
};

}  // namespace

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  RunConfig config;
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t.front() == '#' || t.front() == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        throw ConfigError(path + ":" + std::to_string(line_no) +
                          ": unterminated section header");
      }
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected key = value");
    }
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (section.empty()) {
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": key outside any [section]");
    }
    if (!apply_setting(config, section, key, value)) {
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": unknown setting " + section + "." + key);
    }
  }
  return config;
}

void apply_env_overrides(RunConfig& config) {
  for (const char* section : kSections) {
    for (const char* key : kKeys) {
      std::string env_name = "IECOREGEN_" + std::string(section) + "_" + key;
      std::transform(env_name.begin(), env_name.end(), env_name.begin(),
                     [](unsigned char c) {
                       return static_cast<char>(std::toupper(c));
                     });
      if (const char* value = std::getenv(env_name.c_str())) {
        apply_setting(config, section, key, value);
      }
    }
  }
}

void validate_config(const RunConfig& config) {
  if (config.provider_mode != "live" && config.provider_mode != "record" &&
      config.provider_mode != "replay") {
    throw ConfigError("provider.mode must be live, record or replay");
  }
  if ((config.provider_mode == "replay" || config.provider_mode == "record") &&
      config.transcript_path.empty()) {
    throw ConfigError(config.provider_mode +
                      " mode requires provider.transcript");
  }
  if (config.backend_kind != "minioo" && config.backend_kind != "external") {
    throw ConfigError("backend.kind must be minioo or external");
  }
  if (config.backend_kind == "external" &&
      (config.tool_command.empty() || config.tool_pattern.empty())) {
    throw ConfigError(
        "the external backend requires backend.tool_command and "
        "backend.tool_pattern");
  }
  if (config.temperature > 2.0) {
    throw ConfigError("provider.temperature must lie in [0, 2]");
  }
  if (config.n < 1) throw ConfigError("run.n must be at least 1");
  for (int k : config.k_values) {
    if (k < 1 || k > config.n) {
      throw ConfigError("every k must satisfy 1 <= k <= n (k=" +
                        std::to_string(k) + ", n=" + std::to_string(config.n) +
                        ")");
    }
  }
  if (config.max_fix_iterations < 0) {
    throw ConfigError("run.max_fix_iterations must be >= 0");
  }
  if (config.jobs < 1) throw ConfigError("run.jobs must be >= 1");
}

std::shared_ptr<ChatProvider> make_provider(const RunConfig& config) {
  if (config.provider_mode == "replay") {
    return std::make_shared<ReplayProvider>(config.transcript_path);
  }
  ProviderConfig pc;
  pc.endpoint = config.endpoint;
  pc.model_name = config.model_name;
  pc.api_key_env = config.api_key_env;
  pc.timeout_seconds = config.timeout_seconds;
  pc.max_retries = config.max_retries;
  auto live = std::make_shared<HttpChatProvider>(
      pc, make_httplib_transport(config.endpoint, config.timeout_seconds));
  if (config.provider_mode == "live") return live;
  return std::make_shared<RecordingProvider>(live, config.transcript_path);
}

PromptTemplates load_templates(const RunConfig& config) {
  PromptTemplates templates = PromptTemplates::defaults();
  auto load = [&](const char* key, std::string& slot) {
    auto it = config.prompt_files.find(key);
    if (it == config.prompt_files.end()) return;
    std::ifstream in(it->second, std::ios::binary);
    if (!in) throw ConfigError("cannot read prompt template " + it->second);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    slot = buffer.str();
  };
  load("decompose", templates.decompose);
  load("completion", templates.completion);
  load("fix", templates.fix);
  load("baseline", templates.baseline);
  load("baseline_fix", templates.baseline_fix);
  load("testgen", templates.testgen);
  return templates;
}

ToolConfig tool_config_of(const RunConfig& config) {
  ToolConfig tc;
  tc.command_template = config.tool_command;
  tc.timeout_seconds = config.tool_timeout_seconds;
  tc.diagnostic_pattern = config.tool_pattern;
  return tc;
}

}  // namespace iecoregen
