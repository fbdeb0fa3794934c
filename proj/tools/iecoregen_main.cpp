// Command-line entry point: validate | decompose | skeleton | run | eval.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "iecoregen/config.hpp"
#include "iecoregen/decompose.hpp"
#include "iecoregen/errors.hpp"
#include "iecoregen/eval.hpp"
#include "iecoregen/external_tool.hpp"
#include "iecoregen/minioo/minioo.hpp"
#include "iecoregen/model_text.hpp"
#include "iecoregen/repair.hpp"

namespace {

using namespace iecoregen;

std::string read_file_or_fail(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ModelPackage parse_model_or_fail(const std::string& path) {
  auto result = parse_model(read_file_or_fail(path));
  if (!result.ok()) {
    std::string message = path + " is not a valid model:";
    for (const auto& e : result.errors) message += "\n  " + e.to_string();
    throw ConfigError(message);
  }
  return *result.package;
}

/// Owns the configured backend; `external` routes compilation through the
/// configured tool while MiniOO provides generation and testing.
struct BackendChoice {
  explicit BackendChoice(const RunConfig& config)
      : minioo(config.step_budget) {
    if (config.backend_kind == "external") {
      external = std::make_unique<ExternalToolBackend>(
          minioo, tool_config_of(config),
          std::filesystem::path(config.workspace) / ".toolruns");
    }
  }
  const Backend& get() const {
    return external ? static_cast<const Backend&>(*external)
                    : static_cast<const Backend&>(minioo);
  }

  minioo::MiniooBackend minioo;
  std::unique_ptr<ExternalToolBackend> external;
};

RunSettings settings_of(const RunConfig& config,
                        const PromptTemplates& templates) {
  RunSettings s;
  s.model_name = config.model_name;
  s.temperature = config.effective_temperature();
  s.max_tokens = config.max_tokens;
  s.max_fix_iterations = config.max_fix_iterations;
  s.context_char_budget = config.context_char_budget;
  s.step_budget = config.step_budget;
  s.use_canonical_tests = config.provider_mode == "replay";
  s.templates = &templates;
  return s;
}

int cmd_validate(const std::string& model_file) {
  auto result = parse_model_unchecked(read_file_or_fail(model_file));
  if (!result.package.has_value()) {
    for (const auto& e : result.errors)
      std::cerr << model_file << ": " << e.to_string() << "\n";
    return 1;
  }
  auto violations = validate_model(*result.package);
  if (violations.empty()) {
    std::cout << model_file << ": ok (" << result.package->classes.size()
              << " classes, " << result.package->enums.size() << " enums)\n";
  } else {
    for (const auto& v : violations) {
      std::cout << model_file << ": " << to_string(v.kind) << " at "
                << v.location << ": " << v.message << "\n";
    }
  }
  return 0;
}

int cmd_decompose(const RunConfig& config, const PromptTemplates& templates,
                  const std::string& model_file, const std::string& req_file,
                  std::string out_file) {
  ModelPackage model = parse_model_or_fail(model_file);
  std::string requirement = read_file_or_fail(req_file);
  if (out_file.empty()) {
    out_file = std::filesystem::path(model_file)
                   .replace_extension(".annotated.cmdl")
                   .string();
  }

  ModelPackage annotated;
  std::vector<std::string> warnings;
  if (config.ablation.no_decompose) {
    annotated = passthrough_annotation(model, requirement);
  } else {
    auto provider = make_provider(config);
    DecomposeOptions options;
    options.model_name = config.model_name;
    options.temperature = config.effective_temperature();
    options.max_tokens = config.max_tokens;
    options.templates = &templates;
    annotated = decompose(model, requirement, *provider, options, &warnings);
  }
  std::ofstream out(out_file, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + out_file);
  out << serialize_model(annotated);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "annotated model written to " << out_file << "\n";
  return 0;
}

int cmd_skeleton(const RunConfig& config, const std::string& model_file,
                 std::string out_dir) {
  ModelPackage model = parse_model_or_fail(model_file);
  if (out_dir.empty())
    out_dir = (std::filesystem::path(config.workspace) / "skeleton").string();
  minioo::MiniooBackend backend(config.step_budget);
  std::vector<SourceUnit> units;
  try {
    units = backend.generate_skeleton(model);
  } catch (const UnannotatedOperationError& e) {
    throw ConfigError(std::string(e.what()) +
                      "; run `iecoregen decompose` (or --no-decompose) first");
  }
  for (const auto& u : units) {
    std::filesystem::path target = std::filesystem::path(out_dir) / u.path;
    std::filesystem::create_directories(target.parent_path());
    std::ofstream out(target, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + target.string());
    out << u.text;
    std::cout << target.string() << "\n";
  }
  return 0;
}

int cmd_run(const RunConfig& config, const PromptTemplates& templates,
            const std::string& problem_dir, const std::string& approach,
            int sample_index) {
  auto kind = parse_approach(approach);
  if (!kind) throw ConfigError("unknown approach " + approach);
  Problem problem = load_problem(problem_dir);
  for (const auto& w : validate_problem(problem))
    std::cerr << "warning: " << w << "\n";

  auto provider = make_provider(config);
  BackendChoice backend(config);
  RunSettings settings = settings_of(config, templates);

  std::filesystem::path dir = std::filesystem::path(config.workspace) /
                              approach_label(*kind, config.ablation) /
                              problem.id /
                              ("sample" + std::to_string(sample_index));
  SampleWorkspace ws(dir);
  LoggingProvider logger(provider, &ws);

  SampleRunResult result =
      *kind == ApproachKind::Iecoregen
          ? run_iecoregen_sample(problem, config.ablation, logger,
                                 backend.get(), sample_index, settings, ws)
          : run_baseline_sample(problem, *kind, logger, backend.get(),
                                sample_index, settings, ws);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "sample artifacts: " << dir.string() << "\n"
            << "compiled: " << (result.record.compiled ? "yes" : "no")
            << "  tests: " << result.record.tests_passed << "/"
            << result.record.tests_total
            << "  passed: " << (result.record.passed ? "yes" : "no") << "\n";
  return 0;
}

int cmd_eval(const RunConfig& config, const PromptTemplates& templates,
             const std::string& bench_dir,
             const std::vector<std::string>& approaches,
             const std::vector<std::string>& problems) {
  EvalRequest request;
  request.bench_dir = bench_dir;
  request.problem_filter = problems;
  for (const auto& name : approaches) {
    auto kind = parse_approach(name);
    if (!kind) throw ConfigError("unknown approach " + name);
    AblationFlags flags =
        *kind == ApproachKind::Iecoregen ? config.ablation : AblationFlags{};
    request.approaches.emplace_back(*kind, flags);
  }
  if (request.approaches.empty()) {
    request.approaches.emplace_back(ApproachKind::Iecoregen, config.ablation);
  }
  request.n = config.n;
  request.k_values = config.k_values;
  request.jobs = config.jobs;
  request.workspace_root = config.workspace;

  auto provider = make_provider(config);
  BackendChoice backend(config);
  RunSettings settings = settings_of(config, templates);

  EvalResult result = run_eval(request, provider, backend.get(), settings);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << render_report_table(result.report);
  std::cout << "\nreport files under " << config.workspace
            << ": report.txt, report.jsonl, records.jsonl\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid template+LLM code generation pipeline"};
  app.require_subcommand(1);

  std::string config_file;
  RunConfig cli_overrides;
  bool flag_no_decompose = false, flag_no_compress = false;
  bool flag_no_context = false, flag_no_fix = false;

  app.add_option("--config", config_file, "configuration file");
  auto* workspace_opt =
      app.add_option("--workspace", cli_overrides.workspace, "artifact root");
  auto* mode_opt = app.add_option(
      "--provider-mode", cli_overrides.provider_mode, "live | record | replay");
  auto* backend_opt = app.add_option("--backend", cli_overrides.backend_kind,
                                     "minioo | external");
  auto* jobs_opt =
      app.add_option("--jobs", cli_overrides.jobs, "parallel work units");
  auto* transcript_opt = app.add_option(
      "--transcript", cli_overrides.transcript_path, "transcript file");
  auto* model_opt =
      app.add_option("--model", cli_overrides.model_name, "chat model name");
  auto* endpoint_opt =
      app.add_option("--endpoint", cli_overrides.endpoint, "chat endpoint");
  auto* temperature_opt = app.add_option(
      "--temperature", cli_overrides.temperature, "sampling temperature");
  auto* maxfix_opt =
      app.add_option("--max-fix-iterations", cli_overrides.max_fix_iterations,
                     "repair loop bound");
  app.add_flag("--no-decompose", flag_no_decompose,
               "skip requirement decomposition");
  app.add_flag("--no-compress", flag_no_compress, "skip code compression");
  app.add_flag("--no-context", flag_no_context, "skip context extraction");
  app.add_flag("--no-fix", flag_no_fix, "skip the repair loop");

  auto* validate = app.add_subcommand("validate", "check a model file");
  std::string model_file;
  validate->add_option("model", model_file, "model file (.cmdl)")->required();

  auto* decompose_cmd =
      app.add_subcommand("decompose", "annotate a model from a requirement");
  std::string req_file, out_file;
  decompose_cmd->add_option("model", model_file, "model file")->required();
  decompose_cmd->add_option("requirement", req_file, "requirement text file")
      ->required();
  decompose_cmd->add_option("-o,--out", out_file, "output model file");

  auto* skeleton_cmd =
      app.add_subcommand("skeleton", "generate code from an annotated model");
  std::string out_dir;
  skeleton_cmd->add_option("model", model_file, "annotated model file")
      ->required();
  skeleton_cmd->add_option("--out", out_dir, "output directory");

  auto* run_cmd = app.add_subcommand("run", "run one sample of one problem");
  std::string problem_dir, approach = "iecoregen";
  int sample_index = 0;
  run_cmd->add_option("problem", problem_dir, "problem directory")->required();
  run_cmd->add_option("--approach", approach, "approach name");
  run_cmd->add_option("--sample-index", sample_index, "sample number");

  auto* eval_cmd = app.add_subcommand("eval", "evaluate approaches");
  std::string bench_dir;
  std::vector<std::string> approaches, problem_filter;
  int n_override = -1;
  std::vector<int> k_override;
  eval_cmd->add_option("--bench", bench_dir, "benchmark directory")
      ->required();
  eval_cmd->add_option("--approach", approaches,
                       "iecoregen | base-r | base-r-cd | base-r-cd-fix");
  eval_cmd->add_option("--problem", problem_filter, "problem id filter");
  eval_cmd->add_option("--n", n_override, "samples per problem");
  eval_cmd->add_option("--k", k_override, "k values");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig config;
    if (!config_file.empty()) config = load_config_file(config_file);
    apply_env_overrides(config);
    if (workspace_opt->count()) config.workspace = cli_overrides.workspace;
    if (mode_opt->count()) config.provider_mode = cli_overrides.provider_mode;
    if (backend_opt->count()) config.backend_kind = cli_overrides.backend_kind;
    if (jobs_opt->count()) config.jobs = cli_overrides.jobs;
    if (transcript_opt->count())
      config.transcript_path = cli_overrides.transcript_path;
    if (model_opt->count()) config.model_name = cli_overrides.model_name;
    if (endpoint_opt->count()) config.endpoint = cli_overrides.endpoint;
    if (temperature_opt->count())
      config.temperature = cli_overrides.temperature;
    if (maxfix_opt->count())
      config.max_fix_iterations = cli_overrides.max_fix_iterations;
    if (flag_no_decompose) config.ablation.no_decompose = true;
    if (flag_no_compress) config.ablation.no_compress = true;
    if (flag_no_context) config.ablation.no_context = true;
    if (flag_no_fix) config.ablation.no_fix = true;
    if (eval_cmd->parsed()) {
      if (n_override > 0) config.n = n_override;
      if (!k_override.empty()) config.k_values = k_override;
    }

    if (validate->parsed()) return cmd_validate(model_file);

    // Provider settings only matter for commands that will talk to one.
    bool needs_provider =
        run_cmd->parsed() || eval_cmd->parsed() ||
        (decompose_cmd->parsed() && !config.ablation.no_decompose);
    if (needs_provider) {
      validate_config(config);
    }
    PromptTemplates templates = load_templates(config);

    if (decompose_cmd->parsed())
      return cmd_decompose(config, templates, model_file, req_file, out_file);
    if (skeleton_cmd->parsed()) return cmd_skeleton(config, model_file, out_dir);
    if (run_cmd->parsed())
      return cmd_run(config, templates, problem_dir, approach, sample_index);
    if (eval_cmd->parsed())
      return cmd_eval(config, templates, bench_dir, approaches,
                      problem_filter);
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const ReplayMissError& e) {
    std::cerr << "provider failure: " << e.what() << "\n";
    return 2;
  } catch (const TransportError& e) {
    std::cerr << "provider failure: " << e.what() << "\n";
    return 2;
  } catch (const TimeoutError& e) {
    std::cerr << "provider failure: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
