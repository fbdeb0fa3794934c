#pragma once

#include <map>
#include <string>
#include <vector>

#include "iecoregen/gateway.hpp"
#include "iecoregen/model.hpp"
#include "iecoregen/prompts.hpp"

namespace iecoregen {

/// Outcome of parsing one decomposition response against a model: the
/// recognized specifications, the operations the response omitted, and any
/// warnings. specs and unmatched partition the model's operations.
struct DecompositionResult {
  std::map<std::string, MethodSpec> specs;  // key: Class.op/arity
  std::vector<std::string> unmatched;
  std::vector<std::string> warnings;
};

struct DecomposeOptions {
  std::string model_name;
  double temperature = 0.2;
  int max_tokens = 8192;
  int sample_index = 0;
  const PromptTemplates* templates = nullptr;  // null: defaults
};

/// Assembles the one-shot decomposition prompt: role preamble, the full
/// PlantUML of the model, the requirement verbatim, the modularization and
/// deduce-unspecified-information instructions, and the response schema.
/// Deterministic. Throws InvalidModelError / EmptyRequirementError.
std::string build_decomposition_prompt(
    const ModelPackage& m, const std::string& requirement,
    const PromptTemplates* templates = nullptr);

/// Extracts every well-formed `### Class.op(arity)` section of a response.
/// Total: malformed input never fails, it only shrinks `specs` and grows
/// `unmatched`/`warnings`. Section labels match case-insensitively;
/// missing sections default to empty with a warning.
DecompositionResult parse_decomposition_response(const std::string& response,
                                                 const ModelPackage& m);

/// One chat round: prompt, parse, annotate. Matched operations receive
/// their parsed specification; omitted ones receive the fallback spec
/// (summary = the requirement) plus a warning, so no docstring is ever
/// empty. Provider errors propagate after the provider's own retries.
ModelPackage decompose(const ModelPackage& m, const std::string& requirement,
                       ChatProvider& llm, const DecomposeOptions& options,
                       std::vector<std::string>* warnings = nullptr,
                       std::string* prompt_out = nullptr,
                       std::string* response_out = nullptr);

/// Ablation variant: every operation gets the fallback spec, no chat call.
ModelPackage passthrough_annotation(const ModelPackage& m,
                                    const std::string& requirement);

/// "Class.op/arity" keys of every operation in the model, in declaration
/// order.
std::vector<std::string> all_operation_keys(const ModelPackage& m);

}  // namespace iecoregen
