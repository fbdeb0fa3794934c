#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "iecoregen/completion.hpp"

namespace iecoregen {

struct DiagnosticGroup {
  std::vector<Diagnostic> diagnostics;
  std::set<MethodKey> implicated;
};

/// Buckets diagnostics by the unit (class) they point into and maps each
/// onto the method whose span contains its line. A diagnostic outside any
/// method span implicates the class's completion targets (or, when the
/// class has none, all of its methods). Throws UnknownClassError when a
/// diagnostic path matches no unit.
std::map<std::string, DiagnosticGroup> group_diagnostics(
    const std::vector<Diagnostic>& diagnostics,
    const std::vector<SourceUnit>& units, const Backend& backend,
    const std::map<std::string, std::set<MethodKey>>& targets_by_class);

/// Fix prompt: instruction block, the compressed unit with docstrings and
/// bodies kept for the implicated methods, every diagnostic rendered with
/// its five fields, and the context section.
std::string build_fix_prompt(const std::string& class_id,
                             const SourceUnit& compressed_unit,
                             const std::vector<Diagnostic>& diagnostics,
                             const std::string& context_text,
                             bool include_context,
                             const PromptTemplates* templates = nullptr);

struct RepairResult {
  std::vector<SourceUnit> units;
  CompileResult compile;
  /// Diagnostic count per iteration, entry 0 recorded before any fixing.
  std::vector<std::pair<int, int>> history;
  std::optional<std::string> provider_error;  // set when the loop aborted
  std::vector<std::string> warnings;
  int llm_calls = 0;
};

/// Compile-and-fix loop: stops when the units compile or after
/// max_iterations rounds. Each round sends one fix prompt per errored
/// class; unparseable fixes skip that class for the round. A rising
/// diagnostic count does not abort the loop. Provider errors stop it and
/// are reported in the result instead of propagating.
RepairResult repair(
    std::vector<SourceUnit> units, ChatProvider& llm, const Backend& backend,
    int max_iterations,
    const std::map<std::string, std::set<MethodKey>>& targets_by_class,
    const std::function<std::string(const std::string&)>& context_for,
    const ChatSettings& settings, const AblationFlags& flags,
    const std::function<void(const std::string&)>& on_class = {});

}  // namespace iecoregen
