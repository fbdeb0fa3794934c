#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "iecoregen/backend.hpp"

namespace iecoregen {

/// Configuration of the external-compiler adapter: a command template with
/// a {files} placeholder and a diagnostic-extraction regex with named
/// captures (?<path>...), (?<line>...) and (?<message>...).
struct ToolConfig {
  std::string command_template;
  int timeout_seconds = 60;
  std::string diagnostic_pattern;
};

struct ToolRun {
  int exit_code = 0;
  std::string output;  // stdout and stderr combined
  bool timed_out = false;
};

/// Runs a shell command in `workdir` with a timeout, capturing its output.
ToolRun run_tool(const std::string& command,
                 const std::filesystem::path& workdir, int timeout_seconds);

/// Writes the units into an isolated workspace directory, runs the
/// configured command, and maps pattern matches onto Diagnostics. The kind
/// is inferred from a keyword table; source lines are read back from the
/// written files. Throws ToolNotFoundError, ToolTimeoutError or
/// PatternMismatchError (with the raw output preserved).
CompileResult external_compile(const std::vector<SourceUnit>& units,
                               const ToolConfig& config,
                               const std::filesystem::path& workspace_dir);

/// Keyword-table classification of an error message.
DiagnosticKind classify_message(const std::string& message);

/// Backend decorator that keeps an inner backend's generation, parsing,
/// merging and test execution but routes compile_check through the
/// configured external tool, each call in its own scratch workspace.
class ExternalToolBackend final : public Backend {
 public:
  ExternalToolBackend(const Backend& inner, ToolConfig config,
                      std::filesystem::path scratch_root);

  std::string language_tag() const override { return inner_.language_tag(); }
  std::string file_extension() const override {
    return inner_.file_extension();
  }
  std::vector<SourceUnit> generate_skeleton(
      const ModelPackage& m) const override {
    return inner_.generate_skeleton(m);
  }
  ParseCheck parse_code(const SourceUnit& unit) const override {
    return inner_.parse_code(unit);
  }
  SourceUnit compress(const SourceUnit& unit,
                      const std::set<MethodKey>& keep) const override {
    return inner_.compress(unit, keep);
  }
  MergeOutcome merge(const SourceUnit& base, const SourceUnit& completed,
                     const std::set<MethodKey>& targets) const override {
    return inner_.merge(base, completed, targets);
  }
  CompileResult compile_check(
      const std::vector<SourceUnit>& units) const override;
  std::vector<TestOutcome> run_tests(
      const std::vector<SourceUnit>& units,
      const std::vector<TestProgram>& tests) const override {
    return inner_.run_tests(units, tests);
  }
  std::vector<SourceUnit> split_units(const std::string& code) const override {
    return inner_.split_units(code);
  }
  std::vector<std::string> signature_lines(
      const ModelPackage& m, const ClassDef& cls) const override {
    return inner_.signature_lines(m, cls);
  }
  std::vector<MethodSpan> method_spans(const SourceUnit& unit) const override {
    return inner_.method_spans(unit);
  }

 private:
  const Backend& inner_;
  ToolConfig config_;
  std::filesystem::path scratch_root_;
  mutable std::atomic<std::uint64_t> next_workspace_{0};
};

}  // namespace iecoregen
