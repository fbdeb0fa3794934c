#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "iecoregen/backend.hpp"
#include "iecoregen/minioo/ast.hpp"

namespace iecoregen::minioo {

struct ParseResult {
  std::shared_ptr<Program> program;  // null on syntax error
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return program != nullptr && diagnostics.empty(); }
};

/// Parses MiniOO source. `//` comments are skipped; a `/** ... */` block
/// immediately preceding a class or method attaches to it as a docstring.
ParseResult parse(const std::string& text, const std::string& path);

/// Cross-unit name and type resolution over a set of library units, plus
/// optionally one test program. Diagnostics are sorted by path, then line.
CompileResult check_units(const std::vector<SourceUnit>& units);
CompileResult check_units(const std::vector<SourceUnit>& units,
                          const TestProgram* test);

inline constexpr std::int64_t kDefaultStepBudget = 1'000'000;

/// Executes a test program against the library units. All failures,
/// including assertion failures, uncaught raises and an exceeded step
/// budget, surface as a failed TestOutcome, never as an error. Assumes the
/// combination was checked.
TestOutcome interpret(const std::vector<SourceUnit>& units,
                      const TestProgram& test,
                      std::int64_t step_budget = kDefaultStepBudget);

/// Deterministic source form: 2-space indentation, one statement per line.
/// parse(print(p)) is structurally equal to p, and print is a fixpoint
/// after one normalization pass.
std::string print(const Program& program);

/// The placeholder body statement of every unimplemented method.
std::string trap_raise_statement();

/// Token-level equality of two code fragments, ignoring whitespace,
/// comments and docstrings. Used to tell real edits from reformatting.
bool same_token_stream(const std::string& a, const std::string& b);

/// MiniOO realization of the backend contract. Stateless; safe to share.
class MiniooBackend final : public Backend {
 public:
  explicit MiniooBackend(std::int64_t step_budget = kDefaultStepBudget)
      : step_budget_(step_budget) {}

  std::string language_tag() const override { return "minioo"; }
  std::string file_extension() const override { return "mo"; }

  std::vector<SourceUnit> generate_skeleton(
      const ModelPackage& m) const override;
  ParseCheck parse_code(const SourceUnit& unit) const override;
  SourceUnit compress(
      const SourceUnit& unit,
      const std::set<MethodKey>& keep_docstrings_for) const override;
  MergeOutcome merge(const SourceUnit& base, const SourceUnit& completed,
                     const std::set<MethodKey>& targets) const override;
  CompileResult compile_check(
      const std::vector<SourceUnit>& units) const override;
  std::vector<TestOutcome> run_tests(
      const std::vector<SourceUnit>& units,
      const std::vector<TestProgram>& tests) const override;
  std::vector<SourceUnit> split_units(const std::string& code) const override;
  std::vector<std::string> signature_lines(const ModelPackage& m,
                                           const ClassDef& cls) const override;
  std::vector<MethodSpan> method_spans(const SourceUnit& unit) const override;

  /// Name of the factory class generated for a package.
  static std::string factory_class_name(const ModelPackage& m);

 private:
  std::int64_t step_budget_;
};

}  // namespace iecoregen::minioo
