#pragma once

#include <compare>
#include <set>
#include <string>
#include <vector>

#include "iecoregen/model.hpp"

namespace iecoregen {

/// One generated code file. `class_id` names the single class implemented in
/// the unit; paths are workspace-relative and unique within a workspace.
struct SourceUnit {
  std::string path;
  std::string class_id;
  std::string text;
};

enum class DiagnosticKind { Syntax, UnresolvedSymbol, TypeMismatch, Other };

const char* to_string(DiagnosticKind kind);

/// Structured compiler error record. `source_line` is the literal text of
/// line `line` of the file at diagnosis time.
struct Diagnostic {
  std::string path;
  DiagnosticKind kind = DiagnosticKind::Other;
  int line = 1;  // 1-based
  std::string source_line;
  std::string message;

  std::string to_string() const;
};

struct CompileResult {
  bool ok = true;
  std::vector<Diagnostic> diagnostics;

  static CompileResult success() { return {}; }
  static CompileResult failure(std::vector<Diagnostic> ds) {
    return {ds.empty(), std::move(ds)};
  }
};

struct TestProgram {
  std::string id;
  std::string text;
};

struct TestOutcome {
  std::string test_id;
  bool passed = false;
  std::string failure_message;  // empty when passed
};

/// Identifies a method for compression, merging and diagnostic grouping.
/// Arity suffices as the overload discriminator in MiniOO.
struct MethodKey {
  std::string class_name;
  std::string method;
  int arity = 0;

  auto operator<=>(const MethodKey&) const = default;
  std::string to_string() const {
    return class_name + "." + method + "/" + std::to_string(arity);
  }
};

struct MergeReport {
  std::vector<MethodKey> replaced_methods;
  std::vector<MethodKey> added_helpers;
  std::vector<std::string> added_imports;
  /// Every change the completion attempted outside the permitted regions.
  std::vector<std::pair<std::string, std::string>> rejected_edits;
};

struct ParseCheck {
  bool ok = false;
  std::vector<Diagnostic> diagnostics;
};

struct MergeOutcome {
  bool ok = false;
  SourceUnit unit;  // base unchanged when !ok
  MergeReport report;
  std::vector<Diagnostic> diagnostics;
};

/// Line span of one method inside a unit, signature through closing brace.
struct MethodSpan {
  MethodKey key;
  int begin_line = 1;
  int end_line = 1;
};

/// Target-language-neutral contract implemented by every code backend.
/// Implementations must be usable from multiple threads for disjoint
/// workspaces; all operations below are pure.
class Backend {
 public:
  virtual ~Backend() = default;

  /// Fence tag expected on code blocks in chat responses.
  virtual std::string language_tag() const = 0;
  /// File extension of library units, without the dot.
  virtual std::string file_extension() const = 0;

  /// Template-generates one unit per model class (fields, accessors with
  /// isX naming for booleans, docstrings rendered from each operation's
  /// annotation, trap-raise operation bodies) plus one package factory
  /// unit. The full set always compiles. Requires every operation to carry
  /// an annotation; throws UnannotatedOperationError otherwise.
  virtual std::vector<SourceUnit> generate_skeleton(
      const ModelPackage& m) const = 0;

  /// Syntax check of a single unit. Never throws on bad input.
  virtual ParseCheck parse_code(const SourceUnit& unit) const = 0;

  /// Strips comments, docstrings (except those of `keep_docstrings_for`)
  /// and field initializers, and replaces the bodies of methods outside
  /// the keep set with the trap raise; kept methods retain their bodies.
  /// The declaration and signature set is preserved. Throws Error when the
  /// unit does not parse.
  virtual SourceUnit compress(
      const SourceUnit& unit,
      const std::set<MethodKey>& keep_docstrings_for) const = 0;

  /// Replaces each target method's body with the completed version when
  /// present, appends new helper methods (and, for backends that have
  /// them, imports), and byte-preserves every other region of `base`.
  /// Changes outside the permitted regions are dropped and recorded in the
  /// report. Deterministic.
  virtual MergeOutcome merge(const SourceUnit& base,
                             const SourceUnit& completed,
                             const std::set<MethodKey>& targets) const = 0;

  /// Cross-unit syntax and type check. Diagnostics are ordered by path,
  /// then line.
  virtual CompileResult compile_check(
      const std::vector<SourceUnit>& units) const = 0;

  /// Runs each test program against the units; one outcome per test. A
  /// test that does not compile yields a failed outcome rather than an
  /// error. Execution is bounded by a per-test step budget.
  virtual std::vector<TestOutcome> run_tests(
      const std::vector<SourceUnit>& units,
      const std::vector<TestProgram>& tests) const = 0;

  /// Splits a single source file into one unit per top-level class (used
  /// by the baseline approaches). An unparseable file becomes a single
  /// raw unit so that compile_check can report its diagnostics.
  virtual std::vector<SourceUnit> split_units(const std::string& code) const = 0;

  /// Signature printer used by context extraction: one line per public
  /// method the skeleton of `cls` exposes (accessors, factory-independent
  /// operations), in generation order.
  virtual std::vector<std::string> signature_lines(
      const ModelPackage& m, const ClassDef& cls) const = 0;

  /// Line spans of the methods of a unit, for mapping diagnostics onto
  /// methods. Empty when the unit does not parse.
  virtual std::vector<MethodSpan> method_spans(
      const SourceUnit& unit) const = 0;
};

/// Reads line `line` (1-based) out of `text`; empty when out of range.
std::string line_at(const std::string& text, int line);

}  // namespace iecoregen
