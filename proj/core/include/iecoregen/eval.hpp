#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iecoregen/completion.hpp"
#include "iecoregen/model.hpp"
#include "iecoregen/workspace.hpp"

namespace iecoregen {

enum class ApproachKind { Iecoregen, BaseR, BaseRCd, BaseRCdFix };

std::optional<ApproachKind> parse_approach(const std::string& name);
const char* approach_name(ApproachKind kind);
/// Display label, e.g. "iecoregen" or "iecoregen/no-context".
std::string approach_label(ApproachKind kind, const AblationFlags& flags);

/// One benchmark problem: a requirement, a class model, natural-language
/// test cases, and optionally canonical test programs for deterministic
/// replay runs.
struct Problem {
  std::string id;
  std::filesystem::path dir;
  std::string requirement;
  ModelPackage model;
  std::vector<std::string> test_specs;
  std::vector<TestProgram> canonical_tests;
};

/// Reads `<dir>/manifest.json` and the files it names. Throws ConfigError
/// on a malformed layout or an invalid model.
Problem load_problem(const std::filesystem::path& dir);

/// Soft shape checks (requirement length, test-case count, class count).
/// Out-of-range values produce warnings, never errors.
std::vector<std::string> validate_problem(const Problem& p);

struct SampleRecord {
  std::string problem_id;
  std::string approach;
  int sample_index = 0;
  bool compiled = false;
  int tests_total = 0;
  int tests_passed = 0;
  bool passed = false;
};

/// Unbiased estimator of the probability that at least one of k samples
/// out of n is correct when c are: 1 - C(n-c,k)/C(n,k), computed as a
/// product of ratios. Throws std::domain_error outside 0<=c<=n, 1<=k<=n.
double estimator(int n, int c, int k);

struct ProblemStats {
  std::string problem_id;
  int n = 0;
  int c_pass = 0;
  int c_compile = 0;
};

struct ApproachMetrics {
  std::string approach;
  std::map<int, double> pass_at;
  std::map<int, double> compilation_at;
  std::vector<ProblemStats> per_problem;
};

struct MetricReport {
  std::vector<int> k_values;
  std::vector<ApproachMetrics> approaches;  // first entry is the reference
};

/// Per problem: c = number of passed (compiled) samples, estimator applied,
/// unweighted mean over problems. Every (problem, approach) must have
/// exactly n records (IncompleteSamplesError otherwise); records must
/// satisfy the SampleRecord invariants.
MetricReport aggregate(const std::vector<SampleRecord>& records, int n,
                       const std::vector<int>& k_values,
                       const std::vector<std::string>& approach_order);

/// Aligned text table, two decimals, with relative deltas against the
/// first-listed approach (↓/↑ percentages, "–" for the reference itself
/// and for equal values).
std::string render_report_table(const MetricReport& report);

/// Machine-readable line-delimited JSON form, full precision, schema
/// header first. Byte-stable for identical reports.
std::string render_report_records(const MetricReport& report);

struct RunSettings {
  std::string model_name;
  double temperature = 0.2;
  int max_tokens = 8192;
  int max_fix_iterations = 3;
  int context_char_budget = kDefaultContextCharBudget;
  std::int64_t step_budget = 1'000'000;
  /// Replay mode uses a problem's canonical tests directly instead of
  /// generating test programs through the provider.
  bool use_canonical_tests = false;
  const PromptTemplates* templates = nullptr;
};

struct SampleRunResult {
  SampleRecord record;
  std::vector<SourceUnit> units;
  std::vector<std::string> warnings;
};

/// Full pipeline for one sample: decomposition (or passthrough), skeleton
/// generation, per-class completion, the repair loop unless ablated,
/// compile check and test execution. Provider failures mark the sample
/// failed instead of propagating.
SampleRunResult run_iecoregen_sample(const Problem& problem,
                                     const AblationFlags& flags,
                                     LoggingProvider& llm,
                                     const Backend& backend, int sample_index,
                                     const RunSettings& settings,
                                     SampleWorkspace& workspace);

/// One-shot baseline: a single chat call produces one source file (with
/// the PlantUML embedded for the +CD variants), which is split into units
/// by top-level class; the +Fix variant then runs the repair loop.
SampleRunResult run_baseline_sample(const Problem& problem, ApproachKind kind,
                                    LoggingProvider& llm,
                                    const Backend& backend, int sample_index,
                                    const RunSettings& settings,
                                    SampleWorkspace& workspace);

/// LLM test creation from the compressed units (all docstrings kept) and
/// the problem's natural-language test cases; one program per case, in
/// order. With use_canonical_tests and shipped canonical programs, those
/// are returned directly and no call is made.
std::vector<TestProgram> generate_tests(const Problem& problem,
                                        const std::vector<SourceUnit>& units,
                                        LoggingProvider& llm,
                                        const Backend& backend,
                                        const RunSettings& settings,
                                        int sample_index,
                                        SampleWorkspace& workspace);

struct EvalRequest {
  std::filesystem::path bench_dir;
  std::vector<std::string> problem_filter;  // empty: every problem
  std::vector<std::pair<ApproachKind, AblationFlags>> approaches;
  int n = 5;
  std::vector<int> k_values{1, 3};
  int jobs = 1;
  std::filesystem::path workspace_root;
};

struct EvalResult {
  MetricReport report;
  std::vector<SampleRecord> records;
  std::vector<std::string> warnings;
};

/// Runs every (problem × approach × sample) work unit, each in a private
/// workspace directory, and writes report.txt, report.jsonl and
/// records.jsonl under the workspace root. Metric values never affect the
/// outcome; provider failures only mark samples failed.
EvalResult run_eval(const EvalRequest& request,
                    const std::shared_ptr<ChatProvider>& provider,
                    const Backend& backend, const RunSettings& settings);

}  // namespace iecoregen
