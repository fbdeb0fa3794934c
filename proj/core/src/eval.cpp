#include "iecoregen/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "iecoregen/decompose.hpp"
#include "iecoregen/errors.hpp"
#include "iecoregen/model_text.hpp"
#include "iecoregen/plantuml.hpp"
#include "iecoregen/repair.hpp"

namespace iecoregen {

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

std::optional<ApproachKind> parse_approach(const std::string& name) {
  if (name == "iecoregen") return ApproachKind::Iecoregen;
  if (name == "base-r") return ApproachKind::BaseR;
  if (name == "base-r-cd") return ApproachKind::BaseRCd;
  if (name == "base-r-cd-fix") return ApproachKind::BaseRCdFix;
  return std::nullopt;
}

const char* approach_name(ApproachKind kind) {
  switch (kind) {
    case ApproachKind::Iecoregen: return "iecoregen";
    case ApproachKind::BaseR: return "base-r";
    case ApproachKind::BaseRCd: return "base-r-cd";
    case ApproachKind::BaseRCdFix: return "base-r-cd-fix";
  }
  return "?";
}

std::string approach_label(ApproachKind kind, const AblationFlags& flags) {
  std::string label = approach_name(kind);
  if (kind != ApproachKind::Iecoregen) return label;
  if (flags.no_decompose) label += "/no-decompose";
  if (flags.no_compress) label += "/no-compress";
  if (flags.no_context) label += "/no-context";
  if (flags.no_fix) label += "/no-fix";
  return label;
}

Problem load_problem(const std::filesystem::path& dir) {
  std::filesystem::path manifest_path = dir / "manifest.json";
  json manifest = json::parse(read_file(manifest_path), nullptr, false);
  if (manifest.is_discarded()) {
    throw ConfigError("malformed manifest " + manifest_path.string());
  }

  Problem p;
  p.dir = dir;
  p.id = manifest.value("id", dir.filename().string());
  p.requirement =
      read_file(dir / manifest.value("requirement", "requirement.txt"));

  std::string model_text =
      read_file(dir / manifest.value("model", "model.cmdl"));
  ModelParseResult parsed = parse_model(model_text);
  if (!parsed.ok()) {
    throw ConfigError("problem " + p.id + ": model does not validate: " +
                      parsed.errors.front().to_string());
  }
  p.model = std::move(*parsed.package);

  if (!manifest.contains("tests") || manifest["tests"].empty()) {
    throw ConfigError("problem " + p.id + ": manifest lists no tests");
  }
  for (const auto& entry : manifest["tests"]) {
    p.test_specs.push_back(read_file(dir / entry.get<std::string>()));
  }
  if (manifest.contains("canonical")) {
    for (const auto& entry : manifest["canonical"]) {
      std::filesystem::path file = dir / entry.get<std::string>();
      TestProgram t;
      t.id = file.stem().string();
      t.text = read_file(file);
      p.canonical_tests.push_back(std::move(t));
    }
  }
  return p;
}

std::vector<std::string> validate_problem(const Problem& p) {
  std::vector<std::string> warnings;
  int words = 0;
  bool in_word = false;
  for (char c : p.requirement) {
    bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_word) ++words;
    in_word = !space;
  }
  if (words < 122 || words > 483) {
    warnings.push_back("problem " + p.id + ": requirement has " +
                       std::to_string(words) +
                       " words (typical benchmark range is 122-483)");
  }
  std::size_t cases = p.test_specs.size();
  if (cases < 15 || cases > 31) {
    warnings.push_back("problem " + p.id + ": " + std::to_string(cases) +
                       " test cases (typical benchmark range is 15-31)");
  }
  std::size_t classes = p.model.classes.size();
  if (classes < 4 || classes > 11) {
    warnings.push_back("problem " + p.id + ": " + std::to_string(classes) +
                       " classes (typical benchmark range is 4-11)");
  }
  return warnings;
}

double estimator(int n, int c, int k) {
  if (c < 0 || c > n || k < 1 || k > n) {
    throw std::domain_error("estimator needs 0 <= c <= n and 1 <= k <= n");
  }
  if (n - c < k) return 1.0;
  double product = 1.0;
  for (int i = 0; i < k; ++i) {
    product *= static_cast<double>(n - c - i) / static_cast<double>(n - i);
  }
  return 1.0 - product;
}

MetricReport aggregate(const std::vector<SampleRecord>& records, int n,
                       const std::vector<int>& k_values,
                       const std::vector<std::string>& approach_order) {
  for (const auto& r : records) {
    bool ok = (!r.passed || (r.compiled && r.tests_passed == r.tests_total)) &&
              (r.compiled || r.tests_passed == 0) && r.tests_passed >= 0 &&
              r.tests_passed <= r.tests_total;
    if (!ok) {
      throw std::invalid_argument(
          "sample record for " + r.problem_id + "/" + r.approach +
          " violates the record invariants");
    }
  }

  MetricReport report;
  report.k_values = k_values;
  for (const auto& approach : approach_order) {
    std::map<std::string, ProblemStats> stats;
    for (const auto& r : records) {
      if (r.approach != approach) continue;
      ProblemStats& s = stats[r.problem_id];
      s.problem_id = r.problem_id;
      ++s.n;
      if (r.passed) ++s.c_pass;
      if (r.compiled) ++s.c_compile;
    }
    ApproachMetrics metrics;
    metrics.approach = approach;
    for (const auto& [id, s] : stats) {
      if (s.n != n) throw IncompleteSamplesError(id);
      metrics.per_problem.push_back(s);
    }
    if (metrics.per_problem.empty()) {
      throw IncompleteSamplesError("(no records for approach " + approach +
                                   ")");
    }
    for (int k : k_values) {
      double pass_sum = 0.0;
      double compile_sum = 0.0;
      for (const auto& s : metrics.per_problem) {
        pass_sum += estimator(n, s.c_pass, k);
        compile_sum += estimator(n, s.c_compile, k);
      }
      double count = static_cast<double>(metrics.per_problem.size());
      metrics.pass_at[k] = pass_sum / count;
      metrics.compilation_at[k] = compile_sum / count;
    }
    report.approaches.push_back(std::move(metrics));
  }
  return report;
}

namespace {

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string format_delta(double v, double reference) {
  if (std::fabs(v - reference) < 1e-9 || reference == 0.0) return "(–)";
  double pct = std::fabs(v - reference) / reference * 100.0;
  long rounded = std::lround(pct);
  const char* arrow = v < reference ? "↓" : "↑";
  return std::string("(") + arrow + std::to_string(rounded) + "%)";
}

// Column width in terminal cells; the report uses only single-cell
// non-ASCII characters (arrows, dashes).
std::size_t display_width(const std::string& s) {
  std::size_t continuation = 0;
  for (unsigned char c : s) {
    if ((c & 0xc0) == 0x80) ++continuation;
  }
  return s.size() - continuation;
}

std::string pad(const std::string& s, std::size_t width) {
  std::string out = s;
  std::size_t w = display_width(s);
  while (w < width) {
    out += ' ';
    ++w;
  }
  return out;
}

}  // namespace

std::string render_report_table(const MetricReport& report) {
  std::vector<std::string> headers{"approach"};
  for (int k : report.k_values) headers.push_back("pass@" + std::to_string(k));
  for (int k : report.k_values)
    headers.push_back("compilation@" + std::to_string(k));

  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < report.approaches.size(); ++i) {
    const ApproachMetrics& m = report.approaches[i];
    const ApproachMetrics& ref = report.approaches.front();
    std::vector<std::string> row{m.approach};
    for (int k : report.k_values) {
      std::string cell = format_value(m.pass_at.at(k));
      if (i > 0) cell += " " + format_delta(m.pass_at.at(k), ref.pass_at.at(k));
      row.push_back(cell);
    }
    for (int k : report.k_values) {
      std::string cell = format_value(m.compilation_at.at(k));
      if (i > 0)
        cell += " " +
                format_delta(m.compilation_at.at(k), ref.compilation_at.at(k));
      row.push_back(cell);
    }
    rows.push_back(std::move(row));
  }

  std::vector<std::size_t> widths(headers.size());
  for (std::size_t c = 0; c < headers.size(); ++c) {
    widths[c] = display_width(headers[c]);
    for (const auto& row : rows)
      widths[c] = std::max(widths[c], display_width(row[c]));
  }

  std::ostringstream out;
  auto emit_row = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out << "  ";
      out << pad(row[c], widths[c]);
    }
    out << "\n";
  };
  emit_row(headers);
  std::string rule;
  for (std::size_t c = 0; c < headers.size(); ++c) {
    if (c > 0) rule += "  ";
    rule += std::string(widths[c], '-');
  }
  out << rule << "\n";
  for (const auto& row : rows) emit_row(row);
  return out.str();
}

std::string render_report_records(const MetricReport& report) {
  std::ostringstream out;
  out << json{{"schema", "iecoregen-report/1"}}.dump() << "\n";
  for (const auto& m : report.approaches) {
    for (int k : report.k_values) {
      out << json{{"type", "metric"},
                  {"approach", m.approach},
                  {"metric", "pass"},
                  {"k", k},
                  {"value", m.pass_at.at(k)}}
                 .dump()
          << "\n";
      out << json{{"type", "metric"},
                  {"approach", m.approach},
                  {"metric", "compilation"},
                  {"k", k},
                  {"value", m.compilation_at.at(k)}}
                 .dump()
          << "\n";
    }
    for (const auto& s : m.per_problem) {
      out << json{{"type", "problem"},
                  {"approach", m.approach},
                  {"problem", s.problem_id},
                  {"n", s.n},
                  {"cPass", s.c_pass},
                  {"cCompile", s.c_compile}}
                 .dump()
          << "\n";
    }
  }
  return out.str();
}

namespace {

std::string diagnostics_json(const CompileResult& compile) {
  json out;
  out["ok"] = compile.ok;
  json list = json::array();
  for (const auto& d : compile.diagnostics) {
    list.push_back({{"path", d.path},
                    {"kind", to_string(d.kind)},
                    {"line", d.line},
                    {"sourceLine", d.source_line},
                    {"message", d.message}});
  }
  out["diagnostics"] = std::move(list);
  return out.dump(2) + "\n";
}

std::string history_json(bool skipped,
                         const std::vector<std::pair<int, int>>& history,
                         const std::optional<std::string>& provider_error) {
  json out;
  out["skipped"] = skipped;
  json h = json::array();
  for (const auto& [iteration, count] : history)
    h.push_back({iteration, count});
  out["history"] = std::move(h);
  if (provider_error) out["providerError"] = *provider_error;
  return out.dump(2) + "\n";
}

std::string merge_reports_json(
    const std::vector<std::pair<std::string, MergeReport>>& reports) {
  json out = json::array();
  for (const auto& [class_id, report] : reports) {
    json entry;
    entry["classId"] = class_id;
    json replaced = json::array();
    for (const auto& k : report.replaced_methods)
      replaced.push_back(k.to_string());
    json helpers = json::array();
    for (const auto& k : report.added_helpers)
      helpers.push_back(k.to_string());
    json rejected = json::array();
    for (const auto& [location, reason] : report.rejected_edits)
      rejected.push_back({{"location", location}, {"reason", reason}});
    entry["replacedMethods"] = std::move(replaced);
    entry["addedHelpers"] = std::move(helpers);
    entry["addedImports"] = report.added_imports;
    entry["rejectedEdits"] = std::move(rejected);
    out.push_back(std::move(entry));
  }
  return out.dump(2) + "\n";
}

std::string outcomes_json(const std::vector<TestOutcome>& outcomes) {
  json out = json::array();
  for (const auto& o : outcomes) {
    json entry = {{"testId", o.test_id}, {"passed", o.passed}};
    if (!o.passed) entry["failureMessage"] = o.failure_message;
    out.push_back(std::move(entry));
  }
  return out.dump(2) + "\n";
}

std::string record_json(const SampleRecord& r) {
  return json{{"problem", r.problem_id},
              {"approach", r.approach},
              {"sampleIndex", r.sample_index},
              {"compiled", r.compiled},
              {"testsTotal", r.tests_total},
              {"testsPassed", r.tests_passed},
              {"passed", r.passed}}
      .dump();
}

ChatSettings chat_settings(const RunSettings& settings, int sample_index) {
  ChatSettings chat;
  chat.model_name = settings.model_name;
  chat.temperature = settings.temperature;
  chat.max_tokens = settings.max_tokens;
  chat.sample_index = sample_index;
  chat.templates = settings.templates;
  return chat;
}

void finish_with_tests(SampleRunResult& result, const Problem& problem,
                       const std::vector<SourceUnit>& units,
                       const CompileResult& compile, LoggingProvider& llm,
                       const Backend& backend, const RunSettings& settings,
                       SampleWorkspace& ws) {
  for (const auto& u : units) ws.write_text(u.path, u.text);
  ws.write_text("compile.json", diagnostics_json(compile));
  result.units = units;
  result.record.compiled = compile.ok;
  result.record.tests_total = static_cast<int>(problem.test_specs.size());
  result.record.tests_passed = 0;

  if (compile.ok) {
    std::vector<TestProgram> tests =
        generate_tests(problem, units, llm, backend, settings,
                       result.record.sample_index, ws);
    for (const auto& t : tests) ws.write_text("tests/" + t.id + ".mot", t.text);
    std::vector<TestOutcome> outcomes = backend.run_tests(units, tests);
    ws.write_text("test_outcomes.json", outcomes_json(outcomes));
    result.record.tests_total = static_cast<int>(outcomes.size());
    for (const auto& o : outcomes) {
      if (o.passed) ++result.record.tests_passed;
    }
  }
  result.record.passed = result.record.compiled &&
                         result.record.tests_total > 0 &&
                         result.record.tests_passed == result.record.tests_total;
}

void fail_sample(SampleRunResult& result, const std::string& reason,
                 SampleWorkspace& ws) {
  result.warnings.push_back(result.record.problem_id + " sample " +
                            std::to_string(result.record.sample_index) +
                            " failed: " + reason);
  result.record.compiled = false;
  result.record.tests_passed = 0;
  result.record.passed = false;
  if (ws.enabled()) ws.write_text("error.txt", reason + "\n");
}

}  // namespace

std::vector<TestProgram> generate_tests(const Problem& problem,
                                        const std::vector<SourceUnit>& units,
                                        LoggingProvider& llm,
                                        const Backend& backend,
                                        const RunSettings& settings,
                                        int sample_index,
                                        SampleWorkspace& workspace) {
  (void)workspace;
  if (settings.use_canonical_tests && !problem.canonical_tests.empty()) {
    return problem.canonical_tests;  // deterministic path, no chat call
  }

  std::string code;
  for (const auto& unit : units) {
    std::set<MethodKey> all_keys;
    for (const auto& span : backend.method_spans(unit))
      all_keys.insert(span.key);
    try {
      code += backend.compress(unit, all_keys).text;
    } catch (const Error&) {
      code += unit.text;
    }
    code += "\n";
  }
  std::string cases;
  for (std::size_t i = 0; i < problem.test_specs.size(); ++i) {
    cases += std::to_string(i + 1) + ". " + problem.test_specs[i];
    if (cases.back() != '\n') cases += '\n';
  }
  const PromptTemplates& templates =
      settings.templates != nullptr ? *settings.templates
                                    : PromptTemplates::defaults();
  std::string prompt = render_template(templates.testgen,
                                       {{"code", code}, {"cases", cases}});

  llm.set_stage("testgen");
  ChatRequest req;
  req.user_text = prompt;
  req.model_name = settings.model_name;
  req.temperature = settings.temperature;
  req.max_tokens = settings.max_tokens;
  req.sample_index = sample_index;
  std::string response = llm.complete(req);

  std::vector<std::string> blocks =
      extract_all_code_blocks(response, backend.language_tag());
  std::vector<TestProgram> tests;
  for (std::size_t i = 0; i < problem.test_specs.size(); ++i) {
    TestProgram t;
    char id[16];
    std::snprintf(id, sizeof id, "t%02zu", i + 1);
    t.id = id;
    t.text = i < blocks.size()
                 ? blocks[i]
                 : "raise MissingTest(\"no test program generated\");\n";
    tests.push_back(std::move(t));
  }
  return tests;
}

SampleRunResult run_iecoregen_sample(const Problem& problem,
                                     const AblationFlags& flags,
                                     LoggingProvider& llm,
                                     const Backend& backend, int sample_index,
                                     const RunSettings& settings,
                                     SampleWorkspace& ws) {
  SampleRunResult result;
  result.record.problem_id = problem.id;
  result.record.approach = approach_label(ApproachKind::Iecoregen, flags);
  result.record.sample_index = sample_index;
  result.record.tests_total = static_cast<int>(problem.test_specs.size());

  ChatSettings chat = chat_settings(settings, sample_index);

  try {
    ModelPackage annotated;
    if (flags.no_decompose) {
      annotated = passthrough_annotation(problem.model, problem.requirement);
    } else {
      llm.set_stage("decompose");
      DecomposeOptions options;
      options.model_name = chat.model_name;
      options.temperature = chat.temperature;
      options.max_tokens = chat.max_tokens;
      options.sample_index = chat.sample_index;
      options.templates = chat.templates;
      annotated = decompose(problem.model, problem.requirement, llm, options,
                            &result.warnings);
    }
    ws.write_text("annotated_model.cmdl", serialize_model(annotated));

    std::vector<SourceUnit> units = backend.generate_skeleton(annotated);
    for (const auto& u : units) ws.write_text("skeleton/" + u.path, u.text);

    CompleteAllOutcome completed = complete_all(
        annotated, std::move(units), llm, backend, flags, chat,
        settings.context_char_budget,
        [&](const std::string& cls) { llm.set_stage("complete", cls); });
    result.warnings.insert(result.warnings.end(), completed.warnings.begin(),
                           completed.warnings.end());
    ws.write_text("merge_reports.json", merge_reports_json(completed.reports));

    CompileResult compile;
    std::vector<SourceUnit> final_units;
    if (flags.no_fix) {
      final_units = std::move(completed.units);
      compile = backend.compile_check(final_units);
      ws.write_text("repair_history.json", history_json(true, {}, {}));
    } else {
      std::map<std::string, std::set<MethodKey>> targets;
      for (const auto& cls : select_targets(annotated)) {
        targets[cls] = operation_keys(annotated, cls);
      }
      auto context_for = [&](const std::string& cls) {
        return build_context(annotated, cls, backend,
                             settings.context_char_budget);
      };
      RepairResult repaired = repair(
          std::move(completed.units), llm, backend,
          settings.max_fix_iterations, targets, context_for, chat, flags,
          [&](const std::string& cls) { llm.set_stage("fix", cls); });
      result.warnings.insert(result.warnings.end(),
                             repaired.warnings.begin(),
                             repaired.warnings.end());
      ws.write_text("repair_history.json",
                    history_json(false, repaired.history,
                                 repaired.provider_error));
      final_units = std::move(repaired.units);
      compile = std::move(repaired.compile);
      if (repaired.provider_error) {
        for (const auto& u : final_units) ws.write_text(u.path, u.text);
        ws.write_text("compile.json", diagnostics_json(compile));
        fail_sample(result, *repaired.provider_error, ws);
        ws.write_text("sample.json", record_json(result.record) + "\n");
        result.units = std::move(final_units);
        return result;
      }
    }

    finish_with_tests(result, problem, final_units, compile, llm, backend,
                      settings, ws);
  } catch (const std::exception& e) {
    fail_sample(result, e.what(), ws);
  }
  ws.write_text("sample.json", record_json(result.record) + "\n");
  return result;
}

SampleRunResult run_baseline_sample(const Problem& problem, ApproachKind kind,
                                    LoggingProvider& llm,
                                    const Backend& backend, int sample_index,
                                    const RunSettings& settings,
                                    SampleWorkspace& ws) {
  SampleRunResult result;
  result.record.problem_id = problem.id;
  result.record.approach = approach_label(kind, {});
  result.record.sample_index = sample_index;
  result.record.tests_total = static_cast<int>(problem.test_specs.size());

  const PromptTemplates& templates =
      settings.templates != nullptr ? *settings.templates
                                    : PromptTemplates::defaults();

  try {
    std::string diagram_section;
    if (kind == ApproachKind::BaseRCd || kind == ApproachKind::BaseRCdFix) {
      diagram_section = "\n## Class diagram (PlantUML)\n" +
                        emit_plantuml(problem.model);
    }
    std::string prompt =
        render_template(templates.baseline, {{"requirement",
                                              problem.requirement},
                                             {"diagram_section",
                                              diagram_section}});
    llm.set_stage("baseline");
    ChatRequest req;
    req.user_text = prompt;
    req.model_name = settings.model_name;
    req.temperature = settings.temperature;
    req.max_tokens = settings.max_tokens;
    req.sample_index = sample_index;
    std::string response = llm.complete(req);

    auto parses = [&](const std::string& code) {
      SourceUnit candidate{"src/main." + backend.file_extension(), "Main",
                           code};
      return backend.parse_code(candidate).ok;
    };
    auto code = try_extract_code_block(response, backend.language_tag(),
                                       parses);
    std::string source = code ? code->text : response;
    std::vector<SourceUnit> units = backend.split_units(source);

    CompileResult compile = backend.compile_check(units);
    std::vector<std::pair<int, int>> history{
        {0, static_cast<int>(compile.diagnostics.size())}};

    if (kind == ApproachKind::BaseRCdFix && !compile.ok) {
      bool parseable = true;
      for (const auto& u : units) {
        if (!backend.parse_code(u).ok) parseable = false;
      }
      if (parseable) {
        auto context_for = [&](const std::string& cls) {
          return problem.model.find_class(cls) != nullptr
                     ? build_context(problem.model, cls, backend,
                                     settings.context_char_budget)
                     : std::string();
        };
        RepairResult repaired = repair(
            std::move(units), llm, backend, settings.max_fix_iterations, {},
            context_for, chat_settings(settings, sample_index), {},
            [&](const std::string& cls) { llm.set_stage("fix", cls); });
        result.warnings.insert(result.warnings.end(),
                               repaired.warnings.begin(),
                               repaired.warnings.end());
        units = std::move(repaired.units);
        compile = std::move(repaired.compile);
        history = repaired.history;
        if (repaired.provider_error) {
          ws.write_text("repair_history.json",
                        history_json(false, history,
                                     repaired.provider_error));
          fail_sample(result, *repaired.provider_error, ws);
          ws.write_text("sample.json", record_json(result.record) + "\n");
          result.units = std::move(units);
          return result;
        }
      } else {
        // The single file did not parse: whole-file fixing, re-splitting
        // after every round.
        for (int iteration = 1;
             !compile.ok && iteration <= settings.max_fix_iterations;
             ++iteration) {
          std::string joined;
          for (const auto& u : units) joined += u.text;
          std::string fix_prompt = render_template(
              templates.baseline_fix,
              {{"code", joined},
               {"diagnostics", [&] {
                  std::string out;
                  for (const auto& d : compile.diagnostics)
                    out += "- " + d.to_string() + "\n";
                  return out;
                }()}});
          llm.set_stage("fix");
          ChatRequest fix_req;
          fix_req.user_text = fix_prompt;
          fix_req.model_name = settings.model_name;
          fix_req.temperature = settings.temperature;
          fix_req.max_tokens = settings.max_tokens;
          fix_req.sample_index = sample_index;
          std::string fix_response = llm.complete(fix_req);
          auto fixed = try_extract_code_block(
              fix_response, backend.language_tag(), parses);
          if (fixed) units = backend.split_units(fixed->text);
          compile = backend.compile_check(units);
          history.emplace_back(
              iteration, static_cast<int>(compile.diagnostics.size()));
        }
      }
    }
    if (kind == ApproachKind::BaseRCdFix) {
      ws.write_text("repair_history.json", history_json(false, history, {}));
    }

    finish_with_tests(result, problem, units, compile, llm, backend,
                      settings, ws);
  } catch (const std::exception& e) {
    fail_sample(result, e.what(), ws);
  }
  ws.write_text("sample.json", record_json(result.record) + "\n");
  return result;
}

EvalResult run_eval(const EvalRequest& request,
                    const std::shared_ptr<ChatProvider>& provider,
                    const Backend& backend, const RunSettings& settings) {
  EvalResult result;

  // Problems in path order so runs are reproducible.
  std::vector<std::filesystem::path> problem_dirs;
  for (const auto& entry :
       std::filesystem::directory_iterator(request.bench_dir)) {
    if (!entry.is_directory()) continue;
    if (!std::filesystem::exists(entry.path() / "manifest.json")) continue;
    problem_dirs.push_back(entry.path());
  }
  std::sort(problem_dirs.begin(), problem_dirs.end());

  std::vector<Problem> problems;
  for (const auto& dir : problem_dirs) {
    Problem p = load_problem(dir);
    if (!request.problem_filter.empty() &&
        std::find(request.problem_filter.begin(),
                  request.problem_filter.end(),
                  p.id) == request.problem_filter.end()) {
      continue;
    }
    for (auto& w : validate_problem(p)) result.warnings.push_back(std::move(w));
    problems.push_back(std::move(p));
  }
  if (problems.empty()) {
    throw ConfigError("no benchmark problems selected under " +
                      request.bench_dir.string());
  }

  struct WorkItem {
    const Problem* problem;
    ApproachKind kind;
    AblationFlags flags;
    int sample_index;
  };
  std::vector<WorkItem> items;
  std::vector<std::string> approach_order;
  for (const auto& [kind, flags] : request.approaches) {
    approach_order.push_back(approach_label(kind, flags));
    for (const auto& problem : problems) {
      for (int i = 0; i < request.n; ++i) {
        items.push_back({&problem, kind, flags, i});
      }
    }
  }

  std::vector<SampleRunResult> outcomes(items.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t index = next.fetch_add(1);
      if (index >= items.size()) return;
      const WorkItem& item = items[index];
      std::filesystem::path dir =
          request.workspace_root / approach_label(item.kind, item.flags) /
          item.problem->id / ("sample" + std::to_string(item.sample_index));
      SampleWorkspace ws(dir);
      LoggingProvider logger(provider, &ws);
      outcomes[index] =
          item.kind == ApproachKind::Iecoregen
              ? run_iecoregen_sample(*item.problem, item.flags, logger,
                                     backend, item.sample_index, settings, ws)
              : run_baseline_sample(*item.problem, item.kind, logger, backend,
                                    item.sample_index, settings, ws);
    }
  };
  int jobs = std::max(1, request.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (auto& outcome : outcomes) {
    result.records.push_back(outcome.record);
    for (auto& w : outcome.warnings) result.warnings.push_back(std::move(w));
  }

  result.report =
      aggregate(result.records, request.n, request.k_values, approach_order);

  std::filesystem::create_directories(request.workspace_root);
  auto write = [&](const char* name, const std::string& text) {
    std::ofstream out(request.workspace_root / name, std::ios::binary);
    if (!out) throw Error(std::string("cannot write ") + name);
    out << text;
  };
  write("report.txt", render_report_table(result.report));
  write("report.jsonl", render_report_records(result.report));
  std::string records_text =
      json{{"schema", "iecoregen-samples/1"}}.dump() + "\n";
  for (const auto& r : result.records) records_text += record_json(r) + "\n";
  write("records.jsonl", records_text);

  return result;
}

}  // namespace iecoregen
