#include "iecoregen/repair.hpp"

#include "iecoregen/decompose.hpp"
#include "iecoregen/errors.hpp"
#include "iecoregen/minioo/minioo.hpp"
#include "test_util.hpp"

using namespace iecoregen;
using minioo::MiniooBackend;
using testutil::parse_model_ok;

namespace {

struct RepairFixture {
  ModelPackage model;
  std::vector<SourceUnit> units;  // skeleton with an injected typo
  std::map<std::string, std::set<MethodKey>> targets;

  std::function<std::string(const std::string&)> context_fn(
      const Backend& backend) const {
    const ModelPackage& m = model;
    const Backend* b = &backend;
    return [&m, b](const std::string& cls) {
      return build_context(m, cls, *b);
    };
  }
};

RepairFixture make_typo_fixture(const Backend& backend) {
  RepairFixture f;
  f.model = passthrough_annotation(parse_model_ok(testutil::kEmployeeModel),
                                   "bonus requirement");
  f.units = backend.generate_skeleton(f.model);
  for (auto& unit : f.units) {
    if (unit.class_id != "Employee") continue;
    minioo::ParseResult parsed = minioo::parse(unit.text, unit.path);
    REQUIRE(parsed.ok());
    const minioo::Method* method = parsed.program->classes.front().find_method(
        "computeLongServiceBonus", 1);
    REQUIRE(method != nullptr);
    std::string bad =
        "{\n    return this.getHireDates().daysBetween(currentDate) * 1.0;\n"
        "  }";
    unit.text = unit.text.substr(0, method->body_begin) + bad +
                unit.text.substr(method->body_end);
  }
  for (const auto& cls : select_targets(f.model))
    f.targets[cls] = operation_keys(f.model, cls);
  return f;
}

const char* kFixResponse =
    "```minioo\n"
    "class Employee {\n"
    "  func computeLongServiceBonus(currentDate: Date): Float {\n"
    "    return this.getHireDate().daysBetween(currentDate) * 1.0;\n"
    "  }\n"
    "}\n"
    "```\n";

}  // namespace

TEST_CASE("group_diagnostics maps errors onto methods") {
  MiniooBackend backend;
  std::vector<SourceUnit> units{
      {"src/A.mo", "A",
       "class A {\n"
       "  func f(): Int {\n"
       "    var x: Int = this.miss1();\n"
       "    return this.miss2();\n"
       "  }\n"
       "  func g(): Int {\n"
       "    return 1;\n"
       "  }\n"
       "}\n"}};
  CompileResult compile = backend.compile_check(units);
  REQUIRE(compile.diagnostics.size() == 2);

  SUBCASE("both errors land in one bucket with one method key") {
    auto groups = group_diagnostics(compile.diagnostics, units, backend, {});
    REQUIRE(groups.size() == 1);
    const DiagnosticGroup& g = groups.at("A");
    CHECK(g.diagnostics.size() == 2);
    REQUIRE(g.implicated.size() == 1);
    CHECK(g.implicated.begin()->to_string() == "A.f/0");
  }
  SUBCASE("file-level diagnostics implicate the class targets") {
    Diagnostic file_level;
    file_level.path = "src/A.mo";
    file_level.line = 1;  // the class header, outside any method span
    file_level.message = "whole-file problem";
    std::map<std::string, std::set<MethodKey>> targets{
        {"A", {{"A", "f", 0}}}};
    auto groups = group_diagnostics({file_level}, units, backend, targets);
    CHECK(groups.at("A").implicated == std::set<MethodKey>{{"A", "f", 0}});

    // Without declared targets, every method is implicated.
    auto fallback = group_diagnostics({file_level}, units, backend, {});
    CHECK(fallback.at("A").implicated.size() == 2);
  }
  SUBCASE("empty input maps to an empty result") {
    CHECK(group_diagnostics({}, units, backend, {}).empty());
  }
  SUBCASE("unknown paths are an error") {
    Diagnostic stray;
    stray.path = "src/Nowhere.mo";
    CHECK_THROWS_AS(group_diagnostics({stray}, units, backend, {}),
                    UnknownClassError);
  }
}

TEST_CASE("build_fix_prompt renders all five diagnostic fields") {
  MiniooBackend backend;
  RepairFixture f = make_typo_fixture(backend);
  CompileResult compile = backend.compile_check(f.units);
  REQUIRE(!compile.ok);
  REQUIRE(compile.diagnostics.size() == 1);
  const Diagnostic& d = compile.diagnostics.front();

  SourceUnit compressed =
      backend.compress(f.units.front(), f.targets.at("Employee"));
  std::string prompt =
      build_fix_prompt("Employee", compressed, compile.diagnostics,
                       "class X\n  func y(): Int", true);
  CHECK(prompt.find(d.path) != std::string::npos);
  CHECK(prompt.find("UnresolvedSymbol") != std::string::npos);
  CHECK(prompt.find("line: " + std::to_string(d.line)) != std::string::npos);
  CHECK(prompt.find(d.source_line) != std::string::npos);
  CHECK(prompt.find(d.message) != std::string::npos);
  CHECK(prompt.find("class X") != std::string::npos);

  SUBCASE("deterministic on repeat") {
    CHECK(build_fix_prompt("Employee", compressed, compile.diagnostics,
                           "class X\n  func y(): Int", true) == prompt);
  }
  SUBCASE("zero diagnostics violate the precondition") {
    CHECK_THROWS_AS(
        build_fix_prompt("Employee", compressed, {}, "", true), Error);
  }
}

TEST_CASE("repair loops until clean or the bound") {
  MiniooBackend backend;
  ChatSettings settings;

  SUBCASE("already clean: zero calls, history [(0,0)]") {
    ModelPackage m = passthrough_annotation(
        parse_model_ok(testutil::kEmployeeModel), "req");
    auto units = MiniooBackend().generate_skeleton(m);
    int calls = 0;
    ScriptedProvider llm([&](const ChatRequest&) {
      ++calls;
      return std::string("unused");
    });
    RepairResult r = repair(units, llm, backend, 3, {}, {}, settings, {});
    CHECK(r.compile.ok);
    CHECK(calls == 0);
    CHECK(r.history ==
          std::vector<std::pair<int, int>>{{0, 0}});
  }

  SUBCASE("the injected typo converges in one round") {
    RepairFixture f = make_typo_fixture(backend);
    ScriptedProvider llm(
        [](const ChatRequest&) { return std::string(kFixResponse); });
    RepairResult r = repair(f.units, llm, backend, 3, f.targets,
                            f.context_fn(backend), settings, {});
    CHECK(r.compile.ok);
    CHECK(r.history ==
          std::vector<std::pair<int, int>>{{0, 1}, {1, 0}});
    CHECK(r.llm_calls == 1);
  }

  SUBCASE("maxIterations=0 returns immediately with the errors") {
    RepairFixture f = make_typo_fixture(backend);
    int calls = 0;
    ScriptedProvider llm([&](const ChatRequest&) {
      ++calls;
      return std::string(kFixResponse);
    });
    RepairResult r = repair(f.units, llm, backend, 0, f.targets,
                            f.context_fn(backend), settings, {});
    CHECK(!r.compile.ok);
    CHECK(calls == 0);
    CHECK(r.history == std::vector<std::pair<int, int>>{{0, 1}});
  }

  SUBCASE("worsening fixes still run to the bound") {
    RepairFixture f = make_typo_fixture(backend);
    ScriptedProvider llm([](const ChatRequest&) {
      // "Fix" that introduces yet another unknown accessor.
      return std::string(
          "```minioo\nclass Employee {\n"
          "  func computeLongServiceBonus(currentDate: Date): Float {\n"
          "    return this.getHireDates().daysBetween(this.getWat()) * 1.0;\n"
          "  }\n}\n```\n");
    });
    RepairResult r = repair(f.units, llm, backend, 2, f.targets,
                            f.context_fn(backend), settings, {});
    CHECK(!r.compile.ok);
    REQUIRE(r.history.size() == 3);  // initial + two bounded rounds
    CHECK(r.history[1].second >= r.history[0].second);
  }

  SUBCASE("provider failures abort with the state flagged") {
    RepairFixture f = make_typo_fixture(backend);
    ScriptedProvider llm([](const ChatRequest&) -> std::string {
      throw TransportError("mid-run outage", 503);
    });
    RepairResult r = repair(f.units, llm, backend, 3, f.targets,
                            f.context_fn(backend), settings, {});
    CHECK(!r.compile.ok);
    REQUIRE(r.provider_error.has_value());
    CHECK(r.provider_error->find("outage") != std::string::npos);
  }

  SUBCASE("unparseable fixes skip the class for the round") {
    RepairFixture f = make_typo_fixture(backend);
    int calls = 0;
    ScriptedProvider llm([&](const ChatRequest&) {
      ++calls;
      return std::string("still just prose");
    });
    RepairResult r = repair(f.units, llm, backend, 2, f.targets,
                            f.context_fn(backend), settings, {});
    CHECK(!r.compile.ok);
    CHECK(calls == 2);  // one per iteration
    CHECK(!r.warnings.empty());
  }
}

TEST_CASE("the shipped repair fixture replays to convergence") {
  MiniooBackend backend;
  auto dir = testutil::source_dir() / "tests/fixtures/repair_typo";
  ModelPackage model = passthrough_annotation(
      parse_model_ok(testutil::read_file(testutil::source_dir() /
                                         "bench/employee_bonus/model.cmdl")),
      testutil::read_file(testutil::source_dir() /
                          "bench/employee_bonus/requirement.txt"));
  std::vector<SourceUnit> units{
      {"src/Employee.mo", "Employee",
       testutil::read_file(dir / "src/Employee.mo")},
      {"src/HrFactory.mo", "HrFactory",
       testutil::read_file(dir / "src/HrFactory.mo")}};

  ReplayProvider replay(dir / "transcript.jsonl");
  std::map<std::string, std::set<MethodKey>> targets;
  for (const auto& cls : select_targets(model))
    targets[cls] = operation_keys(model, cls);

  ChatSettings settings;
  settings.model_name = "fixture-model";
  settings.temperature = 0.8;
  RepairResult r = repair(
      units, replay, backend, 3, targets,
      [&](const std::string& cls) { return build_context(model, cls, backend); },
      settings, {});
  CHECK(r.compile.ok);
  REQUIRE(r.history.size() == 2);
  CHECK(r.history[0].second == 1);
  CHECK(r.history[1].second == 0);
}
