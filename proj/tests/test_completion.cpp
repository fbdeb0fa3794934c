#include "iecoregen/completion.hpp"

#include "iecoregen/decompose.hpp"
#include "iecoregen/errors.hpp"
#include "iecoregen/minioo/minioo.hpp"
#include "test_util.hpp"

using namespace iecoregen;
using minioo::MiniooBackend;
using testutil::parse_model_ok;

namespace {

ModelPackage annotated_airline() {
  return passthrough_annotation(parse_model_ok(testutil::kAirlineModel),
                                "publish flights before departure and count "
                                "the published ones");
}

CompletionTask airline_task(const ModelPackage& m, const Backend& backend) {
  auto units = backend.generate_skeleton(m);
  CompletionTask task;
  task.class_id = "Airline";
  for (const auto& u : units) {
    if (u.class_id == "Airline") task.unit = u;
  }
  task.targets = operation_keys(m, "Airline");
  task.context_text = build_context(m, "Airline", backend);
  return task;
}

const char* kGoodCompletion = R"(```minioo
class Airline {
  func publishFlight(f: Flight, now: Date): Bool {
    if (f == null) {
      return false;
    }
    f.setStatus("PUBLISHED");
    this.getFlights().add(f);
    f.setAirline(this);
    return true;
  }

  func countPublished(): Int {
    var count: Int = 0;
    foreach (fl in this.getFlights()) {
      if (fl.getStatus() == "PUBLISHED") {
        count = count + 1;
      }
    }
    return count;
  }
}
```)";

}  // namespace

TEST_CASE("select_targets keeps model declaration order") {
  ModelPackage m = parse_model_ok(
      "package p { class A { attr x: Int; } "
      "class B { op f(): Int; } class C { attr y: Int; op g(): Int; } }");
  CHECK(select_targets(m) == std::vector<std::string>{"B", "C"});
  SUBCASE("no operations anywhere") {
    ModelPackage none = parse_model_ok("package p { class A { attr x: Int; } }");
    CHECK(select_targets(none).empty());
  }
}

TEST_CASE("build_context renders related signatures under a budget") {
  MiniooBackend backend;
  ModelPackage m = annotated_airline();

  std::string context = build_context(m, "Airline", backend);
  CHECK(context.find("class Flight") != std::string::npos);
  CHECK(context.find("func getStatus(): String") != std::string::npos);
  CHECK(context.find("func setDepartureDate(value: Date): Void") !=
        std::string::npos);
  CHECK(context.find("class Airline") == std::string::npos);

  SUBCASE("isolated classes have empty context") {
    ModelPackage iso = passthrough_annotation(
        parse_model_ok("package p { class A { attr x: Int; op f(): Int; } }"),
        "r");
    CHECK(build_context(iso, "A", backend).empty());
  }
  SUBCASE("tiny budgets truncate with a marker") {
    std::string capped = build_context(m, "Airline", backend, 10);
    CHECK(capped.find("…truncated") != std::string::npos);
    CHECK(capped.size() < context.size());
  }
}

TEST_CASE("build_completion_prompt honors the ablation flags") {
  MiniooBackend backend;
  ModelPackage m = annotated_airline();
  CompletionTask task = airline_task(m, backend);

  std::string full = build_completion_prompt(task, {}, backend);
  CHECK(full.find("## Methods to complete") != std::string::npos);
  CHECK(full.find("publishFlight/2 in class Airline") != std::string::npos);
  CHECK(full.find("## Context: related class signatures") !=
        std::string::npos);
  // Compressed: accessor docstrings gone, operation docstrings kept.
  CHECK(full.find("Returns the value of") == std::string::npos);
  CHECK(full.find("Summary:") != std::string::npos);

  SUBCASE("no-compress embeds the raw unit") {
    AblationFlags flags;
    flags.no_compress = true;
    std::string raw = build_completion_prompt(task, flags, backend);
    CHECK(raw.find("Returns the value of") != std::string::npos);
    CHECK(raw.size() > full.size());
  }
  SUBCASE("no-context removes the section header") {
    AblationFlags flags;
    flags.no_context = true;
    std::string bare = build_completion_prompt(task, flags, backend);
    CHECK(bare.find("## Context") == std::string::npos);
  }
  SUBCASE("prompt assembly is deterministic") {
    CHECK(build_completion_prompt(task, {}, backend) == full);
  }
  SUBCASE("compression shrinks the prompt, 30 percent on employee scale") {
    AblationFlags flags;
    flags.no_compress = true;
    std::string raw = build_completion_prompt(task, flags, backend);
    CHECK(full.size() <= raw.size());

    ModelPackage emp = passthrough_annotation(
        parse_model_ok(testutil::kEmployeeModel), "bonus requirement");
    auto emp_units = backend.generate_skeleton(emp);
    CompletionTask emp_task;
    emp_task.class_id = "Employee";
    emp_task.unit = emp_units.front();
    emp_task.targets = operation_keys(emp, "Employee");
    std::string emp_full = build_completion_prompt(emp_task, {}, backend);
    std::string emp_raw = build_completion_prompt(emp_task, flags, backend);
    // Threshold asserted on the shipped fixture scale only.
    CHECK(emp_full.size() * 100 <= emp_raw.size() * 70);
  }
}

TEST_CASE("complete_class merges a good completion") {
  MiniooBackend backend;
  ModelPackage m = annotated_airline();
  CompletionTask task = airline_task(m, backend);
  ChatSettings settings;
  settings.model_name = "t";

  SUBCASE("success path") {
    ScriptedProvider llm([](const ChatRequest&) {
      return std::string(kGoodCompletion);
    });
    CompletionOutcome outcome =
        complete_class(task, llm, backend, settings, {});
    CHECK(outcome.merged);
    CHECK(outcome.llm_calls == 1);
    CHECK(outcome.report.replaced_methods.size() == 2);
    // Both operation traps were replaced; the accessors keep their bodies.
    CHECK(outcome.unit.text.find("raise Unsupported") == std::string::npos);
    CHECK(outcome.unit.text.find("f.setAirline(this);") != std::string::npos);
    CHECK(outcome.unit.text.find("return this.name;") != std::string::npos);
  }
  SUBCASE("a sneaky setter edit is preserved away") {
    ScriptedProvider llm([](const ChatRequest&) {
      return std::string(
          "```minioo\nclass Airline {\n  func setName(value: String) {\n"
          "    raise Hacked(\"gotcha\");\n  }\n"
          "  func countPublished(): Int {\n    return 0;\n  }\n}\n```\n");
    });
    CompletionOutcome outcome =
        complete_class(task, llm, backend, settings, {});
    CHECK(outcome.merged);
    CHECK(outcome.unit.text.find("Hacked") == std::string::npos);
    CHECK(!outcome.report.rejected_edits.empty());
  }
  SUBCASE("prose twice leaves the unit unchanged") {
    int calls = 0;
    ScriptedProvider llm([&](const ChatRequest&) {
      ++calls;
      return std::string("I would rather talk about the weather.");
    });
    CompletionOutcome outcome =
        complete_class(task, llm, backend, settings, {});
    CHECK(!outcome.merged);
    CHECK(calls == 2);  // one re-ask
    CHECK(outcome.unit.text == task.unit.text);
    CHECK(!outcome.warnings.empty());
  }
  SUBCASE("parse failure then success uses the single retry") {
    int calls = 0;
    ScriptedProvider llm([&](const ChatRequest& req) {
      ++calls;
      if (calls == 1) return std::string("```minioo\nclass Airline { func (\n```\n");
      CHECK(req.user_text.find("Previous attempt") != std::string::npos);
      return std::string(kGoodCompletion);
    });
    CompletionOutcome outcome =
        complete_class(task, llm, backend, settings, {});
    CHECK(outcome.merged);
    CHECK(outcome.llm_calls == 2);
  }
}

TEST_CASE("complete_all walks target classes in order and isolates failures") {
  MiniooBackend backend;
  ModelPackage m = passthrough_annotation(
      parse_model_ok("package p {\n"
                     "  class A { attr x: Int; op f(): Int; }\n"
                     "  class B { attr y: Int; op g(): Int; }\n"
                     "}\n"),
      "requirement");
  auto units = backend.generate_skeleton(m);
  ChatSettings settings;

  std::vector<std::string> asked;
  ScriptedProvider llm([&](const ChatRequest& req) -> std::string {
    auto pos = req.user_text.find(" in class ");
    std::string cls = req.user_text.substr(pos + 10, 1);
    asked.push_back(cls);
    if (cls == "A") {
      return "```minioo\nclass A {\n  func f(): Int {\n    return 7;\n"
             "  }\n}\n```\n";
    }
    return "no code in this reply";
  });

  std::vector<std::string> order;
  CompleteAllOutcome outcome = complete_all(
      m, units, llm, backend, {}, settings, kDefaultContextCharBudget,
      [&](const std::string& cls) { order.push_back(cls); });

  CHECK(order == std::vector<std::string>{"A", "B"});
  CHECK(asked.size() == 3);  // A once, B twice (retry)
  // A was completed even though B failed.
  bool a_done = false;
  for (const auto& u : outcome.units) {
    if (u.class_id == "A") a_done = u.text.find("return 7;") != std::string::npos;
  }
  CHECK(a_done);
  CHECK(!outcome.warnings.empty());

  SUBCASE("no target classes means no calls and untouched units") {
    ModelPackage plain = passthrough_annotation(
        parse_model_ok("package p { class D { attr x: Int; } }"), "r");
    auto plain_units = backend.generate_skeleton(plain);
    int calls = 0;
    ScriptedProvider counting([&](const ChatRequest&) {
      ++calls;
      return std::string("unused");
    });
    CompleteAllOutcome untouched =
        complete_all(plain, plain_units, counting, backend, {}, settings);
    CHECK(calls == 0);
    REQUIRE(untouched.units.size() == plain_units.size());
    for (std::size_t i = 0; i < plain_units.size(); ++i) {
      CHECK(untouched.units[i].text == plain_units[i].text);
    }
  }
}
