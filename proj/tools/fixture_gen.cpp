// Regenerates the benchmark replay transcripts and the repair fixture by
// running the full pipeline against the per-problem oracle responses under
// bench/<problem>/oracle/. Usage: fixturegen <source_root> [<out_root>]
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "iecoregen/completion.hpp"
#include "iecoregen/decompose.hpp"
#include "iecoregen/errors.hpp"
#include "iecoregen/eval.hpp"
#include "iecoregen/minioo/minioo.hpp"
#include "iecoregen/model_text.hpp"
#include "iecoregen/repair.hpp"

namespace {

using namespace iecoregen;
namespace fs = std::filesystem;

constexpr const char* kFixtureModel = "fixture-model";
constexpr double kFixtureTemperature = 0.8;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct Oracle {
  std::string decompose;
  std::map<std::string, std::string> completions;  // class -> response
  std::vector<std::pair<std::string, std::string>> fixes;  // marker -> resp
  std::string baseline;
};

Oracle load_oracle(const fs::path& dir) {
  Oracle oracle;
  if (!fs::exists(dir)) return oracle;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    std::string stem = file.stem().string();
    if (stem == "decompose") {
      oracle.decompose = read_file(file);
    } else if (stem == "baseline") {
      oracle.baseline = read_file(file);
    } else if (stem.rfind("complete_", 0) == 0) {
      oracle.completions[stem.substr(9)] = read_file(file);
    } else if (stem.rfind("fix_when_", 0) == 0) {
      oracle.fixes.emplace_back(stem.substr(9), read_file(file));
    }
  }
  return oracle;
}

std::string oracle_answer(const Oracle& oracle, const std::string& prompt) {
  auto has = [&](const char* marker) {
    return prompt.find(marker) != std::string::npos;
  };
  if (has("Write a method specification for every operation")) {
    if (oracle.decompose.empty()) throw Error("no decompose oracle");
    return oracle.decompose;
  }
  if (has("## Compilation errors")) {
    for (const auto& [marker, response] : oracle.fixes) {
      if (has(marker.c_str())) return response;
    }
    throw Error("no fix oracle matches this prompt:\n" + prompt);
  }
  if (has("## Methods to complete")) {
    auto pos = prompt.find(" in class ");
    if (pos == std::string::npos) throw Error("target list without class");
    pos += 10;
    auto end = prompt.find_first_of("\r\n ", pos);
    std::string cls = prompt.substr(pos, end - pos);
    auto it = oracle.completions.find(cls);
    if (it == oracle.completions.end())
      throw Error("no completion oracle for class " + cls);
    return it->second;
  }
  if (has("single MiniOO source file")) {
    if (oracle.baseline.empty()) throw Error("no baseline oracle");
    return oracle.baseline;
  }
  throw Error("oracle cannot classify this prompt:\n" + prompt);
}

/// Records each distinct prompt digest once, with deterministic metadata.
class DedupRecorder final : public ChatProvider {
 public:
  DedupRecorder(std::shared_ptr<ChatProvider> inner, fs::path file)
      : inner_(std::move(inner)), file_(std::move(file)) {}

  std::string complete(const ChatRequest& req) override {
    std::string response = inner_->complete(req);
    std::string digest = prompt_digest(req);
    if (seen_.insert(digest).second) {
      TranscriptRecord record;
      record.digest = digest;
      record.model_name = req.model_name;
      record.sample_index = req.sample_index;
      record.temperature = req.temperature;
      record.response = response;
      record.meta.prompt_chars = static_cast<std::int64_t>(
          req.system_text.size() + req.user_text.size());
      record.meta.response_chars = static_cast<std::int64_t>(response.size());
      append_transcript(file_, {record});
    }
    return response;
  }

 private:
  std::shared_ptr<ChatProvider> inner_;
  fs::path file_;
  std::set<std::string> seen_;
};

RunSettings fixture_settings() {
  RunSettings settings;
  settings.model_name = kFixtureModel;
  settings.temperature = kFixtureTemperature;
  settings.use_canonical_tests = true;
  return settings;
}

void require(bool condition, const std::string& message) {
  if (!condition) throw Error("fixture generation failed: " + message);
}

void generate_problem(const fs::path& bench, const std::string& problem_id,
                      const std::shared_ptr<DedupRecorder>& recorder,
                      const Backend& backend) {
  Problem problem = load_problem(bench / problem_id);
  RunSettings settings = fixture_settings();

  for (int sample = 0; sample < 5; ++sample) {
    SampleWorkspace ws;  // disabled: only the transcript matters here
    LoggingProvider logger(recorder, &ws);
    SampleRunResult full = run_iecoregen_sample(problem, {}, logger, backend,
                                                sample, settings, ws);
    for (const auto& w : full.warnings) std::cerr << "  note: " << w << "\n";
    require(full.record.passed,
            problem_id + " sample " + std::to_string(sample) +
                " did not pass with the oracle responses");

    SampleRunResult baseline = run_baseline_sample(
        problem, ApproachKind::BaseRCdFix, logger, backend, sample, settings,
        ws);
    require(baseline.record.compiled,
            problem_id + " baseline sample did not compile");
    if (problem_id == "airline") {
      require(!baseline.record.passed,
              "airline baseline unexpectedly passes every test");
    } else {
      require(baseline.record.passed,
              problem_id + " baseline should pass its tests");
    }

    // base-r has its own diagram-free prompt; base-r-cd shares the
    // generation digests of base-r-cd-fix and needs no extra records.
    SampleRunResult plain = run_baseline_sample(
        problem, ApproachKind::BaseR, logger, backend, sample, settings, ws);
    if (problem_id == "airline") {
      require(!plain.record.compiled,
              "airline base-r should keep its compile error without fixing");
    } else {
      require(plain.record.passed, problem_id + " base-r should pass");
    }
  }

  if (problem_id == "airline") {
    // Single-flag ablation variants, one sample each.
    struct Variant {
      AblationFlags flags;
      bool expect_compiled;
    };
    std::vector<Variant> variants;
    variants.push_back({AblationFlags{true, false, false, false}, true});
    variants.push_back({AblationFlags{false, true, false, false}, true});
    variants.push_back({AblationFlags{false, false, true, false}, true});
    variants.push_back({AblationFlags{false, false, false, true}, false});
    for (const auto& variant : variants) {
      SampleWorkspace ws;
      LoggingProvider logger(recorder, &ws);
      SampleRunResult r = run_iecoregen_sample(problem, variant.flags, logger,
                                               backend, 0, settings, ws);
      require(r.record.compiled == variant.expect_compiled,
              "ablation variant compile state surprised us");
    }
  }
  std::cout << "  " << problem_id << ": ok\n";
}

void generate_repair_fixture(const fs::path& bench, const fs::path& out_dir,
                             const Backend& backend) {
  Problem problem = load_problem(bench / "employee_bonus");
  ModelPackage annotated =
      passthrough_annotation(problem.model, problem.requirement);
  std::vector<SourceUnit> units = backend.generate_skeleton(annotated);

  // Swap the operation body for one that calls a misspelled accessor.
  for (auto& unit : units) {
    if (unit.class_id != "Employee") continue;
    minioo::ParseResult parsed = minioo::parse(unit.text, unit.path);
    require(parsed.ok(), "employee skeleton must parse");
    const minioo::Method* method =
        parsed.program->classes.front().find_method("computeLongServiceBonus",
                                                    1);
    require(method != nullptr, "operation missing from the skeleton");
    std::string bad_body =
        "{\n    var years: Int = "
        "this.getHireDates().daysBetween(currentDate) / 365;\n"
        "    return years * 100.0;\n  }";
    unit.text = unit.text.substr(0, method->body_begin) + bad_body +
                unit.text.substr(method->body_end);
  }

  fs::remove_all(out_dir);
  fs::create_directories(out_dir);
  for (const auto& unit : units) {
    fs::path target = out_dir / unit.path;
    fs::create_directories(target.parent_path());
    std::ofstream out(target, std::ios::binary);
    out << unit.text;
  }

  Oracle oracle = load_oracle(bench / "employee_bonus" / "oracle");
  auto scripted = std::make_shared<ScriptedProvider>(
      [oracle](const ChatRequest& req) {
        return oracle_answer(oracle, req.user_text);
      });
  auto recorder = std::make_shared<DedupRecorder>(
      scripted, out_dir / "transcript.jsonl");

  std::map<std::string, std::set<MethodKey>> targets;
  for (const auto& cls : select_targets(annotated))
    targets[cls] = operation_keys(annotated, cls);
  auto context_for = [&](const std::string& cls) {
    return build_context(annotated, cls, backend);
  };
  ChatSettings chat;
  chat.model_name = kFixtureModel;
  chat.temperature = kFixtureTemperature;

  RepairResult result = repair(units, *recorder, backend, 3, targets,
                               context_for, chat, {});
  require(result.compile.ok, "repair fixture did not converge");
  require(result.history.size() == 2 && result.history[0].second == 1 &&
              result.history[1].second == 0,
          "repair fixture history is not the expected [(0,1),(1,0)]");
  std::cout << "  repair_typo: ok\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: fixturegen <source_root> [<out_root>]\n";
    return 1;
  }
  fs::path source_root = argv[1];
  fs::path out_root = argc > 2 ? fs::path(argv[2]) : source_root;
  fs::path bench = source_root / "bench";

  try {
    fs::create_directories(out_root / "bench");
    fs::path transcript = out_root / "bench" / "transcripts.jsonl";
    fs::remove(transcript);

    minioo::MiniooBackend backend;
    std::cout << "generating transcripts into " << transcript.string()
              << "\n";
    for (const std::string problem_id :
         {"employee_bonus", "airline", "library"}) {
      Oracle oracle = load_oracle(bench / problem_id / "oracle");
      auto scripted = std::make_shared<ScriptedProvider>(
          [oracle](const ChatRequest& req) {
            return oracle_answer(oracle, req.user_text);
          });
      auto recorder = std::make_shared<DedupRecorder>(scripted, transcript);
      generate_problem(bench, problem_id, recorder, backend);
    }

    generate_repair_fixture(bench, out_root / "tests/fixtures/repair_typo",
                            backend);
    std::cout << "done\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "fixturegen: " << e.what() << "\n";
    return 1;
  }
}
