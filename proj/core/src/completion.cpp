#include "iecoregen/completion.hpp"

#include <algorithm>

#include "iecoregen/errors.hpp"

namespace iecoregen {

std::vector<std::string> select_targets(const ModelPackage& m) {
  std::vector<std::string> out;
  for (const auto& cls : m.classes) {
    if (!cls.operations.empty()) out.push_back(cls.name);
  }
  return out;
}

std::set<MethodKey> operation_keys(const ModelPackage& m,
                                   const std::string& class_id) {
  std::set<MethodKey> keys;
  const ClassDef* cls = m.find_class(class_id);
  if (cls == nullptr) return keys;
  for (const auto& op : cls->operations) {
    keys.insert({class_id, op.name, static_cast<int>(op.params.size())});
  }
  return keys;
}

std::string build_context(const ModelPackage& m, const std::string& class_id,
                          const Backend& backend, int char_budget) {
  std::string out;
  for (const ClassDef* related : related_classes(m, class_id)) {
    if (!out.empty()) out += "\n";
    out += "class " + related->name + "\n";
    for (const auto& line : backend.signature_lines(m, *related)) {
      out += "  " + line + "\n";
    }
  }
  if (char_budget >= 0 &&
      out.size() > static_cast<std::size_t>(char_budget)) {
    static const char* kMarker = "\n…truncated\n";
    std::size_t keep = static_cast<std::size_t>(char_budget);
    out = out.substr(0, keep) + kMarker;
  }
  return out;
}

namespace {

std::string render_targets(const CompletionTask& task) {
  std::string out;
  for (const auto& key : task.targets) {
    out += "- " + key.method + "/" + std::to_string(key.arity) + " in class " +
           key.class_name + "\n";
  }
  return out;
}

std::string context_section(const std::string& context_text) {
  if (context_text.empty()) {
    return "\n## Context: related class signatures\n(none)\n\n";
  }
  std::string body = context_text;
  if (body.back() != '\n') body += '\n';
  return "\n## Context: related class signatures\n" + body + "\n";
}

}  // namespace

std::string build_completion_prompt(const CompletionTask& task,
                                    const AblationFlags& flags,
                                    const Backend& backend,
                                    const PromptTemplates* templates) {
  const PromptTemplates& t =
      templates != nullptr ? *templates : PromptTemplates::defaults();
  std::string code =
      flags.no_compress ? task.unit.text
                        : backend.compress(task.unit, task.targets).text;
  std::map<std::string, std::string> vars = {
      {"code", code},
      {"context_section",
       flags.no_context ? "" : context_section(task.context_text)},
      {"targets", render_targets(task)},
  };
  return render_template(t.completion, vars);
}

CompletionOutcome complete_class(const CompletionTask& task, ChatProvider& llm,
                                 const Backend& backend,
                                 const ChatSettings& settings,
                                 const AblationFlags& flags) {
  CompletionOutcome outcome;
  outcome.unit = task.unit;

  std::string prompt =
      build_completion_prompt(task, flags, backend, settings.templates);

  auto ask = [&](const std::string& user_text) {
    ChatRequest req;
    req.user_text = user_text;
    req.model_name = settings.model_name;
    req.temperature = settings.temperature;
    req.max_tokens = settings.max_tokens;
    req.sample_index = settings.sample_index;
    ++outcome.llm_calls;
    return llm.complete(req);
  };

  auto parses = [&](const std::string& code) {
    SourceUnit candidate = task.unit;
    candidate.text = code;
    return backend.parse_code(candidate).ok;
  };

  std::string user_text = prompt;
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::string response = ask(user_text);
    auto code =
        try_extract_code_block(response, backend.language_tag(), parses);
    std::vector<Diagnostic> parse_diags;
    if (code) {
      SourceUnit completed = task.unit;
      completed.text = code->text;
      if (code->unfenced) {
        outcome.warnings.push_back(task.class_id +
                                   ": response had no code fence; the whole "
                                   "text parsed as code");
      }
      ParseCheck check = backend.parse_code(completed);
      if (check.ok) {
        MergeOutcome merged =
            backend.merge(task.unit, completed, task.targets);
        if (merged.ok) {
          outcome.unit = std::move(merged.unit);
          outcome.report = std::move(merged.report);
          outcome.merged = true;
          return outcome;
        }
        parse_diags = std::move(merged.diagnostics);
      } else {
        parse_diags = std::move(check.diagnostics);
      }
    }
    if (attempt == 1) break;
    // Single re-ask carrying the parse diagnostics.
    std::string diag_text;
    if (!code) {
      diag_text = "- the response contained no code block\n";
    } else {
      for (const auto& d : parse_diags) diag_text += "- " + d.to_string() + "\n";
    }
    user_text = prompt +
                "\n## Previous attempt\n"
                "Your previous answer could not be used:\n" +
                diag_text +
                "Return the corrected class in one fenced code block tagged `" +
                backend.language_tag() + "`.\n";
  }

  outcome.warnings.push_back(task.class_id +
                             ": completion failed to parse after one retry; "
                             "unit left unchanged");
  return outcome;
}

CompleteAllOutcome complete_all(
    const ModelPackage& m, std::vector<SourceUnit> units, ChatProvider& llm,
    const Backend& backend, const AblationFlags& flags,
    const ChatSettings& settings, int context_char_budget,
    const std::function<void(const std::string&)>& on_class) {
  CompleteAllOutcome outcome;
  for (const auto& class_id : select_targets(m)) {
    if (on_class) on_class(class_id);
    auto unit_it =
        std::find_if(units.begin(), units.end(), [&](const SourceUnit& u) {
          return u.class_id == class_id;
        });
    if (unit_it == units.end()) {
      outcome.warnings.push_back("no unit for class " + class_id);
      continue;
    }
    CompletionTask task;
    task.class_id = class_id;
    task.unit = *unit_it;
    task.targets = operation_keys(m, class_id);
    task.context_text =
        flags.no_context
            ? ""
            : build_context(m, class_id, backend, context_char_budget);

    CompletionOutcome result =
        complete_class(task, llm, backend, settings, flags);
    *unit_it = result.unit;
    outcome.reports.emplace_back(class_id, std::move(result.report));
    outcome.warnings.insert(outcome.warnings.end(), result.warnings.begin(),
                            result.warnings.end());
  }
  outcome.units = std::move(units);
  return outcome;
}

}  // namespace iecoregen
