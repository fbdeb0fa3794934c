#include "iecoregen/repair.hpp"

#include <algorithm>

#include "iecoregen/errors.hpp"

namespace iecoregen {

std::map<std::string, DiagnosticGroup> group_diagnostics(
    const std::vector<Diagnostic>& diagnostics,
    const std::vector<SourceUnit>& units, const Backend& backend,
    const std::map<std::string, std::set<MethodKey>>& targets_by_class) {
  std::map<std::string, DiagnosticGroup> groups;
  std::map<std::string, std::vector<MethodSpan>> span_cache;

  for (const auto& d : diagnostics) {
    const SourceUnit* unit = nullptr;
    for (const auto& u : units) {
      if (u.path == d.path) unit = &u;
    }
    if (unit == nullptr) {
      throw UnknownClassError("diagnostic path " + d.path +
                              " matches no unit");
    }
    DiagnosticGroup& group = groups[unit->class_id];
    group.diagnostics.push_back(d);

    auto [it, fresh] = span_cache.try_emplace(unit->path);
    if (fresh) it->second = backend.method_spans(*unit);
    bool in_method = false;
    for (const auto& span : it->second) {
      if (d.line >= span.begin_line && d.line <= span.end_line) {
        group.implicated.insert(span.key);
        in_method = true;
        break;
      }
    }
    if (!in_method) {
      // File-level diagnostic: implicate the class's completion targets,
      // or every method when the class has none.
      auto targets = targets_by_class.find(unit->class_id);
      if (targets != targets_by_class.end() && !targets->second.empty()) {
        group.implicated.insert(targets->second.begin(),
                                targets->second.end());
      } else {
        for (const auto& span : it->second) group.implicated.insert(span.key);
      }
    }
  }
  return groups;
}

namespace {

std::string render_diagnostics(const std::vector<Diagnostic>& diagnostics) {
  std::string out;
  for (const auto& d : diagnostics) {
    out += "- file: " + d.path + "\n";
    out += "  type: " + std::string(to_string(d.kind)) + "\n";
    out += "  line: " + std::to_string(d.line) + "\n";
    out += "  code: " + d.source_line + "\n";
    out += "  message: " + d.message + "\n";
  }
  return out;
}

std::string context_section(const std::string& context_text) {
  if (context_text.empty()) {
    return "\n## Context: related class signatures\n(none)\n";
  }
  std::string body = context_text;
  if (body.back() != '\n') body += '\n';
  return "\n## Context: related class signatures\n" + body;
}

}  // namespace

std::string build_fix_prompt(const std::string& class_id,
                             const SourceUnit& compressed_unit,
                             const std::vector<Diagnostic>& diagnostics,
                             const std::string& context_text,
                             bool include_context,
                             const PromptTemplates* templates) {
  if (diagnostics.empty()) {
    throw Error("build_fix_prompt needs at least one diagnostic for " +
                class_id);
  }
  const PromptTemplates& t =
      templates != nullptr ? *templates : PromptTemplates::defaults();
  std::map<std::string, std::string> vars = {
      {"code", compressed_unit.text},
      {"diagnostics", render_diagnostics(diagnostics)},
      {"context_section",
       include_context ? context_section(context_text) : ""},
  };
  return render_template(t.fix, vars);
}

RepairResult repair(
    std::vector<SourceUnit> units, ChatProvider& llm, const Backend& backend,
    int max_iterations,
    const std::map<std::string, std::set<MethodKey>>& targets_by_class,
    const std::function<std::string(const std::string&)>& context_for,
    const ChatSettings& settings, const AblationFlags& flags,
    const std::function<void(const std::string&)>& on_class) {
  RepairResult result;
  result.compile = backend.compile_check(units);
  result.history.emplace_back(
      0, static_cast<int>(result.compile.diagnostics.size()));

  for (int iteration = 1;
       !result.compile.ok && iteration <= max_iterations; ++iteration) {
    std::map<std::string, DiagnosticGroup> groups;
    try {
      groups = group_diagnostics(result.compile.diagnostics, units, backend,
                                 targets_by_class);
    } catch (const Error& e) {
      result.warnings.push_back(e.what());
      break;
    }

    for (auto& [class_id, group] : groups) {
      auto unit_it =
          std::find_if(units.begin(), units.end(), [&](const SourceUnit& u) {
            return u.class_id == class_id;
          });
      if (unit_it == units.end()) continue;
      if (on_class) on_class(class_id);

      SourceUnit view = *unit_it;
      if (!flags.no_compress) {
        try {
          view = backend.compress(*unit_it, group.implicated);
        } catch (const Error&) {
          // A unit that no longer parses is sent raw.
          view = *unit_it;
        }
      }
      std::string context =
          flags.no_context || !context_for ? "" : context_for(class_id);
      std::string prompt =
          build_fix_prompt(class_id, view, group.diagnostics, context,
                           !flags.no_context, settings.templates);

      ChatRequest req;
      req.user_text = prompt;
      req.model_name = settings.model_name;
      req.temperature = settings.temperature;
      req.max_tokens = settings.max_tokens;
      req.sample_index = settings.sample_index;

      std::string response;
      try {
        ++result.llm_calls;
        response = llm.complete(req);
      } catch (const Error& e) {
        result.provider_error = e.what();
        result.compile = backend.compile_check(units);
        result.history.emplace_back(
            iteration, static_cast<int>(result.compile.diagnostics.size()));
        result.units = std::move(units);
        return result;
      }

      auto parses = [&](const std::string& code) {
        SourceUnit candidate = *unit_it;
        candidate.text = code;
        return backend.parse_code(candidate).ok;
      };
      auto code =
          try_extract_code_block(response, backend.language_tag(), parses);
      if (!code) {
        result.warnings.push_back(class_id +
                                  ": fix response had no usable code; class "
                                  "skipped this iteration");
        continue;
      }
      SourceUnit completed = *unit_it;
      completed.text = code->text;
      MergeOutcome merged =
          backend.merge(*unit_it, completed, group.implicated);
      if (!merged.ok) {
        result.warnings.push_back(class_id +
                                  ": fix did not parse; class skipped this "
                                  "iteration");
        continue;
      }
      *unit_it = std::move(merged.unit);
    }

    result.compile = backend.compile_check(units);
    result.history.emplace_back(
        iteration, static_cast<int>(result.compile.diagnostics.size()));
  }

  result.units = std::move(units);
  return result;
}

}  // namespace iecoregen
