#include "iecoregen/decompose.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <set>
#include <sstream>

#include "iecoregen/errors.hpp"
#include "iecoregen/plantuml.hpp"

namespace iecoregen {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return s;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// "### Class.op(arity)" -> OperationId; tolerates a missing arity.
std::optional<OperationId> parse_header(const std::string& line) {
  std::string rest = trim(line.substr(3));
  if (rest.empty()) return std::nullopt;
  std::string name = rest;
  std::optional<int> arity;
  auto paren = rest.find('(');
  if (paren != std::string::npos) {
    name = trim(rest.substr(0, paren));
    auto close = rest.find(')', paren);
    std::string inside = close == std::string::npos
                             ? rest.substr(paren + 1)
                             : rest.substr(paren + 1, close - paren - 1);
    inside = trim(inside);
    if (!inside.empty() &&
        std::all_of(inside.begin(), inside.end(), [](unsigned char c) {
          return std::isdigit(c);
        })) {
      arity = std::stoi(inside);
    }
  }
  auto id = OperationId::parse(name);
  if (!id) return std::nullopt;
  if (arity && !id->arity) id->arity = arity;
  return id;
}

enum class Section {
  None,
  Summary,
  Algorithm,
  Input,
  Output,
  Preconditions,
  Postconditions
};

// Recognizes "Label:" at the start of a (possibly bulleted) line.
Section section_of(const std::string& line, std::string* rest) {
  static const std::pair<const char*, Section> kLabels[] = {
      {"summary", Section::Summary},
      {"algorithm", Section::Algorithm},
      {"inputs", Section::Input},
      {"input", Section::Input},
      {"outputs", Section::Output},
      {"output", Section::Output},
      {"preconditions", Section::Preconditions},
      {"pre-conditions", Section::Preconditions},
      {"postconditions", Section::Postconditions},
      {"post-conditions", Section::Postconditions},
  };
  std::string t = trim(line);
  if (t.rfind("**", 0) == 0) t = trim(t.substr(2));  // tolerate bold labels
  std::string low = lower(t);
  for (const auto& [label, section] : kLabels) {
    std::size_t len = std::strlen(label);
    if (low.rfind(label, 0) == 0) {
      std::string after = trim(t.substr(len));
      if (after.rfind("**", 0) == 0) after = trim(after.substr(2));
      if (!after.empty() && after.front() == ':') {
        *rest = trim(after.substr(1));
        return section;
      }
    }
  }
  return Section::None;
}

// "- name: description" -> (name, description)
std::optional<std::pair<std::string, std::string>> parse_input_item(
    const std::string& line) {
  std::string t = trim(line);
  if (t.rfind("- ", 0) == 0) t = trim(t.substr(2));
  else if (!t.empty() && t.front() == '-') t = trim(t.substr(1));
  auto colon = t.find(':');
  if (colon == std::string::npos || colon == 0) return std::nullopt;
  std::string name = trim(t.substr(0, colon));
  if (name.empty() ||
      !std::all_of(name.begin(), name.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
      }))
    return std::nullopt;
  return std::make_pair(name, trim(t.substr(colon + 1)));
}

std::string strip_item_marker(const std::string& line) {
  std::string t = trim(line);
  if (t.rfind("- ", 0) == 0) return trim(t.substr(2));
  if (!t.empty() && t.front() == '-') return trim(t.substr(1));
  return t;
}

MethodSpec parse_spec_body(const std::vector<std::string>& lines,
                           const std::string& key,
                           std::vector<std::string>& warnings) {
  MethodSpec spec;
  Section current = Section::None;
  std::set<Section> seen;
  auto append_text = [](std::string& field, const std::string& text) {
    if (text.empty()) return;
    if (!field.empty()) field += "\n";
    field += text;
  };

  for (const auto& raw : lines) {
    std::string t = trim(raw);
    if (t == "```" || t.rfind("```", 0) == 0) continue;
    std::string rest;
    Section s = section_of(raw, &rest);
    if (s != Section::None) {
      current = s;
      seen.insert(s);
      if (rest.empty()) continue;
      t = rest;
    }
    switch (current) {
      case Section::None: break;  // prose before the first label
      case Section::Summary: append_text(spec.summary, t); break;
      case Section::Algorithm: append_text(spec.algorithm, t); break;
      case Section::Output: append_text(spec.outputs, t); break;
      case Section::Input: {
        if (t.empty()) break;
        if (auto item = parse_input_item(t)) {
          spec.inputs.push_back(std::move(*item));
        } else if (!spec.inputs.empty()) {
          spec.inputs.back().second += "\n" + trim(t);
        }
        break;
      }
      case Section::Preconditions: {
        if (t.empty()) break;
        spec.preconditions.push_back(strip_item_marker(t));
        break;
      }
      case Section::Postconditions: {
        if (t.empty()) break;
        spec.postconditions.push_back(strip_item_marker(t));
        break;
      }
    }
  }

  static const std::pair<Section, const char*> kAll[] = {
      {Section::Summary, "Summary"},
      {Section::Algorithm, "Algorithm"},
      {Section::Input, "Input"},
      {Section::Output, "Output"},
      {Section::Preconditions, "Preconditions"},
      {Section::Postconditions, "Postconditions"},
  };
  for (const auto& [section, label] : kAll) {
    if (!seen.count(section)) {
      warnings.push_back(key + ": section " + label +
                         " is missing; defaulted to empty");
    }
  }
  return spec;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

std::vector<std::string> all_operation_keys(const ModelPackage& m) {
  std::vector<std::string> keys;
  for (const auto& cls : m.classes) {
    for (const auto& op : cls.operations) {
      keys.push_back(cls.name + "." + op.name + "/" +
                     std::to_string(op.params.size()));
    }
  }
  return keys;
}

std::string build_decomposition_prompt(const ModelPackage& m,
                                       const std::string& requirement,
                                       const PromptTemplates* templates) {
  if (trim(requirement).empty()) throw EmptyRequirementError();
  std::string plantuml = emit_plantuml(m);  // throws InvalidModelError
  const PromptTemplates& t =
      templates != nullptr ? *templates : PromptTemplates::defaults();
  return render_template(
      t.decompose, {{"plantuml", plantuml}, {"requirement", requirement}});
}

DecompositionResult parse_decomposition_response(const std::string& response,
                                                 const ModelPackage& m) {
  DecompositionResult result;

  struct RawBlock {
    OperationId id;
    std::vector<std::string> lines;
  };
  std::vector<RawBlock> blocks;
  std::optional<RawBlock> current;
  for (const auto& line : split_lines(response)) {
    if (trim(line).rfind("###", 0) == 0 && trim(line).rfind("####", 0) != 0) {
      if (current) blocks.push_back(std::move(*current));
      current.reset();
      if (auto id = parse_header(trim(line))) {
        current = RawBlock{*id, {}};
      } else {
        result.warnings.push_back("unrecognized header: " + trim(line));
      }
      continue;
    }
    if (current) current->lines.push_back(line);
  }
  if (current) blocks.push_back(std::move(*current));

  std::set<std::string> declared;
  for (const auto& key : all_operation_keys(m)) declared.insert(key);

  for (auto& block : blocks) {
    // Resolve the header against the model (fills a missing arity when the
    // name is unique).
    const ClassDef* cls = m.find_class(block.id.class_name);
    const OperationDef* match = nullptr;
    int matches = 0;
    if (cls != nullptr) {
      for (const auto& op : cls->operations) {
        if (op.name != block.id.op_name) continue;
        if (block.id.arity &&
            op.params.size() != static_cast<std::size_t>(*block.id.arity))
          continue;
        match = &op;
        ++matches;
      }
    }
    if (match == nullptr || matches != 1) {
      result.warnings.push_back("response names unknown or ambiguous "
                                "operation " +
                                block.id.to_string() + "; block ignored");
      continue;
    }
    std::string key = block.id.class_name + "." + match->name + "/" +
                      std::to_string(match->params.size());
    if (result.specs.count(key)) {
      result.warnings.push_back("duplicate block for " + key +
                                "; later block wins");
    }
    MethodSpec spec = parse_spec_body(block.lines, key, result.warnings);
    // Input entries must name declared parameters; extras are dropped.
    std::set<std::string> param_names;
    for (const auto& p : match->params) param_names.insert(p.name);
    std::vector<std::pair<std::string, std::string>> kept;
    for (auto& entry : spec.inputs) {
      if (param_names.count(entry.first)) {
        kept.push_back(std::move(entry));
      } else {
        result.warnings.push_back(key + ": input entry '" + entry.first +
                                  "' names no declared parameter; dropped");
      }
    }
    spec.inputs = std::move(kept);
    if (trim(spec.summary).empty()) {
      spec.summary = "(no summary provided)";
      result.warnings.push_back(key + ": empty summary replaced by marker");
    }
    result.specs[key] = std::move(spec);
  }

  for (const auto& key : all_operation_keys(m)) {
    if (!result.specs.count(key)) result.unmatched.push_back(key);
  }
  return result;
}

ModelPackage decompose(const ModelPackage& m, const std::string& requirement,
                       ChatProvider& llm, const DecomposeOptions& options,
                       std::vector<std::string>* warnings,
                       std::string* prompt_out, std::string* response_out) {
  std::string prompt =
      build_decomposition_prompt(m, requirement, options.templates);
  if (prompt_out != nullptr) *prompt_out = prompt;

  ChatRequest req;
  req.user_text = prompt;
  req.model_name = options.model_name;
  req.temperature = options.temperature;
  req.max_tokens = options.max_tokens;
  req.sample_index = options.sample_index;
  std::string response = llm.complete(req);
  if (response_out != nullptr) *response_out = response;

  DecompositionResult parsed = parse_decomposition_response(response, m);
  ModelPackage annotated = m;
  for (auto& [key, spec] : parsed.specs) {
    auto id = OperationId::parse(key);
    annotated = attach_spec(annotated, *id, spec);
  }
  for (const auto& key : parsed.unmatched) {
    auto id = OperationId::parse(key);
    annotated = attach_spec(annotated, *id, fallback_spec(requirement));
    parsed.warnings.push_back("no specification for " + key +
                              "; fallback annotation applied");
  }
  if (warnings != nullptr) {
    warnings->insert(warnings->end(), parsed.warnings.begin(),
                     parsed.warnings.end());
  }
  return annotated;
}

ModelPackage passthrough_annotation(const ModelPackage& m,
                                    const std::string& requirement) {
  if (trim(requirement).empty()) throw EmptyRequirementError();
  ModelPackage annotated = m;
  for (auto& cls : annotated.classes) {
    for (auto& op : cls.operations) op.spec = fallback_spec(requirement);
  }
  return annotated;
}

}  // namespace iecoregen
