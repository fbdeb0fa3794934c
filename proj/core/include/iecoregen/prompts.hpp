#pragma once

#include <map>
#include <string>

namespace iecoregen {

/// Text templates for every prompt the pipeline sends. Placeholders use
/// {{name}} syntax; individual templates can be replaced from files named
/// in the run configuration.
struct PromptTemplates {
  std::string decompose;     // {{plantuml}}, {{requirement}}
  std::string completion;    // {{code}}, {{context_section}}, {{targets}}
  std::string fix;           // {{code}}, {{diagnostics}}, {{context_section}}
  std::string baseline;      // {{requirement}}, {{diagram_section}}
  std::string baseline_fix;  // {{code}}, {{diagnostics}}
  std::string testgen;       // {{code}}, {{cases}}

  static const PromptTemplates& defaults();
};

/// Replaces every {{key}} with vars.at(key); unknown placeholders are left
/// in place.
std::string render_template(const std::string& tmpl,
                            const std::map<std::string, std::string>& vars);

}  // namespace iecoregen
