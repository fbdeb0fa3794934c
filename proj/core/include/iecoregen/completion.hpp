#pragma once

#include <set>
#include <string>
#include <vector>

#include "iecoregen/backend.hpp"
#include "iecoregen/gateway.hpp"
#include "iecoregen/model.hpp"
#include "iecoregen/prompts.hpp"

namespace iecoregen {

/// Pipeline components that can be switched off for ablation runs.
struct AblationFlags {
  bool no_decompose = false;
  bool no_compress = false;
  bool no_context = false;
  bool no_fix = false;

  bool any() const {
    return no_decompose || no_compress || no_context || no_fix;
  }
};

/// Shared chat knobs for one pipeline run.
struct ChatSettings {
  std::string model_name;
  double temperature = 0.2;
  int max_tokens = 8192;
  int sample_index = 0;
  const PromptTemplates* templates = nullptr;  // null: defaults
};

inline constexpr int kDefaultContextCharBudget = 8000;

/// One per-class completion work item.
struct CompletionTask {
  std::string class_id;
  SourceUnit unit;                // current unit (skeleton at first)
  std::set<MethodKey> targets;    // the class's unimplemented operations
  std::string context_text;      // related-class signatures, possibly empty
};

/// Classes that own at least one operation, in declaration order.
std::vector<std::string> select_targets(const ModelPackage& m);

/// Operation keys of one class, as merge/compress method keys.
std::set<MethodKey> operation_keys(const ModelPackage& m,
                                   const std::string& class_id);

/// Signature context from the model: for every related class a
/// `class <Name>` header followed by its public method signatures as the
/// backend renders them. Deterministic; capped at `char_budget` with an
/// explicit truncation marker.
std::string build_context(const ModelPackage& m, const std::string& class_id,
                          const Backend& backend,
                          int char_budget = kDefaultContextCharBudget);

/// Assembles the completion prompt: instruction block, the (compressed)
/// unit, the context section unless ablated, and the target method list.
std::string build_completion_prompt(const CompletionTask& task,
                                    const AblationFlags& flags,
                                    const Backend& backend,
                                    const PromptTemplates* templates = nullptr);

struct CompletionOutcome {
  SourceUnit unit;  // merged, or the input unit when completion failed
  MergeReport report;
  std::vector<std::string> warnings;
  int llm_calls = 0;
  bool merged = false;
};

/// Runs one class completion: one chat call, code extraction, parse, and
/// structured merge. An unparseable completion triggers exactly one re-ask
/// with the parse diagnostics appended; a second failure leaves the unit
/// unchanged and flags the sample via warnings.
CompletionOutcome complete_class(const CompletionTask& task, ChatProvider& llm,
                                 const Backend& backend,
                                 const ChatSettings& settings,
                                 const AblationFlags& flags);

struct CompleteAllOutcome {
  std::vector<SourceUnit> units;
  std::vector<std::pair<std::string, MergeReport>> reports;  // per class
  std::vector<std::string> warnings;
};

/// Sequential pass over select_targets order. Context derives from the
/// model, not from the evolving code, so the result is independent of any
/// helpers added along the way. A class whose completion fails does not
/// stop the others. `on_class` fires before each class's chat call (used
/// for artifact labeling).
CompleteAllOutcome complete_all(
    const ModelPackage& m, std::vector<SourceUnit> units, ChatProvider& llm,
    const Backend& backend, const AblationFlags& flags,
    const ChatSettings& settings,
    int context_char_budget = kDefaultContextCharBudget,
    const std::function<void(const std::string&)>& on_class = {});

}  // namespace iecoregen
