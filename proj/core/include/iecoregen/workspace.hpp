#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "iecoregen/gateway.hpp"

namespace iecoregen {

/// Artifact sink for one sample run. Everything the pipeline produces —
/// prompts, raw responses, units, diagnostics, outcomes — lands under the
/// sample directory. A default-constructed workspace discards writes.
class SampleWorkspace {
 public:
  SampleWorkspace() = default;
  explicit SampleWorkspace(std::filesystem::path root);

  bool enabled() const { return enabled_; }
  const std::filesystem::path& root() const { return root_; }

  void write_text(const std::string& relative_path,
                  const std::string& text) const;
  std::string read_text(const std::string& relative_path) const;
  bool exists(const std::string& relative_path) const;

  /// Persists one chat exchange as numbered prompt/response files plus a
  /// line in calls.jsonl.
  void log_exchange(const std::string& stage, const std::string& class_id,
                    const std::string& prompt, const std::string& response,
                    const std::string& digest);

 private:
  std::filesystem::path root_;
  bool enabled_ = false;
  int sequence_ = 0;
};

/// Provider decorator that mirrors every exchange into the workspace under
/// the stage label the pipeline sets before each call.
class LoggingProvider final : public ChatProvider {
 public:
  LoggingProvider(std::shared_ptr<ChatProvider> inner, SampleWorkspace* ws)
      : inner_(std::move(inner)), workspace_(ws) {}

  void set_stage(std::string stage, std::string class_id = "") {
    stage_ = std::move(stage);
    class_id_ = std::move(class_id);
  }

  std::string complete(const ChatRequest& req) override {
    std::string response = inner_->complete(req);
    if (workspace_ != nullptr && workspace_->enabled()) {
      workspace_->log_exchange(stage_, class_id_, req.user_text, response,
                               prompt_digest(req));
    }
    return response;
  }

 private:
  std::shared_ptr<ChatProvider> inner_;
  SampleWorkspace* workspace_;
  std::string stage_ = "chat";
  std::string class_id_;
};

}  // namespace iecoregen
