#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace iecoregen {

/// One chat completion request. `sample_index` distinguishes the n samples
/// drawn for the same prompt and is part of the replay digest.
struct ChatRequest {
  std::string system_text;
  std::string user_text;
  std::string model_name;
  double temperature = 0.2;
  int max_tokens = 4096;
  int sample_index = 0;
};

/// Content hash of (system, user, model, temperature, sample index) over a
/// canonical serialization; stable across platforms.
std::string prompt_digest(const ChatRequest& req);

struct TranscriptMeta {
  std::int64_t recorded_at_ms = 0;  // 0 in deterministic fixtures
  std::int64_t prompt_chars = 0;
  std::int64_t response_chars = 0;
};

struct TranscriptRecord {
  std::string digest;
  std::string model_name;
  int sample_index = 0;
  double temperature = 0.0;
  std::string response;
  TranscriptMeta meta;
};

inline constexpr const char* kTranscriptSchema = "iecoregen-transcript/1";

class ChatProvider {
 public:
  virtual ~ChatProvider() = default;
  virtual std::string complete(const ChatRequest& req) = 0;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// Transport seam under the HTTP provider; production code uses the
/// cpp-httplib implementation, tests substitute fakes.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  /// Posts a JSON body; throws TransportError on connection failure and
  /// TimeoutError when the request times out.
  virtual HttpResponse post_json(
      const std::string& path, const std::string& body,
      const std::vector<std::pair<std::string, std::string>>& headers) = 0;
};

/// Transport for `endpoint` of the form http(s)://host[:port][/prefix].
std::unique_ptr<HttpTransport> make_httplib_transport(
    const std::string& endpoint, int timeout_seconds);

struct ProviderConfig {
  std::string endpoint;
  std::string model_name;
  std::string api_key_env = "IECOREGEN_API_KEY";
  int timeout_seconds = 60;
  int max_retries = 3;
  double backoff_base_seconds = 0.5;
};

/// Live provider speaking the standard chat-completions HTTP+JSON protocol.
/// Transient failures (connection errors, timeouts, HTTP 429/5xx) are
/// retried up to max_retries with exponential backoff.
class HttpChatProvider final : public ChatProvider {
 public:
  using Sleeper = std::function<void(double seconds)>;

  HttpChatProvider(ProviderConfig config,
                   std::unique_ptr<HttpTransport> transport,
                   Sleeper sleeper = {});

  std::string complete(const ChatRequest& req) override;

  /// Number of backoff sleeps performed so far (observable in logs/tests).
  int backoff_sleeps() const { return backoff_sleeps_; }

 private:
  ProviderConfig config_;
  std::unique_ptr<HttpTransport> transport_;
  Sleeper sleeper_;
  int backoff_sleeps_ = 0;
};

/// Deterministic replay from a transcript file. Performs no network
/// operations whatsoever; an unseen prompt raises ReplayMissError.
class ReplayProvider final : public ChatProvider {
 public:
  explicit ReplayProvider(const std::filesystem::path& transcript_file);

  std::string complete(const ChatRequest& req) override;
  std::size_t record_count() const { return responses_.size(); }

 private:
  std::unordered_map<std::string, std::string> responses_;
};

/// Decorator that appends one transcript record per completion. Appends are
/// serialized by an exclusive writer; the header line is written when the
/// file is created.
class RecordingProvider final : public ChatProvider {
 public:
  RecordingProvider(std::shared_ptr<ChatProvider> inner,
                    std::filesystem::path transcript_file,
                    bool deterministic_meta = false);

  std::string complete(const ChatRequest& req) override;

 private:
  std::shared_ptr<ChatProvider> inner_;
  std::filesystem::path file_;
  bool deterministic_meta_;
  std::mutex write_mutex_;
};

/// In-memory provider driven by a handler; used by tests and by the
/// fixture generator.
class ScriptedProvider final : public ChatProvider {
 public:
  using Handler = std::function<std::string(const ChatRequest&)>;
  explicit ScriptedProvider(Handler handler)
      : handler_(std::move(handler)) {}

  std::string complete(const ChatRequest& req) override {
    return handler_(req);
  }

 private:
  Handler handler_;
};

/// Parses a transcript file (schema header plus one JSON record per line).
std::vector<TranscriptRecord> load_transcript(
    const std::filesystem::path& file);

/// Appends records to a transcript file, writing the schema header first
/// when the file does not exist yet.
void append_transcript(const std::filesystem::path& file,
                       const std::vector<TranscriptRecord>& records);

struct ExtractedCode {
  std::string text;
  bool unfenced = false;
};

/// Picks the code out of a chat response: the first fenced block whose tag
/// matches `expected_tag` when given (falling back to the first block),
/// else the first fenced block; when no fence exists, the whole text is
/// accepted if `parses_as_code` says it parses.
std::optional<ExtractedCode> try_extract_code_block(
    const std::string& response, const std::string& expected_tag = "",
    const std::function<bool(const std::string&)>& parses_as_code = {});

/// Same, but raises NoCodeFoundError instead of returning empty.
ExtractedCode extract_code_block(
    const std::string& response, const std::string& expected_tag = "",
    const std::function<bool(const std::string&)>& parses_as_code = {});

/// Every fenced block with the expected tag, in response order; when none
/// carries the tag (or no tag is requested), every fenced block.
std::vector<std::string> extract_all_code_blocks(
    const std::string& response, const std::string& expected_tag = "");

}  // namespace iecoregen
