#include "iecoregen/gateway.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "iecoregen/errors.hpp"

namespace iecoregen {

namespace {

using nlohmann::json;

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(),
                 nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

}  // namespace

std::string prompt_digest(const ChatRequest& req) {
  json canonical = {
      {"model", req.model_name},       {"sampleIndex", req.sample_index},
      {"system", req.system_text},     {"temperature", req.temperature},
      {"user", req.user_text},
  };
  return sha256_hex(canonical.dump());
}

HttpChatProvider::HttpChatProvider(ProviderConfig config,
                                   std::unique_ptr<HttpTransport> transport,
                                   Sleeper sleeper)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      sleeper_(std::move(sleeper)) {
  if (!sleeper_) {
    sleeper_ = [](double seconds) {
      std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
    };
  }
}

std::string HttpChatProvider::complete(const ChatRequest& req) {
  json body;
  body["model"] = req.model_name.empty() ? config_.model_name : req.model_name;
  json messages = json::array();
  if (!req.system_text.empty()) {
    messages.push_back({{"role", "system"}, {"content", req.system_text}});
  }
  messages.push_back({{"role", "user"}, {"content", req.user_text}});
  body["messages"] = std::move(messages);
  body["temperature"] = req.temperature;
  body["max_tokens"] = req.max_tokens;

  std::vector<std::pair<std::string, std::string>> headers;
  if (const char* key = std::getenv(config_.api_key_env.c_str())) {
    headers.emplace_back("Authorization", std::string("Bearer ") + key);
  }

  std::string payload = body.dump();
  std::string last_error = "no attempt made";
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      double delay = config_.backoff_base_seconds *
                     static_cast<double>(1 << (attempt - 1));
      ++backoff_sleeps_;
      sleeper_(delay);
    }
    try {
      HttpResponse response =
          transport_->post_json("/chat/completions", payload, headers);
      if (response.status == 200) {
        json parsed = json::parse(response.body, nullptr, false);
        if (parsed.is_discarded() || !parsed.contains("choices") ||
            parsed["choices"].empty()) {
          throw TransportError("malformed chat response body");
        }
        const auto& message = parsed["choices"][0]["message"];
        if (!message.contains("content") || !message["content"].is_string()) {
          throw TransportError("chat response has no message content");
        }
        return message["content"].get<std::string>();
      }
      if (response.status == 429 || response.status >= 500) {
        last_error = "HTTP " + std::to_string(response.status);
        continue;  // transient
      }
      throw TransportError("chat request failed with HTTP " +
                               std::to_string(response.status),
                           response.status);
    } catch (const TimeoutError& e) {
      last_error = e.what();
    } catch (const TransportError& e) {
      if (e.status != 0 || attempt == config_.max_retries) throw;
      last_error = e.what();
    }
  }
  throw TransportError("chat request failed after " +
                       std::to_string(config_.max_retries) + " retries: " +
                       last_error);
}

ReplayProvider::ReplayProvider(const std::filesystem::path& transcript_file) {
  for (auto& record : load_transcript(transcript_file)) {
    responses_[record.digest] = std::move(record.response);
  }
}

std::string ReplayProvider::complete(const ChatRequest& req) {
  std::string digest = prompt_digest(req);
  auto it = responses_.find(digest);
  if (it == responses_.end()) throw ReplayMissError(digest);
  return it->second;
}

RecordingProvider::RecordingProvider(std::shared_ptr<ChatProvider> inner,
                                     std::filesystem::path transcript_file,
                                     bool deterministic_meta)
    : inner_(std::move(inner)),
      file_(std::move(transcript_file)),
      deterministic_meta_(deterministic_meta) {}

std::string RecordingProvider::complete(const ChatRequest& req) {
  std::string response = inner_->complete(req);
  TranscriptRecord record;
  record.digest = prompt_digest(req);
  record.model_name = req.model_name;
  record.sample_index = req.sample_index;
  record.temperature = req.temperature;
  record.response = response;
  record.meta.prompt_chars =
      static_cast<std::int64_t>(req.system_text.size() + req.user_text.size());
  record.meta.response_chars = static_cast<std::int64_t>(response.size());
  if (!deterministic_meta_) {
    record.meta.recorded_at_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
  }
  std::lock_guard<std::mutex> lock(write_mutex_);
  append_transcript(file_, {record});
  return response;
}

std::vector<TranscriptRecord> load_transcript(
    const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open transcript file " + file.string());
  std::vector<TranscriptRecord> records;
  std::string line;
  bool header_seen = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json parsed = json::parse(line, nullptr, false);
    if (parsed.is_discarded()) {
      throw ConfigError("transcript " + file.string() + " line " +
                        std::to_string(line_no) + " is not valid JSON");
    }
    if (!header_seen) {
      header_seen = true;
      if (!parsed.contains("schema") ||
          parsed["schema"].get<std::string>() != kTranscriptSchema) {
        throw ConfigError("transcript " + file.string() +
                          " has an unsupported schema header");
      }
      continue;
    }
    TranscriptRecord r;
    r.digest = parsed.at("digest").get<std::string>();
    r.response = parsed.at("response").get<std::string>();
    r.model_name = parsed.value("model", "");
    r.sample_index = parsed.value("sampleIndex", 0);
    r.temperature = parsed.value("temperature", 0.0);
    if (parsed.contains("meta")) {
      const auto& meta = parsed["meta"];
      r.meta.recorded_at_ms = meta.value("recordedAtMs", std::int64_t{0});
      r.meta.prompt_chars = meta.value("promptChars", std::int64_t{0});
      r.meta.response_chars = meta.value("responseChars", std::int64_t{0});
    }
    records.push_back(std::move(r));
  }
  return records;
}

void append_transcript(const std::filesystem::path& file,
                       const std::vector<TranscriptRecord>& records) {
  bool fresh = !std::filesystem::exists(file) ||
               std::filesystem::file_size(file) == 0;
  if (file.has_parent_path())
    std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::app);
  if (!out) throw ConfigError("cannot write transcript file " + file.string());
  if (fresh) out << json{{"schema", kTranscriptSchema}}.dump() << "\n";
  for (const auto& r : records) {
    json record = {
        {"digest", r.digest},
        {"model", r.model_name},
        {"sampleIndex", r.sample_index},
        {"temperature", r.temperature},
        {"response", r.response},
        {"meta",
         {{"recordedAtMs", r.meta.recorded_at_ms},
          {"promptChars", r.meta.prompt_chars},
          {"responseChars", r.meta.response_chars}}},
    };
    out << record.dump() << "\n";
  }
}

namespace {

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::optional<ExtractedCode> try_extract_code_block(
    const std::string& response, const std::string& expected_tag,
    const std::function<bool(const std::string&)>& parses_as_code) {
  struct Block {
    std::string tag;
    std::string body;
  };
  std::vector<Block> blocks;

  std::istringstream in(response);
  std::string line;
  bool in_block = false;
  Block current;
  while (std::getline(in, line)) {
    std::string t = trimmed(line);
    if (!in_block && t.rfind("```", 0) == 0) {
      in_block = true;
      current.tag = trimmed(t.substr(3));
      current.body.clear();
      continue;
    }
    if (in_block && t == "```") {
      in_block = false;
      blocks.push_back(current);
      continue;
    }
    if (in_block) {
      current.body += line;
      current.body += '\n';
    }
  }

  if (!blocks.empty()) {
    if (!expected_tag.empty()) {
      for (const auto& b : blocks) {
        if (b.tag == expected_tag) return ExtractedCode{b.body, false};
      }
    }
    return ExtractedCode{blocks.front().body, false};
  }
  if (parses_as_code) {
    std::string whole = trimmed(response);
    if (!whole.empty() && parses_as_code(whole)) {
      return ExtractedCode{whole + "\n", true};
    }
  }
  return std::nullopt;
}

ExtractedCode extract_code_block(
    const std::string& response, const std::string& expected_tag,
    const std::function<bool(const std::string&)>& parses_as_code) {
  auto extracted =
      try_extract_code_block(response, expected_tag, parses_as_code);
  if (!extracted) throw NoCodeFoundError();
  return *extracted;
}

std::vector<std::string> extract_all_code_blocks(
    const std::string& response, const std::string& expected_tag) {
  std::vector<std::string> tagged;
  std::vector<std::string> all;
  std::istringstream in(response);
  std::string line;
  bool in_block = false;
  bool tag_matches = false;
  std::string body;
  while (std::getline(in, line)) {
    std::string t = trimmed(line);
    if (!in_block && t.rfind("```", 0) == 0) {
      in_block = true;
      tag_matches = !expected_tag.empty() && trimmed(t.substr(3)) == expected_tag;
      body.clear();
      continue;
    }
    if (in_block && t == "```") {
      in_block = false;
      all.push_back(body);
      if (tag_matches) tagged.push_back(body);
      continue;
    }
    if (in_block) {
      body += line;
      body += '\n';
    }
  }
  return tagged.empty() ? all : tagged;
}

}  // namespace iecoregen
