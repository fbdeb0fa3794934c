#include "iecoregen/gateway.hpp"

#include <set>

#include "iecoregen/errors.hpp"
#include "test_util.hpp"

using namespace iecoregen;

namespace {

ChatRequest request(const std::string& user, int sample = 0) {
  ChatRequest req;
  req.system_text = "system";
  req.user_text = user;
  req.model_name = "test-model";
  req.temperature = 0.8;
  req.sample_index = sample;
  return req;
}

/// Transport that replays a scripted sequence of responses / failures.
class FakeTransport final : public HttpTransport {
 public:
  struct Step {
    int status = 200;
    std::string body;
    bool connection_error = false;
    bool timeout = false;
  };

  explicit FakeTransport(std::vector<Step> steps) : steps_(std::move(steps)) {}

  HttpResponse post_json(
      const std::string& path, const std::string& body,
      const std::vector<std::pair<std::string, std::string>>& headers)
      override {
    last_path = path;
    last_body = body;
    last_headers = headers;
    REQUIRE(calls < steps_.size());
    const Step& step = steps_[calls++];
    if (step.connection_error) throw TransportError("connection refused");
    if (step.timeout) throw TimeoutError("read timeout");
    return {step.status, step.body};
  }

  std::size_t calls = 0;
  std::string last_path;
  std::string last_body;
  std::vector<std::pair<std::string, std::string>> last_headers;

 private:
  std::vector<Step> steps_;
};

const char* kOkBody =
    R"({"choices":[{"message":{"role":"assistant","content":"hello"}}]})";

}  // namespace

TEST_CASE("prompt digests are canonical and sample-aware") {
  ChatRequest a = request("same prompt", 0);
  ChatRequest b = request("same prompt", 0);
  CHECK(prompt_digest(a) == prompt_digest(b));
  CHECK(prompt_digest(a).size() == 64);

  ChatRequest c = request("same prompt", 1);
  CHECK(prompt_digest(a) != prompt_digest(c));

  ChatRequest d = request("other prompt", 0);
  CHECK(prompt_digest(a) != prompt_digest(d));

  ChatRequest e = request("same prompt", 0);
  e.temperature = 0.2;
  CHECK(prompt_digest(a) != prompt_digest(e));

  SUBCASE("no collisions across a varied corpus") {
    std::set<std::string> digests;
    for (int i = 0; i < 200; ++i) {
      ChatRequest r = request("prompt body " + std::to_string(i % 50),
                              i / 50);
      r.temperature = 0.2 + 0.1 * (i % 3);
      CHECK(digests.insert(prompt_digest(r)).second);
    }
  }

  SUBCASE("the shipped transcripts hold no digest collisions") {
    auto records = load_transcript(testutil::source_dir() / "bench" /
                                   "transcripts.jsonl");
    REQUIRE(!records.empty());
    std::set<std::string> digests;
    for (const auto& r : records) {
      CHECK_MESSAGE(digests.insert(r.digest).second,
                    "duplicate digest ", r.digest);
    }
  }
}

TEST_CASE("transcripts append, load and replay") {
  testutil::TempDir tmp;
  auto file = tmp.path / "transcript.jsonl";

  auto scripted = std::make_shared<ScriptedProvider>(
      [](const ChatRequest& req) { return "echo: " + req.user_text; });
  RecordingProvider recorder(scripted, file, /*deterministic_meta=*/true);

  CHECK(recorder.complete(request("one")) == "echo: one");
  CHECK(recorder.complete(request("two", 3)) == "echo: two");

  SUBCASE("file carries the schema header and both records") {
    std::string text = testutil::read_file(file);
    CHECK(text.find("iecoregen-transcript/1") != std::string::npos);
    auto records = load_transcript(file);
    REQUIRE(records.size() == 2);
    CHECK(records[0].response == "echo: one");
    CHECK(records[1].sample_index == 3);
    CHECK(records[0].meta.recorded_at_ms == 0);
    CHECK(records[0].meta.prompt_chars > 0);
  }

  SUBCASE("replay returns the stored text verbatim") {
    ReplayProvider replay(file);
    CHECK(replay.record_count() == 2);
    CHECK(replay.complete(request("one")) == "echo: one");
    CHECK(replay.complete(request("two", 3)) == "echo: two");
  }

  SUBCASE("replay misses raise the digest") {
    ReplayProvider replay(file);
    ChatRequest unseen = request("never recorded");
    try {
      replay.complete(unseen);
      FAIL("expected ReplayMissError");
    } catch (const ReplayMissError& e) {
      CHECK(e.digest == prompt_digest(unseen));
    }
  }

  SUBCASE("recording then replaying is repeatable end to end") {
    ReplayProvider replay(file);
    RecordingProvider rerecorder(
        std::make_shared<ReplayProvider>(file),
        tmp.path / "second.jsonl", true);
    CHECK(rerecorder.complete(request("one")) == "echo: one");
    CHECK(testutil::read_file(tmp.path / "second.jsonl") !=
          std::string());
  }

  SUBCASE("unsupported schema header is rejected") {
    auto bad = tmp.path / "bad.jsonl";
    testutil::write_file(bad, "{\"schema\":\"something-else/9\"}\n");
    CHECK_THROWS_AS(ReplayProvider{bad}, ConfigError);
  }
}

TEST_CASE("http provider retries transient failures with backoff") {
  ProviderConfig config;
  config.endpoint = "http://example.invalid/v1";
  config.model_name = "test-model";
  config.max_retries = 3;
  config.backoff_base_seconds = 0.5;

  SUBCASE("two 429s then success") {
    auto transport = std::make_unique<FakeTransport>(
        std::vector<FakeTransport::Step>{{429, "slow down"},
                                         {429, "slow down"},
                                         {200, kOkBody}});
    FakeTransport* raw = transport.get();
    std::vector<double> sleeps;
    HttpChatProvider provider(config, std::move(transport),
                              [&](double s) { sleeps.push_back(s); });
    CHECK(provider.complete(request("hi")) == "hello");
    CHECK(raw->calls == 3);
    CHECK(provider.backoff_sleeps() == 2);
    REQUIRE(sleeps.size() == 2);
    CHECK(sleeps[0] == doctest::Approx(0.5));
    CHECK(sleeps[1] == doctest::Approx(1.0));
  }

  SUBCASE("connection errors and timeouts are retried") {
    auto transport = std::make_unique<FakeTransport>(
        std::vector<FakeTransport::Step>{{0, "", true, false},
                                         {0, "", false, true},
                                         {200, kOkBody}});
    HttpChatProvider provider(config, std::move(transport),
                              [](double) {});
    CHECK(provider.complete(request("hi")) == "hello");
  }

  SUBCASE("a hard 4xx fails immediately") {
    auto transport = std::make_unique<FakeTransport>(
        std::vector<FakeTransport::Step>{{404, "nope"}});
    FakeTransport* raw = transport.get();
    HttpChatProvider provider(config, std::move(transport), [](double) {});
    CHECK_THROWS_AS(provider.complete(request("hi")), TransportError);
    CHECK(raw->calls == 1);
  }

  SUBCASE("retries exhaust into a transport error") {
    auto transport = std::make_unique<FakeTransport>(
        std::vector<FakeTransport::Step>{
            {429, ""}, {429, ""}, {429, ""}, {429, ""}});
    HttpChatProvider provider(config, std::move(transport), [](double) {});
    CHECK_THROWS_AS(provider.complete(request("hi")), TransportError);
  }

  SUBCASE("request body follows the chat-completions schema") {
    auto transport = std::make_unique<FakeTransport>(
        std::vector<FakeTransport::Step>{{200, kOkBody}});
    FakeTransport* raw = transport.get();
    HttpChatProvider provider(config, std::move(transport), [](double) {});
    provider.complete(request("payload"));
    CHECK(raw->last_path == "/chat/completions");
    CHECK(raw->last_body.find("\"messages\"") != std::string::npos);
    CHECK(raw->last_body.find("payload") != std::string::npos);
    CHECK(raw->last_body.find("\"temperature\"") != std::string::npos);
  }
}

TEST_CASE("endpoint parsing validates the scheme") {
  CHECK_THROWS_AS(make_httplib_transport("localhost:8080", 5), ConfigError);
  CHECK(make_httplib_transport("http://localhost:8080/v1", 5) != nullptr);
}

TEST_CASE("code block extraction follows the tag rules") {
  SUBCASE("single fenced block") {
    auto code = try_extract_code_block("before\n```\nbody();\n```\nafter\n");
    REQUIRE(code.has_value());
    CHECK(code->text == "body();\n");
    CHECK(!code->unfenced);
  }
  SUBCASE("tagged block wins when requested") {
    std::string response =
        "```python\nwrong\n```\nmid\n```minioo\nright();\n```\n";
    auto code = try_extract_code_block(response, "minioo");
    REQUIRE(code.has_value());
    CHECK(code->text == "right();\n");
    auto first = try_extract_code_block(response);
    REQUIRE(first.has_value());
    CHECK(first->text == "wrong\n");
  }
  SUBCASE("tag miss falls back to the first block") {
    auto code = try_extract_code_block("```python\nonly\n```\n", "minioo");
    REQUIRE(code.has_value());
    CHECK(code->text == "only\n");
  }
  SUBCASE("prose only yields nothing") {
    CHECK(!try_extract_code_block("just words, no code").has_value());
    CHECK_THROWS_AS(extract_code_block("just words"), NoCodeFoundError);
  }
  SUBCASE("unfenced code is accepted when it parses") {
    auto yes = try_extract_code_block(
        "class A { }", "", [](const std::string&) { return true; });
    REQUIRE(yes.has_value());
    CHECK(yes->unfenced);
    auto no = try_extract_code_block(
        "class A { }", "", [](const std::string&) { return false; });
    CHECK(!no.has_value());
  }
  SUBCASE("all blocks come back in order") {
    std::string response =
        "```minioo\none\n```\n```\nskip\n```\n```minioo\ntwo\n```\n";
    auto blocks = extract_all_code_blocks(response, "minioo");
    REQUIRE(blocks.size() == 2);
    CHECK(blocks[0] == "one\n");
    CHECK(blocks[1] == "two\n");
    auto untagged = extract_all_code_blocks(response);
    CHECK(untagged.size() == 3);
  }
}
