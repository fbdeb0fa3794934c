#pragma once

#include <stdexcept>
#include <string>

namespace iecoregen {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct InvalidModelError : Error {
  using Error::Error;
};

struct UnknownClassError : Error {
  using Error::Error;
};

struct UnknownOperationError : Error {
  using Error::Error;
};

struct EmptyRequirementError : Error {
  EmptyRequirementError() : Error("requirement text is empty") {}
};

struct UnannotatedOperationError : Error {
  using Error::Error;
};

/// Transport-level provider failure (connection refused, HTTP error status
/// after all retries, malformed response body).
struct TransportError : Error {
  explicit TransportError(const std::string& what, int status = 0)
      : Error(what), status(status) {}
  int status;
};

struct TimeoutError : Error {
  using Error::Error;
};

/// Replay-mode lookup miss; replay never falls through to the network.
struct ReplayMissError : Error {
  explicit ReplayMissError(const std::string& digest)
      : Error("no transcript record for prompt digest " + digest),
        digest(digest) {}
  std::string digest;
};

struct NoCodeFoundError : Error {
  NoCodeFoundError() : Error("response contains no code block") {}
};

struct ToolNotFoundError : Error {
  using Error::Error;
};

struct ToolTimeoutError : Error {
  explicit ToolTimeoutError(int seconds)
      : Error("external tool exceeded timeout of " + std::to_string(seconds) +
              "s"),
        seconds(seconds) {}
  int seconds;
};

/// The external tool failed but its output matched no diagnostic pattern;
/// the raw output is preserved for the logs.
struct PatternMismatchError : Error {
  explicit PatternMismatchError(std::string raw)
      : Error("tool failed but diagnostic pattern matched nothing"),
        raw_output(std::move(raw)) {}
  std::string raw_output;
};

struct IncompleteSamplesError : Error {
  explicit IncompleteSamplesError(const std::string& problem_id)
      : Error("incomplete sample set for problem " + problem_id),
        problem_id(problem_id) {}
  std::string problem_id;
};

}  // namespace iecoregen
