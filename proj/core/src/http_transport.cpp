// cpp-httplib-backed transport. Kept in its own translation unit so the
// heavyweight header is compiled once.
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "iecoregen/errors.hpp"
#include "iecoregen/gateway.hpp"

namespace iecoregen {

namespace {

class HttplibTransport final : public HttpTransport {
 public:
  HttplibTransport(std::string origin, std::string base_path,
                   int timeout_seconds)
      : client_(origin.c_str()), base_path_(std::move(base_path)) {
    client_.set_connection_timeout(timeout_seconds, 0);
    client_.set_read_timeout(timeout_seconds, 0);
    client_.set_write_timeout(timeout_seconds, 0);
  }

  HttpResponse post_json(
      const std::string& path, const std::string& body,
      const std::vector<std::pair<std::string, std::string>>& headers)
      override {
    httplib::Headers hs;
    for (const auto& [k, v] : headers) hs.emplace(k, v);
    auto result =
        client_.Post((base_path_ + path).c_str(), hs, body, "application/json");
    if (!result) {
      auto err = result.error();
      if (err == httplib::Error::ConnectionTimeout ||
          err == httplib::Error::Read || err == httplib::Error::Write) {
        throw TimeoutError("chat request timed out (" +
                           httplib::to_string(err) + ")");
      }
      throw TransportError("chat transport failed: " +
                           httplib::to_string(err));
    }
    return {result->status, result->body};
  }

 private:
  httplib::Client client_;
  std::string base_path_;
};

}  // namespace

std::unique_ptr<HttpTransport> make_httplib_transport(
    const std::string& endpoint, int timeout_seconds) {
  auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("endpoint must start with http:// or https://: " +
                      endpoint);
  }
  auto path_start = endpoint.find('/', scheme_end + 3);
  std::string origin = path_start == std::string::npos
                           ? endpoint
                           : endpoint.substr(0, path_start);
  std::string base_path =
      path_start == std::string::npos ? "" : endpoint.substr(path_start);
  while (!base_path.empty() && base_path.back() == '/') base_path.pop_back();
  return std::make_unique<HttplibTransport>(origin, base_path,
                                            timeout_seconds);
}

}  // namespace iecoregen
