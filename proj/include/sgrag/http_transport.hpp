#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace sgrag {

struct HttpRequest {
  std::string url;  // http(s)://host[:port]/path
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;  // JSON
  double timeout_seconds = 60;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// POST-only JSON transport. Implementations are safe to call concurrently.
/// Connection failures and timeouts throw ProviderError.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse post(const HttpRequest& request) const = 0;
};

/// cpp-httplib backed transport with at most `max_in_flight` concurrent requests.
std::shared_ptr<HttpTransport> make_http_transport(std::size_t max_in_flight = 4);

struct ParsedUrl {
  std::string scheme_host_port;  // "https://api.example.com:443"
  std::string path;              // "/v1/chat/completions"
};

/// Throws ConfigError when the URL has no scheme or host.
ParsedUrl parse_url(const std::string& url);

/// Value of the environment variable, empty when unset.
std::string secret_from_env(const std::string& variable);

}  // namespace sgrag
