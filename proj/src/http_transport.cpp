#include "sgrag/http_transport.hpp"

#include <httplib.h>

#include <cmath>
#include <cstdlib>
#include <semaphore>

#include "sgrag/cassette.hpp"
#include "sgrag/error.hpp"
#include "sgrag/text.hpp"

namespace sgrag {

namespace {

class HttplibTransport final : public HttpTransport {
 public:
  explicit HttplibTransport(std::size_t max_in_flight)
      : slots_(static_cast<std::ptrdiff_t>(std::max<std::size_t>(1, max_in_flight))) {}

  HttpResponse post(const HttpRequest& request) const override {
    const auto url = parse_url(request.url);
    httplib::Client client(url.scheme_host_port);
    const auto seconds = static_cast<time_t>(request.timeout_seconds);
    const auto micros = static_cast<time_t>((request.timeout_seconds - std::floor(request.timeout_seconds)) * 1e6);
    client.set_connection_timeout(seconds, micros);
    client.set_read_timeout(seconds, micros);
    client.set_write_timeout(seconds, micros);

    httplib::Headers headers;
    for (const auto& [k, v] : request.headers) headers.emplace(k, v);

    slots_.acquire();
    auto result = client.Post(url.path, headers, request.body, "application/json");
    slots_.release();

    if (!result) {
      const auto err = result.error();
      if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read)
        throw ProviderError("timeout or read failure talking to " + url.scheme_host_port + ": " +
                            httplib::to_string(err));
      throw ProviderError("transport failure talking to " + url.scheme_host_port + ": " + httplib::to_string(err));
    }
    return {result->status, result->body};
  }

 private:
  mutable std::counting_semaphore<> slots_;
};

}  // namespace

std::shared_ptr<HttpTransport> make_http_transport(std::size_t max_in_flight) {
  return std::make_shared<HttplibTransport>(max_in_flight);
}

ParsedUrl parse_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos || scheme_end == 0) throw ConfigError("URL has no scheme: '" + url + "'");
  const auto path_start = url.find('/', scheme_end + 3);
  ParsedUrl out;
  out.scheme_host_port = url.substr(0, path_start);
  out.path = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (out.scheme_host_port.size() <= scheme_end + 3) throw ConfigError("URL has no host: '" + url + "'");
  return out;
}

std::string secret_from_env(const std::string& variable) {
  if (variable.empty()) return {};
  const char* value = std::getenv(variable.c_str());
  return value ? std::string(value) : std::string();
}

const char* to_string(BackendMode mode) {
  switch (mode) {
    case BackendMode::live: return "live";
    case BackendMode::record: return "record";
    case BackendMode::replay: return "replay";
  }
  return "unknown";
}

BackendMode parse_backend_mode(const std::string& text) {
  if (text == "live") return BackendMode::live;
  if (text == "record") return BackendMode::record;
  if (text == "replay") return BackendMode::replay;
  throw ConfigError("unknown mode '" + text + "' (expected live, record or replay)");
}

std::shared_ptr<Cassette> Cassette::open(const std::string& path, bool allow_missing) {
  auto cassette = std::make_shared<Cassette>();
  cassette->path_ = path;
  std::string contents;
  try {
    contents = read_file(path);
  } catch (const IoError&) {
    if (!allow_missing) throw;
    return cassette;
  }
  std::size_t line_no = 0, start = 0;
  while (start < contents.size()) {
    auto end = contents.find('\n', start);
    if (end == std::string::npos) end = contents.size();
    const std::string line = contents.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json entry;
    try {
      entry = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError("malformed cassette", path + ":" + std::to_string(line_no), e.what());
    }
    if (!entry.is_object() || !entry.contains("digest") || !entry["digest"].is_string())
      throw ValidationError("malformed cassette", path + ":" + std::to_string(line_no), "entry needs a string digest");
    auto digest = entry["digest"].get<std::string>();
    cassette->entries_[std::move(digest)] = std::move(entry);
  }
  return cassette;
}

std::optional<nlohmann::json> Cassette::find(const std::string& digest) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(digest);
  if (it == entries_.end()) return std::nullopt;
  return std::optional<nlohmann::json>(std::in_place, it->second);
}

void Cassette::append(const std::string& digest, const nlohmann::json& payload) {
  nlohmann::json entry = payload;
  entry["digest"] = digest;
  std::lock_guard lock(mutex_);
  if (auto it = entries_.find(digest); it != entries_.end() && it->second == entry) return;
  entries_[digest] = entry;
  if (path_.empty()) return;
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot append to cassette " + path_);
  out << entry.dump() << '\n';
}

std::size_t Cassette::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

}  // namespace sgrag
