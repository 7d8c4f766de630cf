#include "sgrag/remote_embedder.hpp"

#include <algorithm>

#include "sgrag/digest.hpp"
#include "sgrag/error.hpp"

namespace sgrag {

namespace {

std::vector<std::vector<double>> vectors_from(const nlohmann::json& list) {
  std::vector<std::vector<double>> out;
  for (const auto& v : list) {
    if (!v.is_array()) throw ProviderError("embedding response: vector is not an array");
    std::vector<double> vec;
    vec.reserve(v.size());
    for (const auto& x : v) {
      if (!x.is_number()) throw ProviderError("embedding response: non-numeric entry");
      vec.push_back(x.get<double>());
    }
    out.push_back(std::move(vec));
  }
  return out;
}

std::vector<std::vector<double>> parse_response(const nlohmann::json& body) {
  if (body.contains("error")) throw ProviderError("embedding backend error: " + body["error"].dump());
  if (auto it = body.find("embeddings"); it != body.end() && it->is_array()) return vectors_from(*it);
  if (auto it = body.find("data"); it != body.end() && it->is_array()) {
    std::vector<std::pair<std::size_t, nlohmann::json>> indexed;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& item = (*it)[i];
      if (!item.is_object() || !item.contains("embedding"))
        throw ProviderError("embedding response: data item without 'embedding'");
      const std::size_t index = item.contains("index") ? item["index"].get<std::size_t>() : i;
      indexed.emplace_back(index, item["embedding"]);
    }
    std::stable_sort(indexed.begin(), indexed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    nlohmann::json ordered = nlohmann::json::array();
    for (auto& [_, v] : indexed) ordered.push_back(std::move(v));
    return vectors_from(ordered);
  }
  throw ProviderError("embedding response has neither 'data' nor 'embeddings'");
}

}  // namespace

RemoteEmbedder::RemoteEmbedder(RemoteEmbedderConfig config, BackendMode mode,
                               std::shared_ptr<const HttpTransport> transport, std::shared_ptr<Cassette> cassette)
    : config_(std::move(config)), mode_(mode), transport_(std::move(transport)), cassette_(std::move(cassette)) {
  if (config_.dimension == 0) throw ConfigError("remote embedder: dimension must be positive");
  if (config_.timeout_seconds <= 0) throw ConfigError("remote embedder: timeout must be positive");
  if (mode_ != BackendMode::live && !cassette_) throw ConfigError("remote embedder: record/replay needs a cassette");
  if (mode_ != BackendMode::replay && !transport_) throw ConfigError("remote embedder: live mode needs a transport");
  if (mode_ != BackendMode::replay) parse_url(config_.url);
}

std::vector<std::vector<double>> RemoteEmbedder::embed_batch(std::span<const std::string> texts) const {
  const nlohmann::json request = {{"model", config_.model}, {"input", std::vector<std::string>(texts.begin(), texts.end())}};
  const std::string body = request.dump();
  const std::string digest = sha256_hex(body);

  if (mode_ == BackendMode::replay) {
    auto entry = cassette_->find(digest);
    if (!entry || !entry->contains("vectors")) throw CassetteMiss(digest);
    return vectors_from((*entry)["vectors"]);
  }
  auto vectors = call_backend(body);
  if (mode_ == BackendMode::record) cassette_->append(digest, {{"vectors", vectors}});
  return vectors;
}

std::vector<std::vector<double>> RemoteEmbedder::call_backend(const std::string& body) const {
  HttpRequest request{config_.url, {}, body, config_.timeout_seconds};
  if (auto secret = secret_from_env(config_.secret_env); !secret.empty())
    request.headers.emplace_back(config_.auth_header, config_.auth_prefix + secret);
  const auto response = transport_->post(request);
  if (response.status < 200 || response.status >= 300)
    throw ProviderError("embedding backend returned HTTP " + std::to_string(response.status) + ": " + response.body);
  try {
    return parse_response(nlohmann::json::parse(response.body));
  } catch (const nlohmann::json::exception& e) {
    throw ProviderError(std::string("embedding backend returned malformed JSON: ") + e.what());
  }
}

}  // namespace sgrag
