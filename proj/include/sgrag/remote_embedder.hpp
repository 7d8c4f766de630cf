#pragma once

#include <memory>
#include <string>

#include "sgrag/cassette.hpp"
#include "sgrag/embedding.hpp"
#include "sgrag/http_transport.hpp"

namespace sgrag {

struct RemoteEmbedderConfig {
  std::string url;    // POST endpoint
  std::string model = "text2vec-base-multilingual";
  std::size_t dimension = 768;
  std::string auth_header = "Authorization";
  std::string auth_prefix = "Bearer ";
  std::string secret_env = "SGRAG_EMBED_API_KEY";
  double timeout_seconds = 30;
};

/// HTTP embedding provider.
///
/// Request body:  {"input": [texts...], "model": "<model>"}
/// Response body: {"data": [{"embedding": [...], "index": i}, ...]}
///            or  {"embeddings": [[...], ...]}
///
/// In replay mode vectors come from the cassette keyed by the SHA-256 of the
/// request body and the transport is never touched. Record mode calls the
/// backend and appends {"digest", "vectors"} entries.
class RemoteEmbedder final : public EmbeddingProvider {
 public:
  RemoteEmbedder(RemoteEmbedderConfig config, BackendMode mode, std::shared_ptr<const HttpTransport> transport,
                 std::shared_ptr<Cassette> cassette);

  std::string name() const override { return "remote:" + config_.model; }
  std::size_t dimension() const override { return config_.dimension; }
  std::vector<std::vector<double>> embed_batch(std::span<const std::string> texts) const override;

 private:
  std::vector<std::vector<double>> call_backend(const std::string& body) const;

  RemoteEmbedderConfig config_;
  BackendMode mode_;
  std::shared_ptr<const HttpTransport> transport_;
  std::shared_ptr<Cassette> cassette_;
};

}  // namespace sgrag
