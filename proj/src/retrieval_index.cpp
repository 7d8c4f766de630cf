#include "sgrag/retrieval_index.hpp"

#include <algorithm>
#include <stdexcept>

#include "sgrag/error.hpp"

namespace sgrag {

ProviderFingerprint fingerprint_of(const EmbeddingProvider& provider) {
  return {provider.name(), provider.dimension()};
}

EphemeralIndex::EphemeralIndex(std::string image_id, ProviderFingerprint fingerprint)
    : image_id_(std::move(image_id)), fingerprint_(std::move(fingerprint)) {
  if (fingerprint_.dimension == 0) throw std::invalid_argument("EphemeralIndex: provider dimension must be positive");
}

void EphemeralIndex::check_chunk(const Chunk& chunk) const {
  if (chunk.source_image != image_id_)
    throw ValidationError("cross-image chunk", chunk.category,
                          "chunk from image '" + chunk.source_image + "' cannot enter the index of '" + image_id_ +
                              "'");
}

void EphemeralIndex::check_provider(const EmbeddingProvider& provider) const {
  if (fingerprint_of(provider) != fingerprint_)
    throw ValidationError("provider mismatch", provider.name(),
                          "index was built for " + fingerprint_.name + "/" + std::to_string(fingerprint_.dimension));
}

void EphemeralIndex::insert(const Chunk& chunk, const EmbeddingProvider& provider) {
  insert_all(std::span<const Chunk>(&chunk, 1), provider);
}

void EphemeralIndex::insert_all(std::span<const Chunk> chunks, const EmbeddingProvider& provider) {
  check_provider(provider);
  std::vector<std::string> texts;
  texts.reserve(chunks.size());
  for (const auto& c : chunks) {
    check_chunk(c);
    texts.push_back(c.text);
  }
  auto vectors = embed_all(texts, provider);
  entries_.reserve(entries_.size() + chunks.size());
  for (std::size_t i = 0; i < chunks.size(); ++i)
    entries_.push_back({chunks[i], std::move(vectors[i]), entries_.size()});
}

void EphemeralIndex::insert(const Chunk& chunk, EmbeddingVector vector) {
  check_chunk(chunk);
  if (vector.dimension() != fingerprint_.dimension)
    throw std::invalid_argument("EphemeralIndex: vector dimension " + std::to_string(vector.dimension()) +
                                " != index dimension " + std::to_string(fingerprint_.dimension));
  entries_.push_back({chunk, std::move(vector), entries_.size()});
}

std::vector<ScoredChunk> EphemeralIndex::top_k(const EmbeddingVector& query, std::size_t k) const {
  if (query.dimension() != fingerprint_.dimension)
    throw std::invalid_argument("top_k: query dimension " + std::to_string(query.dimension()) +
                                " != index dimension " + std::to_string(fingerprint_.dimension));
  std::vector<ScoredChunk> scored;
  scored.reserve(entries_.size());
  for (const auto& e : entries_) scored.push_back({e.chunk, cosine(query, e.vector), e.ordinal});

  const auto n = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end(),
                    [](const ScoredChunk& a, const ScoredChunk& b) {
                      if (a.score != b.score) return a.score > b.score;
                      return a.ordinal < b.ordinal;
                    });
  scored.resize(n);
  return scored;
}

}  // namespace sgrag
