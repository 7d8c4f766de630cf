#pragma once

#include <span>
#include <string>
#include <vector>

#include "sgrag/chunking.hpp"
#include "sgrag/embedding.hpp"

namespace sgrag {

inline constexpr std::size_t kDefaultTopK = 4;

struct ProviderFingerprint {
  std::string name;
  std::size_t dimension = 0;
  bool operator==(const ProviderFingerprint&) const = default;
};

ProviderFingerprint fingerprint_of(const EmbeddingProvider& provider);

struct EmbeddedChunk {
  Chunk chunk;
  EmbeddingVector vector;
  std::size_t ordinal = 0;
};

struct ScoredChunk {
  Chunk chunk;
  double score = 0;
  std::size_t ordinal = 0;
};

/// In-memory vector store for the chunks of a single image. Nothing is ever
/// written to disk; the index dies with the owning session. Single writer
/// while building, then safe for concurrent top_k.
class EphemeralIndex {
 public:
  EphemeralIndex(std::string image_id, ProviderFingerprint fingerprint);

  const std::string& image_id() const { return image_id_; }
  const ProviderFingerprint& fingerprint() const { return fingerprint_; }
  const std::vector<EmbeddedChunk>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Embeds and appends with the next ordinal. On any error the index is
  /// left unchanged.
  void insert(const Chunk& chunk, const EmbeddingProvider& provider);
  /// All-or-nothing batch insert: one provider call for every chunk.
  void insert_all(std::span<const Chunk> chunks, const EmbeddingProvider& provider);
  /// Appends a pre-computed vector.
  void insert(const Chunk& chunk, EmbeddingVector vector);

  /// Highest cosine first, ties to the lower ordinal; min(k, size()) results.
  std::vector<ScoredChunk> top_k(const EmbeddingVector& query, std::size_t k = kDefaultTopK) const;

 private:
  void check_chunk(const Chunk& chunk) const;
  void check_provider(const EmbeddingProvider& provider) const;

  std::string image_id_;
  ProviderFingerprint fingerprint_;
  std::vector<EmbeddedChunk> entries_;
};

}  // namespace sgrag
