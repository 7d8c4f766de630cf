#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sgrag {

/// Unit-L2-norm dense vector. Only constructible through normalize().
class EmbeddingVector {
 public:
  /// Throws ValidationError on empty, all-zero, or non-finite input.
  static EmbeddingVector normalize(std::vector<double> raw);

  std::size_t dimension() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  std::span<const double> span() const { return values_; }

  bool operator==(const EmbeddingVector&) const = default;

 private:
  explicit EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {}
  std::vector<double> values_;
};

/// dot(a,b) / (|a| |b|), clamped to [-1, 1]. Throws std::invalid_argument on
/// dimension mismatch.
double cosine(std::span<const double> a, std::span<const double> b);
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

/// Source of raw text embeddings. Implementations must be safe to call
/// concurrently.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string name() const = 0;
  virtual std::size_t dimension() const = 0;
  /// One raw (not necessarily normalized) vector per input text.
  virtual std::vector<std::vector<double>> embed_batch(std::span<const std::string> texts) const = 0;
};

/// Embeds and normalizes one text. Throws ValidationError for empty text and
/// ProviderError when the provider answers with the wrong shape.
EmbeddingVector embed(const std::string& text, const EmbeddingProvider& provider);
std::vector<EmbeddingVector> embed_all(std::span<const std::string> texts, const EmbeddingProvider& provider);

/// Lowercased tokens split on ASCII whitespace and punctuation. Non-ASCII
/// bytes are kept inside tokens.
std::vector<std::string> tokenize(std::string_view text);

/// Signed feature hashing: every token (a trailing plural "s" dropped), and
/// every character trigram of the token wrapped as "<token>", is hashed with `seed` to one coordinate and a
/// sign; contributions accumulate and the sum is L2-normalized. Token order
/// does not matter. Requires dim >= 8; throws ValidationError when the text
/// has no tokens.
EmbeddingVector hash_embed(std::string_view text, std::size_t dim, std::uint64_t seed);

/// Seeded 64-bit hash used by hash_embed (FNV-1a with a splitmix64 finish).
std::uint64_t feature_hash(std::string_view bytes, std::uint64_t seed);

/// Offline deterministic provider backed by hash_embed.
class HashEmbedder final : public EmbeddingProvider {
 public:
  HashEmbedder(std::size_t dim, std::uint64_t seed);
  std::string name() const override;
  std::size_t dimension() const override { return dim_; }
  std::vector<std::vector<double>> embed_batch(std::span<const std::string> texts) const override;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

}  // namespace sgrag
