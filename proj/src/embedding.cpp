#include "sgrag/embedding.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "sgrag/error.hpp"

namespace sgrag {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

bool is_separator(unsigned char c) { return c < 0x80 && (std::isspace(c) || std::ispunct(c) || std::iscntrl(c)); }

void add_feature(std::vector<double>& acc, std::string_view feature, std::uint64_t seed) {
  const std::uint64_t h = feature_hash(feature, seed);
  const std::size_t coordinate = static_cast<std::size_t>(h & 0xffffffffULL) % acc.size();
  acc[coordinate] += (h >> 63) ? -1.0 : 1.0;
}

}  // namespace

EmbeddingVector EmbeddingVector::normalize(std::vector<double> raw) {
  if (raw.empty()) throw ValidationError("empty embedding", "", "embedding has no coordinates");
  double sum = 0;
  for (double x : raw) {
    if (!std::isfinite(x)) throw ValidationError("non-finite embedding", "", "embedding has non-finite entries");
    sum += x * x;
  }
  if (sum == 0) throw ValidationError("zero embedding", "", "cannot normalize an all-zero vector");
  const double n = std::sqrt(sum);
  for (double& x : raw) x /= n;
  return EmbeddingVector(std::move(raw));
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("cosine: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dimension() != b.dimension())
    throw std::invalid_argument("cosine: dimension mismatch (" + std::to_string(a.dimension()) + " vs " +
                                std::to_string(b.dimension()) + ")");
  // Both are unit vectors, so the dot product is the cosine.
  double dot = 0;
  for (std::size_t i = 0; i < a.dimension(); ++i) dot += a.values()[i] * b.values()[i];
  return std::clamp(dot, -1.0, 1.0);
}

EmbeddingVector embed(const std::string& text, const EmbeddingProvider& provider) {
  return std::move(embed_all(std::span<const std::string>(&text, 1), provider).front());
}

std::vector<EmbeddingVector> embed_all(std::span<const std::string> texts, const EmbeddingProvider& provider) {
  for (const auto& t : texts)
    if (t.empty()) throw ValidationError("empty text", "", "cannot embed empty text");
  if (texts.empty()) return {};
  auto raw = provider.embed_batch(texts);
  if (raw.size() != texts.size())
    throw ProviderError(provider.name() + " returned " + std::to_string(raw.size()) + " vectors for " +
                        std::to_string(texts.size()) + " texts");
  std::vector<EmbeddingVector> out;
  out.reserve(raw.size());
  for (auto& v : raw) {
    if (v.size() != provider.dimension())
      throw ProviderError(provider.name() + " returned dimension " + std::to_string(v.size()) + ", expected " +
                          std::to_string(provider.dimension()));
    try {
      out.push_back(EmbeddingVector::normalize(std::move(v)));
    } catch (const ValidationError& e) {
      throw ProviderError(provider.name() + " returned an unusable vector: " + e.what());
    }
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_separator(c)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::uint64_t feature_hash(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ splitmix64(seed);
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return splitmix64(h);
}

EmbeddingVector hash_embed(std::string_view text, std::size_t dim, std::uint64_t seed) {
  if (dim < 8) throw std::invalid_argument("hash_embed: dim must be >= 8");
  const auto tokens = tokenize(text);
  if (tokens.empty()) throw ValidationError("empty token stream", "", "text has no tokens to embed");

  std::vector<double> acc(dim, 0.0);
  std::string feature;
  for (auto token : tokens) {
    // crude plural folding so "cars" meets "car"
    if (token.size() > 3 && token.back() == 's' && token[token.size() - 2] != 's') token.pop_back();
    feature = "w:" + token;
    add_feature(acc, feature, seed);
    const std::string wrapped = "<" + token + ">";
    for (std::size_t i = 0; i + 3 <= wrapped.size(); ++i) {
      feature = "g:" + wrapped.substr(i, 3);
      add_feature(acc, feature, seed);
    }
  }
  if (std::all_of(acc.begin(), acc.end(), [](double x) { return x == 0.0; }))
    throw ValidationError("empty token stream", "", "hashed features cancelled to a zero vector");
  return EmbeddingVector::normalize(std::move(acc));
}

HashEmbedder::HashEmbedder(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim < 8) throw std::invalid_argument("HashEmbedder: dim must be >= 8");
}

std::string HashEmbedder::name() const { return "hash-" + std::to_string(seed_); }

std::vector<std::vector<double>> HashEmbedder::embed_batch(std::span<const std::string> texts) const {
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(hash_embed(t, dim_, seed_).values());
  return out;
}

}  // namespace sgrag
