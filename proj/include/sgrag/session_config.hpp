#pragma once

#include <cstdint>
#include <string>

#include "sgrag/cassette.hpp"
#include "sgrag/completion.hpp"
#include "sgrag/evaluation.hpp"
#include "sgrag/remote_embedder.hpp"
#include "sgrag/retrieval_index.hpp"

namespace sgrag {

enum class EmbedderKind { hash, remote };

struct SessionConfig {
  EmbedderKind embedder = EmbedderKind::hash;
  std::size_t hash_dim = 256;
  std::uint64_t seed = 0;  // hash embedder seed
  RemoteEmbedderConfig remote;
  std::string embed_cassette;  // record/replay file for the remote embedder

  CompletionConfig completion;
  BackendMode mode = BackendMode::live;
  std::string cassette;  // record/replay file for completions

  std::size_t k = kDefaultTopK;
  std::size_t workers = 1;
  std::size_t max_in_flight = 4;
  bool cache_per_image = false;  // reuse one index per image across eval questions
  std::string synonyms;          // optional label synonym file

  eval::EvalOptions eval;

  /// Timings carry wall-clock durations; replay output omits them unless asked.
  bool emit_timings = false;

  /// Throws ConfigError when k or workers is zero, a referenced file is
  /// missing, or replay mode lacks a cassette.
  void check() const;
};

/// Applies one "key = value" setting. Throws ConfigError for unknown keys or
/// malformed values.
void apply_setting(SessionConfig& config, const std::string& key, const std::string& value);

/// Reads a key-value config file (docs/config.md). '#' starts a comment.
SessionConfig load_config(const std::string& path, SessionConfig base = {});

}  // namespace sgrag
