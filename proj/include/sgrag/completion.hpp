#pragma once

#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "sgrag/cassette.hpp"
#include "sgrag/generation.hpp"
#include "sgrag/http_transport.hpp"

namespace sgrag {

struct CompletionConfig {
  std::string model = "Qwen-2-72B-Instruct";
  double temperature = 0.0;
  int max_tokens = 1024;
  std::string url;  // chat-completions endpoint
  std::string auth_header = "Authorization";
  std::string auth_prefix = "Bearer ";
  std::string secret_env = "SGRAG_LLM_API_KEY";
  double timeout_seconds = 60;

  /// Throws ConfigError on negative temperature, non-positive timeout or max_tokens.
  void check() const;
};

struct AnswerRecord {
  std::string prompt_digest;
  std::string answer;
  double latency_ms = 0;
  std::string backend;
  BackendMode mode = BackendMode::live;
};

/// SHA-256 hex of the exact prompt bytes.
std::string prompt_digest(const PromptText& prompt);

/// Single user message, no system message:
/// {"model", "messages": [{"role": "user", "content": prompt}], "temperature", "max_tokens"}
nlohmann::json chat_request(const PromptText& prompt, const CompletionConfig& config);

/// choices[0].message.content. Backend errors and refusals become
/// ProviderError carrying the backend's text verbatim.
std::string parse_chat_response(const std::string& body);

/// Sends prompts to a chat-completion backend, or answers them from a
/// cassette. Replay never touches the transport.
class CompletionClient {
 public:
  CompletionClient(CompletionConfig config, BackendMode mode, std::shared_ptr<const HttpTransport> transport,
                   std::shared_ptr<Cassette> cassette);

  /// Throws CassetteMiss (replay), ProviderError (live transport or backend).
  AnswerRecord complete(const PromptText& prompt) const;

  BackendMode mode() const { return mode_; }
  const CompletionConfig& config() const { return config_; }

 private:
  CompletionConfig config_;
  BackendMode mode_;
  std::shared_ptr<const HttpTransport> transport_;
  std::shared_ptr<Cassette> cassette_;
};

}  // namespace sgrag
