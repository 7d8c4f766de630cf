#include "sgrag/completion.hpp"

#include <chrono>

#include "sgrag/digest.hpp"
#include "sgrag/error.hpp"

namespace sgrag {

void CompletionConfig::check() const {
  if (!(temperature >= 0)) throw ConfigError("completion: temperature must be >= 0");
  if (!(timeout_seconds > 0)) throw ConfigError("completion: timeout must be > 0");
  if (max_tokens <= 0) throw ConfigError("completion: max_tokens must be > 0");
  if (model.empty()) throw ConfigError("completion: model name must be set");
}

std::string prompt_digest(const PromptText& prompt) { return sha256_hex(prompt.text); }

nlohmann::json chat_request(const PromptText& prompt, const CompletionConfig& config) {
  return {{"model", config.model},
          {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt.text}}})},
          {"temperature", config.temperature},
          {"max_tokens", config.max_tokens}};
}

std::string parse_chat_response(const std::string& body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProviderError(std::string("chat backend returned malformed JSON: ") + e.what());
  }
  if (auto err = j.find("error"); err != j.end() && !err->is_null()) {
    if (err->is_object() && err->contains("message") && (*err)["message"].is_string())
      throw ProviderError("backend error: " + (*err)["message"].get<std::string>());
    throw ProviderError("backend error: " + err->dump());
  }
  const auto choices = j.find("choices");
  if (choices == j.end() || !choices->is_array() || choices->empty() || !(*choices)[0].contains("message"))
    throw ProviderError("chat backend response has no choices[0].message");
  const auto& message = (*choices)[0]["message"];
  if (auto refusal = message.find("refusal"); refusal != message.end() && refusal->is_string())
    throw ProviderError("backend refusal: " + refusal->get<std::string>());
  if (!message.contains("content") || !message["content"].is_string())
    throw ProviderError("chat backend response has no message content");
  return message["content"].get<std::string>();
}

CompletionClient::CompletionClient(CompletionConfig config, BackendMode mode,
                                   std::shared_ptr<const HttpTransport> transport, std::shared_ptr<Cassette> cassette)
    : config_(std::move(config)), mode_(mode), transport_(std::move(transport)), cassette_(std::move(cassette)) {
  config_.check();
  if (mode_ != BackendMode::live && !cassette_) throw ConfigError("completion: record/replay needs a cassette");
  if (mode_ != BackendMode::replay) {
    if (!transport_) throw ConfigError("completion: live mode needs a transport");
    parse_url(config_.url);
  }
}

AnswerRecord CompletionClient::complete(const PromptText& prompt) const {
  const auto start = std::chrono::steady_clock::now();
  AnswerRecord record;
  record.prompt_digest = prompt_digest(prompt);
  record.mode = mode_;

  if (mode_ == BackendMode::replay) {
    auto entry = cassette_->find(record.prompt_digest);
    if (!entry || !entry->contains("answer") || !(*entry)["answer"].is_string())
      throw CassetteMiss(record.prompt_digest);
    record.answer = (*entry)["answer"].get<std::string>();
    record.backend = entry->value("backend", std::string("cassette"));
  } else {
    HttpRequest request{config_.url, {}, chat_request(prompt, config_).dump(), config_.timeout_seconds};
    if (auto secret = secret_from_env(config_.secret_env); !secret.empty())
      request.headers.emplace_back(config_.auth_header, config_.auth_prefix + secret);
    const auto response = transport_->post(request);
    if (response.status < 200 || response.status >= 300) {
      // Error payloads carry the backend's message; surface it untouched.
      try {
        parse_chat_response(response.body);
      } catch (const ProviderError& e) {
        throw ProviderError("HTTP " + std::to_string(response.status) + ": " + e.what());
      }
      throw ProviderError("HTTP " + std::to_string(response.status) + ": " + response.body);
    }
    record.answer = parse_chat_response(response.body);
    record.backend = config_.model;
    if (mode_ == BackendMode::record)
      cassette_->append(record.prompt_digest, {{"answer", record.answer}, {"backend", record.backend}});
  }
  record.latency_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return record;
}

}  // namespace sgrag
