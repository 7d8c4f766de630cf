#include "sgrag_test/stub_transport.hpp"

#include <nlohmann/json.hpp>

#include "sgrag/error.hpp"

namespace sgrag_test {

std::string chat_response_body(const std::string& content) {
  nlohmann::json j = {{"id", "stub"},
                      {"object", "chat.completion"},
                      {"choices", nlohmann::json::array({{{"index", 0},
                                                          {"message", {{"role", "assistant"}, {"content", content}}},
                                                          {"finish_reason", "stop"}}})}};
  return j.dump();
}

sgrag::HttpResponse StubChatTransport::post(const sgrag::HttpRequest& request) const {
  ++calls_;
  const auto body = nlohmann::json::parse(request.body);
  const auto prompt = body.at("messages").at(0).at("content").get<std::string>();
  {
    std::lock_guard lock(mutex_);
    prompts_.push_back(prompt);
  }
  return {200, chat_response_body(answer_(prompt))};
}

std::vector<std::string> StubChatTransport::prompts() const {
  std::lock_guard lock(mutex_);
  return prompts_;
}

sgrag::HttpResponse CountingNullTransport::post(const sgrag::HttpRequest&) const {
  ++calls_;
  throw sgrag::ProviderError("network access is not allowed here");
}

}  // namespace sgrag_test
