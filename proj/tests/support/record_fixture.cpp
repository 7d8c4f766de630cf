// Records replay cassettes for the committed fixtures by running the real
// pipeline in record mode against a stub chat backend that hands out
// prepared answers in call order.
//
//   sgrag_record_fixture eval <dataset> <questions.jsonl> <answers.jsonl> <cassette>
//   sgrag_record_fixture ask <scene.json> <question> <answer> <cassette>

#include <deque>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sgrag/pipeline.hpp"
#include "sgrag/text.hpp"
#include "sgrag_test/stub_transport.hpp"

namespace {

sgrag::SessionConfig record_config(const std::string& cassette) {
  sgrag::SessionConfig cfg;
  cfg.mode = sgrag::BackendMode::record;
  cfg.cassette = cassette;
  cfg.completion.url = "http://stub.invalid/v1/chat/completions";
  cfg.completion.model = "stub-backend";
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 6) {
    std::cerr << "usage: sgrag_record_fixture eval|ask ...\n";
    return 1;
  }
  const std::string what = argv[1];
  std::filesystem::remove(argv[5]);

  std::deque<std::string> answers;
  if (what == "eval") {
    std::istringstream in(sgrag::read_file(argv[4]));
    for (std::string line; std::getline(in, line);)
      if (!line.empty()) answers.push_back(nlohmann::json::parse(line).at("answer").get<std::string>());
  } else {
    answers.push_back(argv[4]);
  }
  std::mutex mutex;
  auto stub = std::make_shared<sgrag_test::StubChatTransport>([&](const std::string&) {
    std::lock_guard lock(mutex);
    auto a = answers.front();
    answers.pop_front();
    return a;
  });

  try {
    sgrag::Session session(record_config(argv[5]), stub);
    if (what == "eval") {
      const auto report = session.run_eval(argv[2], argv[3]);
      std::cout << sgrag::eval::render_table(report);
    } else {
      std::cout << sgrag::to_json(session.answer_question_file(argv[2], argv[3]), false).dump(2) << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  std::cerr << stub->calls() << " backend calls recorded\n";
  return 0;
}
