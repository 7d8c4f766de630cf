#pragma once

// End-to-end sessions: scene -> structure -> chunk -> embed/index ->
// retrieve -> prompt -> complete (-> parse -> score for evaluation).
// Each question gets its own in-memory index which is dropped before the
// call returns.

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgrag/completion.hpp"
#include "sgrag/evaluation.hpp"
#include "sgrag/retrieval_index.hpp"
#include "sgrag/scene_model.hpp"
#include "sgrag/session_config.hpp"

namespace sgrag {

inline constexpr const char* kStageOrder[] = {"structure", "chunk", "embed/index", "retrieve", "prompt", "complete"};

struct StageTiming {
  std::string stage;
  double ms = 0;
};

struct QAResult {
  std::string image_id;
  std::string question;
  std::vector<ScoredChunk> retrieved;
  std::string prompt;
  std::string prompt_digest;
  std::string answer;
  std::string backend;
  BackendMode mode = BackendMode::live;
  std::vector<StageTiming> timings;  // in execution order
};

nlohmann::ordered_json to_json(const QAResult& result, bool include_durations);

/// One record of a questions file (JSON Lines):
///   {"image_id": "...", "question": "...", "reference": "..."}
struct QuestionRecord {
  std::string image_id;
  std::string question;
  std::string reference;
};

std::vector<QuestionRecord> load_questions(const std::string& path);

class Session {
 public:
  /// `transport` defaults to an HTTP client when a live backend is needed.
  explicit Session(SessionConfig config, std::shared_ptr<const HttpTransport> transport = nullptr);

  const SessionConfig& config() const { return config_; }
  const EmbeddingProvider& embedder() const { return *embedder_; }

  /// Throws StageError naming the failing stage.
  QAResult answer_question(const SceneGraph& scene, const std::string& question) const;

  /// Loads and validates the scene before any backend is contacted.
  QAResult answer_question_file(const std::string& scene_file, const std::string& question) const;

  /// Scores one structured-answer evaluation per question record. Backend
  /// failures count as parse failures; unreadable or invalid scenes abort.
  eval::MetricsReport run_eval(const std::string& dataset_dir, const std::string& questions_file) const;

 private:
  eval::ImageResult evaluate_record(const StructuredScene& truth, const EphemeralIndex& index,
                                    const std::string& query) const;
  EphemeralIndex build_index(const StructuredScene& scene) const;

  SessionConfig config_;
  std::shared_ptr<const HttpTransport> transport_;
  std::shared_ptr<const EmbeddingProvider> embedder_;
  std::unique_ptr<CompletionClient> completion_;
  eval::LabelCanonicalizer canonicalize_;
};

QAResult answer_question(const std::string& scene_file, const std::string& question, const SessionConfig& config);
eval::MetricsReport run_eval(const std::string& dataset_dir, const std::string& questions_file,
                             const SessionConfig& config);

}  // namespace sgrag
