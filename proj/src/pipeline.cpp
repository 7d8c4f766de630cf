#include "sgrag/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "sgrag/chunking.hpp"
#include "sgrag/error.hpp"
#include "sgrag/generation.hpp"
#include "sgrag/ingest.hpp"
#include "sgrag/remote_embedder.hpp"
#include "sgrag/text.hpp"

namespace sgrag {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

// Runs one pipeline stage, recording its duration and tagging failures with
// the stage name.
template <typename Fn>
auto run_stage(const char* stage, std::vector<StageTiming>& timings, Fn&& fn) {
  const auto start = Clock::now();
  auto record = [&] {
    timings.push_back({stage, std::chrono::duration<double, std::milli>(Clock::now() - start).count()});
  };
  try {
    auto value = fn();
    record();
    return value;
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(stage, e);
  } catch (const std::invalid_argument& e) {
    throw StageError(stage, ValidationError("invalid input", stage, e.what()));
  }
}

double round6(double x) {
  const double r = std::round(x * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;
}

std::vector<Chunk> chunks_of(const std::vector<ScoredChunk>& scored) {
  std::vector<Chunk> out;
  out.reserve(scored.size());
  for (const auto& s : scored) out.push_back(s.chunk);
  return out;
}

}  // namespace

nlohmann::ordered_json to_json(const QAResult& r, bool include_durations) {
  nlohmann::ordered_json j;
  j["image_id"] = r.image_id;
  j["question"] = r.question;
  j["mode"] = to_string(r.mode);
  j["backend"] = r.backend;
  auto retrieved = nlohmann::ordered_json::array();
  for (const auto& s : r.retrieved)
    retrieved.push_back({{"category", s.chunk.category},
                         {"text", s.chunk.text},
                         {"score", round6(s.score)},
                         {"ordinal", s.ordinal}});
  j["retrieved"] = std::move(retrieved);
  j["prompt"] = r.prompt;
  j["prompt_digest"] = r.prompt_digest;
  j["answer"] = r.answer;
  auto stages = nlohmann::ordered_json::array();
  for (const auto& t : r.timings) stages.push_back(t.stage);
  j["stages"] = std::move(stages);
  if (include_durations) {
    nlohmann::ordered_json ms;
    for (const auto& t : r.timings) ms[t.stage] = t.ms;
    j["timings_ms"] = std::move(ms);
  }
  return j;
}

std::vector<QuestionRecord> load_questions(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<QuestionRecord> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ValidationError("malformed record", where, "expected a JSON object");
    QuestionRecord q;
    const auto id = j.value("image_id", nlohmann::json());
    if (id.is_string()) q.image_id = id.get<std::string>();
    else if (id.is_number_integer()) q.image_id = std::to_string(id.get<std::int64_t>());
    else throw ValidationError("missing field", where, "image_id required");
    if (j.contains("question")) {
      if (!j["question"].is_string()) throw ValidationError("malformed record", where, "question must be a string");
      q.question = j["question"].get<std::string>();
    }
    if (j.contains("reference") && j["reference"].is_string()) q.reference = j["reference"].get<std::string>();
    out.push_back(std::move(q));
  }
  return out;
}

Session::Session(SessionConfig config, std::shared_ptr<const HttpTransport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
  config_.check();
  const bool needs_network =
      config_.mode != BackendMode::replay;  // completions; the remote embedder follows the same mode
  if (needs_network && !transport_) transport_ = make_http_transport(config_.max_in_flight);

  if (config_.embedder == EmbedderKind::hash) {
    embedder_ = std::make_shared<HashEmbedder>(config_.hash_dim, config_.seed);
  } else {
    std::shared_ptr<Cassette> embed_cassette;
    if (config_.mode != BackendMode::live)
      embed_cassette = Cassette::open(config_.embed_cassette, config_.mode == BackendMode::record);
    embedder_ = std::make_shared<RemoteEmbedder>(config_.remote, config_.mode, transport_, embed_cassette);
  }

  std::shared_ptr<Cassette> cassette;
  if (config_.mode != BackendMode::live) cassette = Cassette::open(config_.cassette, config_.mode == BackendMode::record);
  completion_ = std::make_unique<CompletionClient>(config_.completion, config_.mode, transport_, cassette);

  if (!config_.synonyms.empty()) canonicalize_ = eval::LabelCanonicalizer::load(config_.synonyms);
}

EphemeralIndex Session::build_index(const StructuredScene& scene) const {
  EphemeralIndex index(scene.image_id, fingerprint_of(*embedder_));
  const auto chunks = render_scene(scene);
  if (!chunks.empty()) index.insert_all(chunks, *embedder_);
  return index;
}

QAResult Session::answer_question(const SceneGraph& graph, const std::string& question) const {
  if (question.empty()) throw ValidationError("empty question", "question", "question must be non-empty");
  QAResult r;
  r.image_id = graph.image_id;
  r.question = question;
  r.mode = config_.mode;
  auto& t = r.timings;

  const auto scene = run_stage("structure", t, [&] { return build_structured_scene(graph); });
  const auto chunks = run_stage("chunk", t, [&] { return render_scene(scene); });
  // Scoped to this call; nothing outlives the return.
  const auto index = run_stage("embed/index", t, [&] {
    EphemeralIndex idx(scene.image_id, fingerprint_of(*embedder_));
    if (!chunks.empty()) idx.insert_all(chunks, *embedder_);
    return idx;
  });
  r.retrieved = run_stage("retrieve", t, [&] {
    if (index.empty()) return std::vector<ScoredChunk>{};
    return index.top_k(embed(question, *embedder_), config_.k);
  });
  const auto prompt = run_stage("prompt", t, [&] { return build_prompt(chunks_of(r.retrieved), question); });
  const auto answer = run_stage("complete", t, [&] { return completion_->complete(prompt); });

  r.prompt = prompt.text;
  r.prompt_digest = answer.prompt_digest;
  r.answer = answer.answer;
  r.backend = answer.backend;
  return r;
}

QAResult Session::answer_question_file(const std::string& scene_file, const std::string& question) const {
  SceneGraph graph;
  try {
    graph = load_scene_file(scene_file);
  } catch (const Error& e) {
    throw StageError("load", e);
  }
  return answer_question(graph, question);
}

eval::ImageResult Session::evaluate_record(const StructuredScene& truth, const EphemeralIndex& index,
                                           const std::string& query) const {
  std::vector<ScoredChunk> retrieved;
  if (!index.empty()) retrieved = index.top_k(embed(query, *embedder_), config_.k);
  const auto prompt = build_eval_prompt(chunks_of(retrieved));
  const auto answer = completion_->complete(prompt);
  auto predicted = eval::parse_structured_answer(answer.answer, canonicalize_);
  predicted.image_id = truth.image_id;
  return eval::evaluate_image(predicted, truth, canonicalize_);
}

eval::MetricsReport Session::run_eval(const std::string& dataset_dir, const std::string& questions_file) const {
  const auto records = load_questions(questions_file);
  if (records.empty()) throw ValidationError("empty dataset", questions_file, "no question records");

  // Image groups in first-appearance order.
  std::vector<std::string> image_order;
  std::map<std::string, std::vector<std::size_t>> positions;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& p = positions[records[i].image_id];
    if (p.empty()) image_order.push_back(records[i].image_id);
    p.push_back(i);
  }

  std::map<std::string, StructuredScene> truths;
  for (const auto& id : image_order) {
    const auto path = (fs::path(dataset_dir) / scene_file_name(id)).string();
    if (!fs::exists(path)) throw IoError("no scene file for image '" + id + "' (" + path + ")");
    SceneGraph graph = load_scene_file(path);
    if (graph.image_id != id)
      throw ValidationError("image mismatch", path, "file holds image '" + graph.image_id + "', expected '" + id + "'");
    truths.emplace(id, build_structured_scene(graph));
  }

  std::vector<eval::ImageResult> results(records.size());
  auto process_image = [&](const std::string& id) {
    const auto& truth = truths.at(id);
    std::optional<EphemeralIndex> cached;
    for (std::size_t pos : positions.at(id)) {
      const auto& rec = records[pos];
      const std::string query = rec.question.empty() ? kEvalQuestion : rec.question;
      try {
        if (!config_.cache_per_image || !cached) cached.emplace(build_index(truth));
        results[pos] = evaluate_record(truth, *cached, query);
        if (!config_.cache_per_image) cached.reset();
      } catch (const Error& e) {
        results[pos] = eval::failed_image(truth, e.what(), canonicalize_);
      } catch (const std::invalid_argument& e) {
        results[pos] = eval::failed_image(truth, e.what(), canonicalize_);
      }
    }
  };

  const std::size_t workers = std::min(config_.workers, image_order.size());
  if (workers <= 1) {
    for (const auto& id : image_order) process_image(id);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < image_order.size(); i = next++) process_image(image_order[i]);
      });
  }

  auto options = config_.eval;
  options.template_version = std::string(kEvalTemplateVersion);
  return eval::aggregate(std::move(results), options);
}

QAResult answer_question(const std::string& scene_file, const std::string& question, const SessionConfig& config) {
  return Session(config).answer_question_file(scene_file, question);
}

eval::MetricsReport run_eval(const std::string& dataset_dir, const std::string& questions_file,
                             const SessionConfig& config) {
  return Session(config).run_eval(dataset_dir, questions_file);
}

}  // namespace sgrag
