#pragma once

// Scores structured model answers against ground-truth scenes on four
// attributes (category, quantity, location, relationship) and aggregates
// per-image scores into dataset means and an overall score: the fraction of
// (attribute, class) pools whose recall reaches the threshold.

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgrag/scene_model.hpp"

namespace sgrag::eval {

enum class Attribute { category = 0, quantity = 1, location = 2, relationship = 3 };
inline constexpr std::array<Attribute, 4> kAttributes = {Attribute::category, Attribute::quantity,
                                                         Attribute::location, Attribute::relationship};
inline constexpr double kDefaultThreshold = 0.55;

const char* to_string(Attribute attribute);  // "category", ...
const char* display_name(Attribute attribute);  // "Category", ...

/// Maps label variants (plural forms, aliases) to one canonical label.
/// File format: one "variant = canonical" pair per line, '#' comments.
class LabelCanonicalizer {
 public:
  LabelCanonicalizer() = default;
  static LabelCanonicalizer load(const std::string& path);
  static LabelCanonicalizer parse(const std::string& text);

  void add(std::string_view variant, std::string_view canonical);
  /// canonical_label(raw), then the synonym table if it has an entry.
  std::string operator()(std::string_view raw) const;
  std::size_t size() const { return synonyms_.size(); }

 private:
  std::map<std::string, std::string> synonyms_;
};

struct PredictedScene {
  std::string image_id;
  std::map<std::string, std::optional<int>> categories;  // count when the answer gave one >= 1
  std::map<std::string, std::set<GridCell>> locations;
  std::set<RelationTriple> relations;
  bool parse_ok = false;
};

/// Finds the first JSON object in `text` that has an "objects" array and reads
/// it. Surrounding prose and code fences are ignored. Never throws: without a
/// usable block the result has parse_ok=false and empty fields.
PredictedScene parse_structured_answer(std::string_view text, const LabelCanonicalizer& canonicalize = {});

struct Tally {
  std::size_t matched = 0;
  std::size_t truth = 0;
  std::size_t predicted = 0;
  Tally& operator+=(const Tally& other);
  bool operator==(const Tally&) const = default;
};

struct AttributeScores {
  double recall = 0;
  double precision = 0;
  double f1 = 0;
  bool defined = false;  // false when the image has no ground truth for the attribute
  Tally tally;
};

/// 2pr/(p+r), 0 when p+r == 0. Throws std::invalid_argument outside [0,1].
double f1(double precision, double recall);

/// Throws ValidationError when the image ids differ.
AttributeScores attribute_scores(const PredictedScene& pred, const StructuredScene& truth, Attribute attribute,
                                 const LabelCanonicalizer& canonicalize = {});

using ClassKey = std::pair<Attribute, std::string>;

/// Fraction of entries with recall >= threshold. Throws std::invalid_argument
/// on an empty map.
double overall_score(const std::map<ClassKey, double>& per_class_recalls, double threshold = kDefaultThreshold);

struct ImageResult {
  std::string image_id;
  bool parse_ok = false;
  std::string error;  // backend/cassette failure that replaced the answer, if any
  std::array<AttributeScores, 4> scores;
  std::map<ClassKey, Tally> class_tallies;  // per (attribute, class): matched / truth
};

ImageResult evaluate_image(const PredictedScene& pred, const StructuredScene& truth,
                           const LabelCanonicalizer& canonicalize = {});

/// Result for an image whose answer could not be obtained: scored as an
/// unparseable answer and counted as a parse failure.
ImageResult failed_image(const StructuredScene& truth, std::string error,
                         const LabelCanonicalizer& canonicalize = {});

enum class Averaging { per_image, pooled };
enum class ClassPooling { micro, macro };

struct EvalOptions {
  double threshold = kDefaultThreshold;
  Averaging averaging = Averaging::per_image;
  ClassPooling pooling = ClassPooling::micro;
  std::string template_version;
};

struct AttributeSummary {
  double recall = 0;
  double precision = 0;
  double f1 = 0;
  std::size_t images = 0;  // images with ground truth for the attribute
};

struct ClassRecall {
  Attribute attribute = Attribute::category;
  std::string label;
  double recall = 0;
  std::size_t matched = 0;
  std::size_t truth = 0;
};

struct MetricsReport {
  EvalOptions options;
  std::vector<ImageResult> images;
  std::array<AttributeSummary, 4> means;
  std::vector<ClassRecall> class_recalls;  // ordered by attribute, then label
  double overall_score = 0;
  std::size_t classes_passing = 0;
  std::size_t classes_total = 0;
  std::size_t parse_failures = 0;
};

/// Throws std::invalid_argument on an empty result list.
MetricsReport aggregate(std::vector<ImageResult> images, const EvalOptions& options = {});

/// Machine-readable report; reals rounded to 4 decimals.
nlohmann::ordered_json to_json(const MetricsReport& report);
/// Aligned text tables (attribute columns, metric rows) plus per-class recalls.
std::string render_table(const MetricsReport& report);

}  // namespace sgrag::eval
