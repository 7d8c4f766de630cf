#include "sgrag/evaluation.hpp"

#include <algorithm>
#include <stdexcept>

#include "sgrag/error.hpp"

namespace sgrag::eval {

namespace {

struct Truth {
  std::map<std::string, int> counts;
  std::map<std::string, std::set<GridCell>> cells;
  std::set<RelationTriple> relations;
};

Truth truth_of(const StructuredScene& scene, const LabelCanonicalizer& canonicalize) {
  Truth t;
  for (const auto& s : scene.summaries) {
    const auto label = canonicalize(s.category);
    t.counts[label] += s.count;
    t.cells[label].insert(s.cells.begin(), s.cells.end());
  }
  for (const auto& r : scene.relation_triples)
    t.relations.insert({canonicalize(r.subject), canonicalize(r.predicate), canonicalize(r.object)});
  return t;
}

Tally tally_for(const PredictedScene& pred, const Truth& truth, Attribute attribute) {
  Tally t;
  switch (attribute) {
    case Attribute::category:
      t.truth = truth.counts.size();
      t.predicted = pred.categories.size();
      for (const auto& [label, _] : truth.counts) t.matched += pred.categories.contains(label);
      break;
    case Attribute::quantity:
      t.truth = truth.counts.size();
      for (const auto& [label, count] : pred.categories) t.predicted += count.has_value();
      for (const auto& [label, count] : truth.counts) {
        auto it = pred.categories.find(label);
        t.matched += it != pred.categories.end() && it->second == count;
      }
      break;
    case Attribute::location:
      for (const auto& [label, cells] : pred.locations) t.predicted += cells.size();
      for (const auto& [label, cells] : truth.cells) {
        t.truth += cells.size();
        if (auto it = pred.locations.find(label); it != pred.locations.end())
          for (const auto& c : cells) t.matched += it->second.contains(c);
      }
      break;
    case Attribute::relationship:
      t.truth = truth.relations.size();
      t.predicted = pred.relations.size();
      for (const auto& r : truth.relations) t.matched += pred.relations.contains(r);
      break;
  }
  return t;
}

double ratio(std::size_t num, std::size_t den) { return den ? static_cast<double>(num) / static_cast<double>(den) : 0.0; }

AttributeScores scores_from(const Tally& t) {
  AttributeScores s;
  s.tally = t;
  s.defined = t.truth > 0;
  s.recall = ratio(t.matched, t.truth);
  s.precision = ratio(t.matched, t.predicted);
  s.f1 = f1(s.precision, s.recall);
  return s;
}

void check_unit(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument(std::string("f1: ") + name + " outside [0, 1]");
}

}  // namespace

const char* to_string(Attribute a) {
  switch (a) {
    case Attribute::category: return "category";
    case Attribute::quantity: return "quantity";
    case Attribute::location: return "location";
    case Attribute::relationship: return "relationship";
  }
  return "unknown";
}

const char* display_name(Attribute a) {
  switch (a) {
    case Attribute::category: return "Category";
    case Attribute::quantity: return "Quantity";
    case Attribute::location: return "Location";
    case Attribute::relationship: return "Relationship";
  }
  return "Unknown";
}

Tally& Tally::operator+=(const Tally& o) {
  matched += o.matched;
  truth += o.truth;
  predicted += o.predicted;
  return *this;
}

double f1(double precision, double recall) {
  check_unit(precision, "precision");
  check_unit(recall, "recall");
  const double sum = precision + recall;
  return sum > 0 ? 2.0 * precision * recall / sum : 0.0;
}

AttributeScores attribute_scores(const PredictedScene& pred, const StructuredScene& truth, Attribute attribute,
                                 const LabelCanonicalizer& canonicalize) {
  if (pred.image_id != truth.image_id)
    throw ValidationError("image mismatch", "image_id",
                          "prediction for '" + pred.image_id + "' scored against '" + truth.image_id + "'");
  return scores_from(tally_for(pred, truth_of(truth, canonicalize), attribute));
}

double overall_score(const std::map<ClassKey, double>& recalls, double threshold) {
  if (recalls.empty()) throw std::invalid_argument("overall_score: no (attribute, class) recalls");
  std::size_t passing = 0;
  for (const auto& [_, r] : recalls) passing += r >= threshold;
  return static_cast<double>(passing) / static_cast<double>(recalls.size());
}

ImageResult evaluate_image(const PredictedScene& pred, const StructuredScene& truth_scene,
                           const LabelCanonicalizer& canonicalize) {
  if (pred.image_id != truth_scene.image_id)
    throw ValidationError("image mismatch", "image_id",
                          "prediction for '" + pred.image_id + "' scored against '" + truth_scene.image_id + "'");
  const Truth truth = truth_of(truth_scene, canonicalize);
  ImageResult r;
  r.image_id = truth_scene.image_id;
  r.parse_ok = pred.parse_ok;
  for (auto a : kAttributes) r.scores[static_cast<int>(a)] = scores_from(tally_for(pred, truth, a));

  for (const auto& [label, count] : truth.counts) {
    const auto it = pred.categories.find(label);
    r.class_tallies[{Attribute::category, label}] = {it != pred.categories.end() ? 1u : 0u, 1, 0};
    r.class_tallies[{Attribute::quantity, label}] = {it != pred.categories.end() && it->second == count ? 1u : 0u, 1, 0};
  }
  for (const auto& [label, cells] : truth.cells) {
    Tally t{0, cells.size(), 0};
    if (auto it = pred.locations.find(label); it != pred.locations.end())
      for (const auto& c : cells) t.matched += it->second.contains(c);
    r.class_tallies[{Attribute::location, label}] = t;
  }
  for (const auto& rel : truth.relations) {
    auto& t = r.class_tallies[{Attribute::relationship, rel.predicate}];
    ++t.truth;
    t.matched += pred.relations.contains(rel);
  }
  return r;
}

ImageResult failed_image(const StructuredScene& truth, std::string error, const LabelCanonicalizer& canonicalize) {
  PredictedScene nothing;
  nothing.image_id = truth.image_id;
  ImageResult r = evaluate_image(nothing, truth, canonicalize);
  r.error = std::move(error);
  return r;
}

MetricsReport aggregate(std::vector<ImageResult> images, const EvalOptions& options) {
  if (images.empty()) throw std::invalid_argument("aggregate: no images evaluated");
  MetricsReport report;
  report.options = options;

  for (auto a : kAttributes) {
    const auto i = static_cast<int>(a);
    auto& m = report.means[i];
    Tally pooled;
    for (const auto& img : images) {
      const auto& s = img.scores[i];
      if (!s.defined) continue;
      ++m.images;
      pooled += s.tally;
      m.recall += s.recall;
      m.precision += s.precision;
      m.f1 += s.f1;
    }
    if (m.images == 0) continue;
    if (options.averaging == Averaging::per_image) {
      const auto n = static_cast<double>(m.images);
      m.recall /= n;
      m.precision /= n;
      m.f1 /= n;
    } else {
      m.recall = ratio(pooled.matched, pooled.truth);
      m.precision = ratio(pooled.matched, pooled.predicted);
      m.f1 = f1(m.precision, m.recall);
    }
  }

  std::map<ClassKey, Tally> pools;
  std::map<ClassKey, std::pair<double, std::size_t>> macro;  // sum of per-image recalls, images
  for (const auto& img : images) {
    report.parse_failures += !img.parse_ok;
    for (const auto& [key, t] : img.class_tallies) {
      pools[key] += t;
      auto& [sum, n] = macro[key];
      sum += ratio(t.matched, t.truth);
      ++n;
    }
  }
  std::map<ClassKey, double> recalls;
  for (const auto& [key, t] : pools) {
    if (t.truth == 0) continue;
    const double recall = options.pooling == ClassPooling::micro
                              ? ratio(t.matched, t.truth)
                              : macro[key].first / static_cast<double>(macro[key].second);
    recalls[key] = recall;
    report.class_recalls.push_back({key.first, key.second, recall, t.matched, t.truth});
  }
  report.classes_total = recalls.size();
  for (const auto& [_, r] : recalls) report.classes_passing += r >= options.threshold;
  if (!recalls.empty()) report.overall_score = overall_score(recalls, options.threshold);

  report.images = std::move(images);
  return report;
}

}  // namespace sgrag::eval
