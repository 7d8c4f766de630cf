#include "sgrag/relation_scorer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace sgrag::relation {

namespace {

void require_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want)
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (got " + std::to_string(got) +
                                ", expected " + std::to_string(want) + ")");
}

double sigmoid(double x) {
  // Split by sign so exp never overflows.
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double z = std::exp(x);
  return z / (1.0 + z);
}

double norm(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

class PortableUniform {
 public:
  explicit PortableUniform(std::uint64_t seed) : engine_(seed) {}
  // [-bound, bound)
  double operator()(double bound) {
    const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return (2.0 * unit - 1.0) * bound;
  }

 private:
  std::mt19937_64 engine_;
};

AffineMap random_affine(PortableUniform& rng, std::size_t out_dim, std::size_t in_dim) {
  AffineMap m(out_dim, in_dim);
  const double bound = 1.0 / std::sqrt(static_cast<double>(in_dim));
  for (auto& w : m.weight()) w = rng(bound);
  for (auto& b : m.bias()) b = rng(bound);
  return m;
}

}  // namespace

AffineMap::AffineMap(std::size_t out_dim, std::size_t in_dim)
    : out_dim_(out_dim), in_dim_(in_dim), weight_(out_dim * in_dim, 0.0), bias_(out_dim, 0.0) {}

AffineMap::AffineMap(std::size_t out_dim, std::size_t in_dim, std::vector<double> weight, Vector bias)
    : out_dim_(out_dim), in_dim_(in_dim), weight_(std::move(weight)), bias_(std::move(bias)) {
  require_dim(weight_.size(), out_dim * in_dim, "AffineMap weight");
  require_dim(bias_.size(), out_dim, "AffineMap bias");
}

AffineMap AffineMap::identity(std::size_t dim) {
  AffineMap m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = 1.0;
  return m;
}

Vector AffineMap::linear(std::span<const double> x) const {
  require_dim(x.size(), in_dim_, "AffineMap input");
  Vector y(out_dim_, 0.0);
  for (std::size_t r = 0; r < out_dim_; ++r) {
    const double* row = weight_.data() + r * in_dim_;
    double acc = 0;
    for (std::size_t c = 0; c < in_dim_; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
  return y;
}

Vector AffineMap::apply(std::span<const double> x) const {
  Vector y = linear(x);
  for (std::size_t r = 0; r < out_dim_; ++r) y[r] += bias_[r];
  return y;
}

GateLayer::GateLayer(AffineMap fc) : fc_(std::move(fc)) {
  if (fc_.in_dim() != 2 * fc_.out_dim())
    throw std::invalid_argument("GateLayer: fc must map 2d -> d, got " + std::to_string(fc_.in_dim()) + " -> " +
                                std::to_string(fc_.out_dim()));
}

Vector GateLayer::operator()(std::span<const double> first, std::span<const double> second) const {
  require_dim(first.size(), dim(), "gate first input");
  require_dim(second.size(), dim(), "gate second input");
  Vector joined(first.begin(), first.end());
  joined.insert(joined.end(), second.begin(), second.end());
  Vector out = fc_.apply(joined);
  for (double& x : out) x = sigmoid(x);
  return out;
}

void ClassEmbeddingTable::set(const std::string& label, Vector vec) {
  require_dim(vec.size(), dim_, "class embedding");
  for (double x : vec)
    if (!std::isfinite(x)) throw std::invalid_argument("class embedding for '" + label + "' is not finite");
  vectors_[label] = std::move(vec);
}

const Vector& ClassEmbeddingTable::at(const std::string& label) const {
  auto it = vectors_.find(label);
  if (it == vectors_.end()) throw std::invalid_argument("unknown class label '" + label + "'");
  return it->second;
}

void PenetParams::check() const {
  const std::size_t d = semantic_dim;
  auto shape = [](const AffineMap& m, std::size_t out, std::size_t in, const char* name) {
    if (m.out_dim() != out || m.in_dim() != in)
      throw std::invalid_argument(std::string("PenetParams: ") + name + " has shape " + std::to_string(m.out_dim()) +
                                  "x" + std::to_string(m.in_dim()) + ", expected " + std::to_string(out) + "x" +
                                  std::to_string(in));
    for (double x : m.weight())
      if (!std::isfinite(x)) throw std::invalid_argument(std::string("PenetParams: ") + name + " not finite");
    for (double x : m.bias())
      if (!std::isfinite(x)) throw std::invalid_argument(std::string("PenetParams: ") + name + " not finite");
  };
  shape(w_subject, d, word_dim, "w_subject");
  shape(w_object, d, word_dim, "w_object");
  shape(w_predicate, d, word_dim, "w_predicate");
  shape(m_entity, d, visual_dim, "m_entity");
  shape(m_union, d, visual_dim, "m_union");
  shape(gate_entity.fc(), d, 2 * d, "gate_entity");
  shape(gate_predicate.fc(), d, 2 * d, "gate_predicate");
  if (class_table.dim() != word_dim) throw std::invalid_argument("PenetParams: class_table dimension != word_dim");
}

PenetParams seeded_params(const SeedSpec& spec, std::span<const std::string> labels) {
  PortableUniform rng(spec.seed);
  const std::size_t d = spec.semantic_dim;
  PenetParams p;
  p.semantic_dim = d;
  p.visual_dim = spec.visual_dim;
  p.word_dim = spec.word_dim;
  p.w_subject = random_affine(rng, d, spec.word_dim);
  p.w_object = random_affine(rng, d, spec.word_dim);
  p.w_predicate = random_affine(rng, d, spec.word_dim);
  p.m_entity = random_affine(rng, d, spec.visual_dim);
  p.m_union = random_affine(rng, d, spec.visual_dim);
  p.gate_entity = GateLayer(random_affine(rng, d, 2 * d));
  p.gate_predicate = GateLayer(random_affine(rng, d, 2 * d));
  p.class_table = ClassEmbeddingTable(spec.word_dim);
  std::vector<std::string> sorted(labels.begin(), labels.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (const auto& label : sorted) {
    Vector v(spec.word_dim);
    for (double& x : v) x = rng(1.0);
    p.class_table.set(label, std::move(v));
  }
  return p;
}

Vector visual_to_semantic(std::span<const double> visual, const AffineMap& m) { return m.apply(visual); }

Vector gated_instance_vector(std::span<const double> prototype, std::span<const double> mapped_visual,
                             const GateLayer& gate) {
  Vector g = gate(prototype, mapped_visual);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= mapped_visual[i];
  return g;
}

Vector fuse(std::span<const double> a, std::span<const double> b) {
  require_dim(b.size(), a.size(), "fuse");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    out[i] = std::max(0.0, a[i] + b[i]) - diff * diff;
  }
  return out;
}

Vector entity_representation(const std::string& category, std::span<const double> visual,
                             const PenetParams& params, Role role) {
  const AffineMap& w = role == Role::subject ? params.w_subject : params.w_object;
  Vector prototype = w.linear(params.class_table.at(category));
  const Vector mapped = visual_to_semantic(visual, params.m_entity);
  const Vector residual = gated_instance_vector(prototype, mapped, params.gate_entity);
  for (std::size_t i = 0; i < prototype.size(); ++i) prototype[i] += residual[i];
  return prototype;
}

Vector predicate_representation(std::span<const double> subject, std::span<const double> object,
                                std::span<const double> union_visual, const std::string& predicate,
                                const PenetParams& params) {
  require_dim(subject.size(), params.semantic_dim, "predicate_representation subject");
  require_dim(object.size(), params.semantic_dim, "predicate_representation object");
  Vector prototype = params.w_predicate.linear(params.class_table.at(predicate));
  const Vector mapped = visual_to_semantic(union_visual, params.m_union);
  const Vector residual = gated_instance_vector(fuse(subject, object), mapped, params.gate_predicate);
  for (std::size_t i = 0; i < prototype.size(); ++i) prototype[i] += residual[i];
  return prototype;
}

std::vector<PredicateScore> rank_predicates(std::span<const double> query, const PenetParams& params,
                                            std::span<const std::string> predicate_labels) {
  require_dim(query.size(), params.semantic_dim, "rank_predicates query");
  const double query_norm = norm(query);
  if (!(query_norm > 0)) throw std::invalid_argument("rank_predicates: degenerate query (zero norm)");

  std::vector<PredicateScore> scores;
  scores.reserve(predicate_labels.size());
  for (const auto& label : predicate_labels) {
    const Vector prototype = params.w_predicate.linear(params.class_table.at(label));
    const double prototype_norm = norm(prototype);
    double dot = 0;
    for (std::size_t i = 0; i < prototype.size(); ++i) dot += prototype[i] * query[i];
    const double cosine = prototype_norm > 0 ? std::clamp(dot / (prototype_norm * query_norm), -1.0, 1.0) : 0.0;
    scores.push_back({label, cosine});
  }
  std::sort(scores.begin(), scores.end(), [](const PredicateScore& a, const PredicateScore& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.label < b.label;
  });
  return scores;
}

}  // namespace sgrag::relation
