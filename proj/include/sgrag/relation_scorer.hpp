#pragma once

// Inference-only prototype-based relation representation. Entities and
// predicates are class prototypes (a learned projection of a word vector)
// plus a gated, instance-specific residual mapped from visual features.
//
//   o = W_role t + sigmoid(FC([W_role t, M_entity e])) * M_entity e
//   p = W_pred t_p + sigmoid(FC([fuse(o_s, o_o), M_union e_u])) * M_union e_u
//   fuse(a, b) = relu(a + b) - (a - b)^2
//
// Nothing here trains; parameters come from a parameter file or a seeded
// initializer.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sgrag::relation {

using Vector = std::vector<double>;

/// y = W x + b with a row-major W of shape out_dim x in_dim.
class AffineMap {
 public:
  AffineMap() = default;
  AffineMap(std::size_t out_dim, std::size_t in_dim);
  AffineMap(std::size_t out_dim, std::size_t in_dim, std::vector<double> weight, Vector bias);

  static AffineMap identity(std::size_t dim);

  std::size_t out_dim() const { return out_dim_; }
  std::size_t in_dim() const { return in_dim_; }

  double& at(std::size_t row, std::size_t col) { return weight_[row * in_dim_ + col]; }
  double at(std::size_t row, std::size_t col) const { return weight_[row * in_dim_ + col]; }
  const std::vector<double>& weight() const { return weight_; }
  std::vector<double>& weight() { return weight_; }
  const Vector& bias() const { return bias_; }
  Vector& bias() { return bias_; }

  /// W x + b
  Vector apply(std::span<const double> x) const;
  /// W x
  Vector linear(std::span<const double> x) const;

  bool operator==(const AffineMap&) const = default;

 private:
  std::size_t out_dim_ = 0;
  std::size_t in_dim_ = 0;
  std::vector<double> weight_;
  Vector bias_;
};

/// Fully connected layer over [first; second] followed by the logistic sigmoid.
class GateLayer {
 public:
  GateLayer() = default;
  explicit GateLayer(AffineMap fc);

  std::size_t dim() const { return fc_.out_dim(); }
  const AffineMap& fc() const { return fc_; }
  AffineMap& fc() { return fc_; }

  /// Elementwise in (0, 1) for finite input.
  Vector operator()(std::span<const double> first, std::span<const double> second) const;

  bool operator==(const GateLayer&) const = default;

 private:
  AffineMap fc_;
};

/// Label -> word vector, all of one dimension.
class ClassEmbeddingTable {
 public:
  ClassEmbeddingTable() = default;
  explicit ClassEmbeddingTable(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  void set(const std::string& label, Vector vec);
  const Vector& at(const std::string& label) const;
  bool contains(const std::string& label) const { return vectors_.contains(label); }
  const std::map<std::string, Vector>& entries() const { return vectors_; }

  bool operator==(const ClassEmbeddingTable&) const = default;

 private:
  std::size_t dim_ = 0;
  std::map<std::string, Vector> vectors_;
};

enum class Role { subject, object };

struct PenetParams {
  std::size_t semantic_dim = 0;  // d
  std::size_t visual_dim = 0;    // d_v
  std::size_t word_dim = 0;      // d_w

  AffineMap w_subject;    // d x d_w, linear part only
  AffineMap w_object;     // d x d_w, linear part only
  AffineMap w_predicate;  // d x d_w, linear part only
  AffineMap m_entity;     // d x d_v
  AffineMap m_union;      // d x d_v
  GateLayer gate_entity;     // 2d -> d
  GateLayer gate_predicate;  // 2d -> d
  ClassEmbeddingTable class_table;  // entity categories and predicates

  /// Throws std::invalid_argument naming the first inconsistent component.
  void check() const;

  bool operator==(const PenetParams&) const = default;
};

struct SeedSpec {
  std::uint64_t seed = 0;
  std::size_t semantic_dim = 16;
  std::size_t visual_dim = 32;
  std::size_t word_dim = 24;
};

/// Uniform weights in [-1/sqrt(fan_in), 1/sqrt(fan_in)] drawn from mt19937_64
/// with a portable real mapping, so identical seeds give identical parameters
/// on every platform.
PenetParams seeded_params(const SeedSpec& spec, std::span<const std::string> labels);

Vector visual_to_semantic(std::span<const double> visual, const AffineMap& m);

Vector gated_instance_vector(std::span<const double> prototype, std::span<const double> mapped_visual,
                             const GateLayer& gate);

Vector fuse(std::span<const double> a, std::span<const double> b);

Vector entity_representation(const std::string& category, std::span<const double> visual,
                             const PenetParams& params, Role role);

Vector predicate_representation(std::span<const double> subject, std::span<const double> object,
                                std::span<const double> union_visual, const std::string& predicate,
                                const PenetParams& params);

struct PredicateScore {
  std::string label;
  double score = 0;
  bool operator==(const PredicateScore&) const = default;
};

/// Cosine of the query against each W_predicate t_label, highest first, ties
/// by label. Throws std::invalid_argument for a zero-norm query or unknown label.
std::vector<PredicateScore> rank_predicates(std::span<const double> query, const PenetParams& params,
                                            std::span<const std::string> predicate_labels);

/// Text container for PenetParams. Numbers use shortest round-trip form.
std::string serialize_params(const PenetParams& params);
PenetParams parse_params(const std::string& text);
PenetParams load_params(const std::string& path);
void save_params(const PenetParams& params, const std::string& path);

}  // namespace sgrag::relation
