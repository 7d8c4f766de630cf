#pragma once

// Scene graphs as ingested from annotation files, and the per-category
// structured representation (counts, 3x3 grid cells, relationship phrases)
// that the rest of the pipeline consumes.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgrag/error.hpp"

namespace sgrag {

/// Pixel box in image coordinates: origin top-left, x rightward, y downward.
struct BoundingBox {
  double x_min = 0, y_min = 0, x_max = 0, y_max = 0;
  bool operator==(const BoundingBox&) const = default;
};

struct Point {
  double x = 0, y = 0;
  bool operator==(const Point&) const = default;
};

enum class GridRow : std::uint8_t { top = 0, center = 1, bottom = 2 };
enum class GridCol : std::uint8_t { left = 0, center = 1, right = 2 };

/// One of the nine regions of the 3x3 grid. Ordered row-major.
struct GridCell {
  GridRow row = GridRow::center;
  GridCol col = GridCol::center;

  int index() const { return static_cast<int>(row) * 3 + static_cast<int>(col); }
  static GridCell from_index(int index);

  auto operator<=>(const GridCell& other) const { return index() <=> other.index(); }
  bool operator==(const GridCell& other) const { return index() == other.index(); }
};

/// "top-left", ..., "center" for the middle cell, ..., "bottom-right".
std::string to_string(GridCell cell);

/// Accepts the canonical names plus common variants ("center-center", "middle",
/// "top left", "top_left", "left-top"). Case-insensitive.
std::optional<GridCell> parse_grid_cell(std::string_view text);

struct ObjectInstance {
  std::string id;
  std::string category;
  BoundingBox bbox;
  std::vector<double> feature;  // optional detector feature; empty when absent
};

struct Relationship {
  std::string subject_id;
  std::string predicate;
  std::string object_id;
  std::vector<double> union_feature;  // optional; empty when absent
};

struct SceneGraph {
  std::string image_id;
  int width = 0;
  int height = 0;
  std::vector<ObjectInstance> objects;
  std::vector<Relationship> relationships;
};

/// Category-level relationship (subject category, predicate, object category).
struct RelationTriple {
  std::string subject;
  std::string predicate;
  std::string object;
  auto operator<=>(const RelationTriple&) const = default;
};

std::string to_phrase(const RelationTriple& triple);

struct CategorySummary {
  std::string category;
  int count = 0;
  std::vector<GridCell> cells;               // distinct, row-major
  std::vector<std::string> relation_phrases;  // input order, de-duplicated
};

struct StructuredScene {
  std::string image_id;
  std::vector<CategorySummary> summaries;     // ascending by category
  std::vector<RelationTriple> relation_triples;  // input order, de-duplicated
};

Point bbox_center(const BoundingBox& box);

/// Half-open thirds [k*W/3, (k+1)*W/3); the last third is closed at the edge.
/// Throws ValidationError when the point lies outside [0,width]x[0,height].
GridCell grid_cell(Point p, int width, int height);

std::map<std::string, int> count_by_category(std::span<const ObjectInstance> objects);

StructuredScene build_structured_scene(const SceneGraph& graph);

/// Every invariant violation in an already-typed graph, in a stable order.
std::vector<Violation> find_violations(const SceneGraph& graph);

struct SceneCheck {
  std::optional<SceneGraph> graph;
  std::vector<Violation> violations;
  bool ok() const { return graph.has_value(); }
};

/// Parses a canonical scene-graph document and checks it. Never throws on bad
/// input; collects the complete list of violations instead.
SceneCheck check_scene_graph(const nlohmann::json& raw);

/// As check_scene_graph, but throws ValidationError carrying every violation.
SceneGraph validate_scene_graph(const nlohmann::json& raw);

/// Reads and validates a canonical scene file.
SceneGraph load_scene_file(const std::string& path);

nlohmann::json to_json(const SceneGraph& graph);

}  // namespace sgrag
