#include "sgrag/scene_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <unordered_set>

#include "sgrag/text.hpp"

namespace sgrag {

namespace {

constexpr const char* kRowNames[] = {"top", "center", "bottom"};
constexpr const char* kColNames[] = {"left", "center", "right"};

// Characters that delimit fields in the chunk grammar.
constexpr std::string_view kReservedLabelChars = ",;:[]";

int third_of(double coordinate, int extent) {
  auto k = static_cast<int>(std::floor(3.0 * coordinate / extent));
  return std::min(k, 2);
}

void check_label(std::string_view label, const std::string& where, std::vector<Violation>& out) {
  if (label.empty()) {
    out.push_back({"empty label", where, "label must be non-empty"});
  } else if (label.find_first_of(kReservedLabelChars) != std::string_view::npos) {
    out.push_back({"invalid label", where, "label '" + std::string(label) + "' contains one of " +
                                               std::string(kReservedLabelChars)});
  }
}

// JSON ids may be strings or non-negative integers; both become strings.
std::optional<std::string> read_id(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  return std::nullopt;
}

std::vector<double> read_feature(const nlohmann::json& v, const std::string& where,
                                 std::vector<Violation>& out) {
  std::vector<double> feature;
  if (!v.is_array()) {
    out.push_back({"malformed record", where, "feature must be an array of numbers"});
    return feature;
  }
  for (const auto& x : v) {
    if (!x.is_number() || !std::isfinite(x.get<double>())) {
      out.push_back({"malformed record", where, "feature entries must be finite numbers"});
      return {};
    }
    feature.push_back(x.get<double>());
  }
  return feature;
}

}  // namespace

GridCell GridCell::from_index(int index) {
  return GridCell{static_cast<GridRow>(index / 3), static_cast<GridCol>(index % 3)};
}

std::string to_string(GridCell cell) {
  if (cell.row == GridRow::center && cell.col == GridCol::center) return "center";
  return std::string(kRowNames[static_cast<int>(cell.row)]) + "-" + kColNames[static_cast<int>(cell.col)];
}

std::optional<GridCell> parse_grid_cell(std::string_view text) {
  std::string s;
  for (char c : canonical_label(text)) s.push_back((c == ' ' || c == '_') ? '-' : c);
  if (s == "center" || s == "centre" || s == "middle" || s == "center-center" || s == "middle-center" ||
      s == "center-middle")
    return GridCell{GridRow::center, GridCol::center};
  auto dash = s.find('-');
  if (dash == std::string::npos || s.find('-', dash + 1) != std::string::npos) return std::nullopt;
  std::string a = s.substr(0, dash), b = s.substr(dash + 1);
  auto row_of = [](const std::string& w) -> std::optional<GridRow> {
    if (w == "top" || w == "upper") return GridRow::top;
    if (w == "center" || w == "middle" || w == "centre") return GridRow::center;
    if (w == "bottom" || w == "lower") return GridRow::bottom;
    return std::nullopt;
  };
  auto col_of = [](const std::string& w) -> std::optional<GridCol> {
    if (w == "left") return GridCol::left;
    if (w == "center" || w == "middle" || w == "centre") return GridCol::center;
    if (w == "right") return GridCol::right;
    return std::nullopt;
  };
  if (auto r = row_of(a); r)
    if (auto c = col_of(b); c) return GridCell{*r, *c};
  // "left-top" style: column first.
  if (auto c = col_of(a); c)
    if (auto r = row_of(b); r) return GridCell{*r, *c};
  return std::nullopt;
}

std::string to_phrase(const RelationTriple& t) { return t.subject + " " + t.predicate + " " + t.object; }

Point bbox_center(const BoundingBox& b) { return {(b.x_min + b.x_max) / 2.0, (b.y_min + b.y_max) / 2.0}; }

GridCell grid_cell(Point p, int width, int height) {
  if (width <= 0 || height <= 0)
    throw ValidationError("non-positive dimensions", "image",
                          "width and height must be positive, got " + std::to_string(width) + "x" +
                              std::to_string(height));
  std::vector<Violation> bad;
  if (!(p.x >= 0 && p.x <= width))
    bad.push_back({"point out of bounds", "x", "x=" + format_real(p.x) + " outside [0," + std::to_string(width) + "]"});
  if (!(p.y >= 0 && p.y <= height))
    bad.push_back({"point out of bounds", "y", "y=" + format_real(p.y) + " outside [0," + std::to_string(height) + "]"});
  if (!bad.empty()) throw ValidationError(std::move(bad));
  return GridCell{static_cast<GridRow>(third_of(p.y, height)), static_cast<GridCol>(third_of(p.x, width))};
}

std::map<std::string, int> count_by_category(std::span<const ObjectInstance> objects) {
  std::map<std::string, int> counts;
  for (const auto& o : objects) ++counts[o.category];
  return counts;
}

StructuredScene build_structured_scene(const SceneGraph& graph) {
  if (auto bad = find_violations(graph); !bad.empty()) throw ValidationError(std::move(bad));

  StructuredScene scene;
  scene.image_id = graph.image_id;

  std::map<std::string, CategorySummary> by_category;
  std::map<std::string, std::set<int>> cells;
  for (const auto& [category, n] : count_by_category(graph.objects)) {
    by_category[category] = CategorySummary{category, n, {}, {}};
  }
  std::map<std::string, const ObjectInstance*> by_id;
  for (const auto& o : graph.objects) {
    by_id[o.id] = &o;
    cells[o.category].insert(grid_cell(bbox_center(o.bbox), graph.width, graph.height).index());
  }

  std::set<RelationTriple> seen_triples;
  for (const auto& r : graph.relationships) {
    RelationTriple triple{by_id.at(r.subject_id)->category, r.predicate, by_id.at(r.object_id)->category};
    if (seen_triples.insert(triple).second) scene.relation_triples.push_back(triple);
    const std::string phrase = to_phrase(triple);
    for (const auto* category : {&triple.subject, &triple.object}) {
      auto& phrases = by_category.at(*category).relation_phrases;
      if (std::find(phrases.begin(), phrases.end(), phrase) == phrases.end()) phrases.push_back(phrase);
    }
  }

  for (auto& [category, summary] : by_category) {
    for (int index : cells[category]) summary.cells.push_back(GridCell::from_index(index));
    scene.summaries.push_back(std::move(summary));
  }
  return scene;
}

std::vector<Violation> find_violations(const SceneGraph& g) {
  std::vector<Violation> out;
  if (g.image_id.empty()) out.push_back({"missing field", "image_id", "image_id must be non-empty"});
  const bool dims_ok = g.width > 0 && g.height > 0;
  if (!dims_ok)
    out.push_back({"non-positive dimensions", "width/height",
                   std::to_string(g.width) + "x" + std::to_string(g.height)});

  std::unordered_set<std::string> ids;
  for (std::size_t i = 0; i < g.objects.size(); ++i) {
    const auto& o = g.objects[i];
    const std::string where = "objects[" + std::to_string(i) + "]";
    if (o.id.empty()) out.push_back({"missing field", where + ".id", "object id must be non-empty"});
    else if (!ids.insert(o.id).second)
      out.push_back({"duplicate object id", where + ".id", "id '" + o.id + "' already used"});
    check_label(o.category, where + ".category", out);

    const auto& b = o.bbox;
    const double coords[] = {b.x_min, b.y_min, b.x_max, b.y_max};
    if (!std::all_of(std::begin(coords), std::end(coords), [](double c) { return std::isfinite(c) && c >= 0; })) {
      out.push_back({"invalid bbox coordinate", where + ".bbox", "coordinates must be finite and >= 0"});
      continue;
    }
    if (b.x_min > b.x_max || b.y_min > b.y_max) {
      out.push_back({"inverted bbox", where + ".bbox",
                     "[" + format_real(b.x_min) + "," + format_real(b.y_min) + "," + format_real(b.x_max) + "," +
                         format_real(b.y_max) + "]"});
      continue;
    }
    if (dims_ok && (b.x_max > g.width || b.y_max > g.height))
      out.push_back({"bbox out of bounds", where + ".bbox",
                     "box exceeds " + std::to_string(g.width) + "x" + std::to_string(g.height) + " image"});
  }

  for (std::size_t i = 0; i < g.relationships.size(); ++i) {
    const auto& r = g.relationships[i];
    const std::string where = "relationships[" + std::to_string(i) + "]";
    check_label(r.predicate, where + ".predicate", out);
    for (const auto* id : {&r.subject_id, &r.object_id}) {
      if (!ids.contains(*id))
        out.push_back({"dangling reference", where, "object id '" + *id + "' not present in objects"});
    }
    if (r.subject_id == r.object_id)
      out.push_back({"self-loop", where, "subject and object are both '" + r.subject_id + "'"});
  }
  return out;
}

SceneCheck check_scene_graph(const nlohmann::json& raw) {
  SceneCheck check;
  auto& out = check.violations;
  if (!raw.is_object()) {
    out.push_back({"malformed record", "", "scene graph must be a JSON object"});
    return check;
  }

  SceneGraph g;
  if (auto it = raw.find("image_id"); it == raw.end()) {
    out.push_back({"missing field", "image_id", ""});
  } else if (auto id = read_id(*it)) {
    g.image_id = *id;
  } else {
    out.push_back({"malformed record", "image_id", "must be a string or integer"});
  }
  for (auto [key, dst] : {std::pair{"width", &g.width}, std::pair{"height", &g.height}}) {
    auto it = raw.find(key);
    if (it == raw.end()) out.push_back({"missing field", key, ""});
    else if (!it->is_number_integer()) out.push_back({"malformed record", key, "must be an integer"});
    else *dst = it->get<int>();
  }

  if (auto it = raw.find("objects"); it == raw.end() || !it->is_array()) {
    out.push_back({"missing field", "objects", "must be an array"});
  } else {
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& rec = (*it)[i];
      const std::string where = "objects[" + std::to_string(i) + "]";
      if (!rec.is_object()) {
        out.push_back({"malformed record", where, "object must be a JSON object"});
        continue;
      }
      ObjectInstance o;
      auto id = rec.contains("id") ? read_id(rec["id"]) : std::nullopt;
      if (!id) out.push_back({"missing field", where + ".id", "string or integer id required"});
      else o.id = *id;
      if (!rec.contains("category") || !rec["category"].is_string())
        out.push_back({"missing field", where + ".category", "string category required"});
      else o.category = canonical_label(rec["category"].get<std::string>());
      const auto bbox = rec.find("bbox");
      if (bbox == rec.end() || !bbox->is_array() || bbox->size() != 4 ||
          !std::all_of(bbox->begin(), bbox->end(), [](const auto& x) { return x.is_number(); })) {
        out.push_back({"malformed record", where + ".bbox", "bbox must be [x_min, y_min, x_max, y_max]"});
      } else {
        o.bbox = {(*bbox)[0].get<double>(), (*bbox)[1].get<double>(), (*bbox)[2].get<double>(),
                  (*bbox)[3].get<double>()};
      }
      if (auto f = rec.find("feature"); f != rec.end()) o.feature = read_feature(*f, where + ".feature", out);
      g.objects.push_back(std::move(o));
    }
  }

  if (auto it = raw.find("relationships"); it != raw.end()) {
    if (!it->is_array()) {
      out.push_back({"malformed record", "relationships", "must be an array"});
    } else {
      for (std::size_t i = 0; i < it->size(); ++i) {
        const auto& rec = (*it)[i];
        const std::string where = "relationships[" + std::to_string(i) + "]";
        if (!rec.is_object()) {
          out.push_back({"malformed record", where, "relationship must be a JSON object"});
          continue;
        }
        Relationship r;
        auto s = rec.contains("subject_id") ? read_id(rec["subject_id"]) : std::nullopt;
        auto o = rec.contains("object_id") ? read_id(rec["object_id"]) : std::nullopt;
        if (!s) out.push_back({"missing field", where + ".subject_id", ""});
        if (!o) out.push_back({"missing field", where + ".object_id", ""});
        if (!rec.contains("predicate") || !rec["predicate"].is_string()) {
          out.push_back({"missing field", where + ".predicate", ""});
        } else {
          r.predicate = canonical_label(rec["predicate"].get<std::string>());
        }
        if (!s || !o) continue;
        r.subject_id = *s;
        r.object_id = *o;
        if (auto f = rec.find("union_feature"); f != rec.end())
          r.union_feature = read_feature(*f, where + ".union_feature", out);
        g.relationships.push_back(std::move(r));
      }
    }
  }

  if (!out.empty()) return check;
  out = find_violations(g);
  if (out.empty()) check.graph = std::move(g);
  return check;
}

SceneGraph validate_scene_graph(const nlohmann::json& raw) {
  auto check = check_scene_graph(raw);
  if (!check.ok()) throw ValidationError(std::move(check.violations));
  return std::move(*check.graph);
}

SceneGraph load_scene_file(const std::string& path) {
  nlohmann::json raw;
  try {
    raw = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("malformed record", path, e.what());
  }
  return validate_scene_graph(raw);
}

nlohmann::json to_json(const SceneGraph& g) {
  nlohmann::json objects = nlohmann::json::array();
  for (const auto& o : g.objects) {
    nlohmann::json j = {{"id", o.id},
                        {"category", o.category},
                        {"bbox", {o.bbox.x_min, o.bbox.y_min, o.bbox.x_max, o.bbox.y_max}}};
    if (!o.feature.empty()) j["feature"] = o.feature;
    objects.push_back(std::move(j));
  }
  nlohmann::json relationships = nlohmann::json::array();
  for (const auto& r : g.relationships) {
    nlohmann::json j = {{"subject_id", r.subject_id}, {"predicate", r.predicate}, {"object_id", r.object_id}};
    if (!r.union_feature.empty()) j["union_feature"] = r.union_feature;
    relationships.push_back(std::move(j));
  }
  return {{"image_id", g.image_id},
          {"width", g.width},
          {"height", g.height},
          {"objects", std::move(objects)},
          {"relationships", std::move(relationships)}};
}

}  // namespace sgrag
