#include <cmath>
#include <sstream>

#include "sgrag/error.hpp"
#include "sgrag/evaluation.hpp"
#include "sgrag/text.hpp"

namespace sgrag::eval {

namespace {

// End (one past) of the balanced {...} starting at `open`, or npos.
std::size_t balanced_end(std::string_view text, std::size_t open) {
  int depth = 0;
  bool in_string = false, escaped = false;
  for (std::size_t i = open; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (escaped) escaped = false;
      else if (c == '\\') escaped = true;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return i + 1;
  }
  return std::string_view::npos;
}

std::optional<int> read_count(const nlohmann::json& v) {
  double x = 0;
  if (v.is_number()) {
    x = v.get<double>();
  } else if (v.is_string()) {
    try {
      std::size_t used = 0;
      const std::string s = v.get<std::string>();
      x = std::stod(s, &used);
      if (used != s.size()) return std::nullopt;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  } else {
    return std::nullopt;
  }
  if (!std::isfinite(x) || x < 1 || x != std::floor(x) || x > 1e9) return std::nullopt;
  return static_cast<int>(x);
}

std::optional<std::string> read_label(const nlohmann::json& v, const LabelCanonicalizer& canonicalize) {
  if (!v.is_string()) return std::nullopt;
  auto label = canonicalize(v.get<std::string>());
  if (label.empty()) return std::nullopt;
  return label;
}

bool read_block(const nlohmann::json& block, const LabelCanonicalizer& canonicalize, PredictedScene& out) {
  if (!block.is_object()) return false;
  const auto objects = block.find("objects");
  if (objects == block.end() || !objects->is_array()) return false;

  for (const auto& item : *objects) {
    if (!item.is_object() || !item.contains("category")) continue;
    auto category = read_label(item["category"], canonicalize);
    if (!category) continue;

    std::optional<int> count;
    for (const char* key : {"count", "quantity"})
      if (item.contains(key)) count = read_count(item[key]);
    auto& slot = out.categories[*category];
    if (count) slot = slot.value_or(0) + *count;

    auto& cells = out.locations[*category];
    nlohmann::json locations = item.value("locations", item.value("location", nlohmann::json::array()));
    if (locations.is_string()) locations = nlohmann::json::array({locations});
    if (locations.is_array())
      for (const auto& loc : locations)
        if (loc.is_string())
          if (auto cell = parse_grid_cell(loc.get<std::string>())) cells.insert(*cell);
  }
  for (auto it = out.locations.begin(); it != out.locations.end();) {
    it = it->second.empty() ? out.locations.erase(it) : std::next(it);
  }

  if (auto rels = block.find("relationships"); rels != block.end() && rels->is_array()) {
    for (const auto& r : *rels) {
      std::optional<std::string> s, p, o;
      if (r.is_array() && r.size() == 3) {
        s = read_label(r[0], canonicalize);
        p = read_label(r[1], canonicalize);
        o = read_label(r[2], canonicalize);
      } else if (r.is_object()) {
        if (r.contains("subject")) s = read_label(r["subject"], canonicalize);
        if (r.contains("predicate")) p = read_label(r["predicate"], canonicalize);
        if (r.contains("object")) o = read_label(r["object"], canonicalize);
      }
      if (s && p && o) out.relations.insert({*s, *p, *o});
    }
  }
  out.parse_ok = true;
  return true;
}

}  // namespace

LabelCanonicalizer LabelCanonicalizer::load(const std::string& path) { return parse(read_file(path)); }

LabelCanonicalizer LabelCanonicalizer::parse(const std::string& text) {
  LabelCanonicalizer c;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("malformed synonym file", "line " + std::to_string(line_no), "expected 'variant = canonical'");
    const auto variant = canonical_label(line.substr(0, eq));
    const auto canonical = canonical_label(line.substr(eq + 1));
    if (variant.empty() || canonical.empty())
      throw ValidationError("malformed synonym file", "line " + std::to_string(line_no), "empty label");
    c.add(variant, canonical);
  }
  return c;
}

void LabelCanonicalizer::add(std::string_view variant, std::string_view canonical) {
  synonyms_[canonical_label(variant)] = canonical_label(canonical);
}

std::string LabelCanonicalizer::operator()(std::string_view raw) const {
  auto label = canonical_label(raw);
  if (auto it = synonyms_.find(label); it != synonyms_.end()) return it->second;
  return label;
}

PredictedScene parse_structured_answer(std::string_view text, const LabelCanonicalizer& canonicalize) {
  for (std::size_t open = text.find('{'); open != std::string_view::npos; open = text.find('{', open + 1)) {
    const auto end = balanced_end(text, open);
    if (end == std::string_view::npos) continue;
    const auto block = nlohmann::json::parse(text.substr(open, end - open), nullptr, /*allow_exceptions=*/false);
    if (block.is_discarded()) continue;
    PredictedScene scene;
    if (read_block(block, canonicalize, scene)) return scene;
  }
  return PredictedScene{};
}

}  // namespace sgrag::eval
