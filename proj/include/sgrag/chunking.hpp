#pragma once

#include <string>
#include <vector>

#include "sgrag/scene_model.hpp"

namespace sgrag {

/// One category's text rendering:
///   <category>: <count>, location: [<cell>{, <cell>}], relationships: <phrase>{, <phrase>}
/// with "relationships: none" when the category has no phrases.
/// Full grammar in docs/chunk_grammar.md.
struct Chunk {
  std::string category;
  std::string text;
  std::string source_image;
  bool operator==(const Chunk&) const = default;
};

Chunk render_chunk(const CategorySummary& summary, const std::string& image_id);

/// One chunk per summary, ascending by category.
std::vector<Chunk> render_scene(const StructuredScene& scene);

}  // namespace sgrag
