#include "sgrag/chunking.hpp"

#include <algorithm>

#include "sgrag/text.hpp"

namespace sgrag {

Chunk render_chunk(const CategorySummary& s, const std::string& image_id) {
  std::vector<std::string> cells;
  cells.reserve(s.cells.size());
  for (const auto& c : s.cells) cells.push_back(to_string(c));

  std::string text = s.category + ": " + std::to_string(s.count) + ", location: [" + join(cells, ", ") +
                     "], relationships: ";
  text += s.relation_phrases.empty() ? std::string("none") : join(s.relation_phrases, ", ");
  return Chunk{s.category, std::move(text), image_id};
}

std::vector<Chunk> render_scene(const StructuredScene& scene) {
  std::vector<Chunk> chunks;
  chunks.reserve(scene.summaries.size());
  for (const auto& s : scene.summaries) chunks.push_back(render_chunk(s, scene.image_id));
  std::sort(chunks.begin(), chunks.end(), [](const Chunk& a, const Chunk& b) { return a.category < b.category; });
  return chunks;
}

}  // namespace sgrag
