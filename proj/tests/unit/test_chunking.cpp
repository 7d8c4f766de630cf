#include <gtest/gtest.h>

#include <random>

#include "sgrag/chunking.hpp"
#include "sgrag_test/chunk_parser.hpp"
#include "sgrag_test/temp_dir.hpp"

using namespace sgrag;

namespace {

SceneGraph random_scene(std::mt19937& rng, int n) {
  static const std::vector<std::string> cats = {"car", "traffic light", "man", "tree", "dog", "street sign"};
  static const std::vector<std::string> preds = {"near", "in", "on top of", "holding", "behind"};
  SceneGraph g;
  g.image_id = "gen" + std::to_string(n);
  g.width = 50 + static_cast<int>(rng() % 600);
  g.height = 50 + static_cast<int>(rng() % 600);
  const int objects = static_cast<int>(rng() % 10);
  for (int i = 0; i < objects; ++i) {
    std::uniform_real_distribution<double> ux(0, g.width), uy(0, g.height);
    double x0 = ux(rng), x1 = ux(rng), y0 = uy(rng), y1 = uy(rng);
    g.objects.push_back({"o" + std::to_string(i), cats[rng() % cats.size()],
                         {std::min(x0, x1), std::min(y0, y1), std::max(x0, x1), std::max(y0, y1)}, {}});
  }
  if (objects >= 2) {
    const int rels = static_cast<int>(rng() % 6);
    for (int r = 0; r < rels; ++r) {
      const auto s = rng() % objects;
      auto o = rng() % objects;
      if (o == s) o = (o + 1) % objects;
      g.relationships.push_back({"o" + std::to_string(s), preds[rng() % preds.size()], "o" + std::to_string(o), {}});
    }
  }
  return g;
}

}  // namespace

TEST(Chunking, ExemplarMatchesGoldenFile) {
  const auto scene = build_structured_scene(load_scene_file(SGRAG_FIXTURES "/exemplar_scene.json"));
  const auto chunks = render_scene(scene);
  ASSERT_FALSE(chunks.empty());
  EXPECT_EQ(chunks[0].category, "car");
  EXPECT_EQ(chunks[0].text, sgrag_test::slurp(SGRAG_FIXTURES "/golden/exemplar_car_chunk.txt"));
  EXPECT_EQ(chunks[0].source_image, "exemplar");
}

TEST(Chunking, NoRelationshipsRendersNone) {
  CategorySummary s{"tree", 1, {GridCell{GridRow::top, GridCol::right}}, {}};
  EXPECT_EQ(render_chunk(s, "x").text, "tree: 1, location: [top-right], relationships: none");
}

TEST(Chunking, ChunksFollowCategoryOrder) {
  StructuredScene s;
  s.image_id = "i";
  s.summaries = {{"apple", 1, {GridCell{}}, {}}, {"zebra", 2, {GridCell{}}, {}}};
  const auto chunks = render_scene(s);
  ASSERT_EQ(chunks.size(), 2u);
  EXPECT_EQ(chunks[0].category, "apple");
  EXPECT_EQ(chunks[1].category, "zebra");
  EXPECT_TRUE(render_scene(StructuredScene{"e", {}, {}}).empty());
}

TEST(Chunking, GrammarRoundTripsOnGeneratedScenes) {
  std::mt19937 rng(2024);
  for (int n = 0; n < 1000; ++n) {
    const auto scene = build_structured_scene(random_scene(rng, n));
    const auto chunks = render_scene(scene);
    ASSERT_EQ(chunks.size(), scene.summaries.size());
    for (std::size_t i = 0; i < chunks.size(); ++i) {
      const auto& sum = scene.summaries[i];
      const auto parsed = sgrag_test::parse_chunk(chunks[i].text);
      ASSERT_TRUE(parsed) << chunks[i].text;
      EXPECT_EQ(parsed->category, sum.category);
      EXPECT_EQ(parsed->count, sum.count);
      ASSERT_EQ(parsed->cells.size(), sum.cells.size());
      for (std::size_t c = 0; c < sum.cells.size(); ++c) EXPECT_EQ(parsed->cells[c], to_string(sum.cells[c]));
      EXPECT_EQ(parsed->relationships, sum.relation_phrases);
    }
  }
}
