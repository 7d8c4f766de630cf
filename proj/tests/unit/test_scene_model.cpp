#include <gtest/gtest.h>

#include <random>

#include "sgrag/scene_model.hpp"
#include "sgrag/text.hpp"

using namespace sgrag;

namespace {

// Exact third-boundary comparison: 3x < W is the first third, 3x < 2W the second.
int third_of(double v, int extent) {
  if (3 * v < extent) return 0;
  if (3 * v < 2.0 * extent) return 1;
  return 2;
}

SceneGraph two_car_scene() {
  SceneGraph g;
  g.image_id = "img";
  g.width = 90;
  g.height = 60;
  g.objects = {{"a", "car", {0, 0, 20, 10}, {}},
               {"b", "car", {60, 40, 90, 60}, {}},
               {"c", "tree", {30, 20, 60, 40}, {}}};
  g.relationships = {{"a", "near", "c", {}}, {"b", "near", "c", {}}};
  return g;
}

bool has_code(const std::vector<Violation>& vs, const std::string& code) {
  for (const auto& v : vs)
    if (v.code == code) return true;
  return false;
}

}  // namespace

TEST(GridCell, MatchesThirdBoundaryOracleOnLattice) {
  for (int w : {3, 10, 30, 31, 640}) {
    for (int h : {3, 7, 30, 480}) {
      for (int i = 0; i <= 40; ++i) {
        for (int j = 0; j <= 40; ++j) {
          const double x = w * i / 40.0, y = h * j / 40.0;
          const auto cell = grid_cell({x, y}, w, h);
          EXPECT_EQ(static_cast<int>(cell.col), third_of(x, w)) << x << "/" << w;
          EXPECT_EQ(static_cast<int>(cell.row), third_of(y, h)) << y << "/" << h;
        }
      }
    }
  }
}

TEST(GridCell, BoundariesBelongToTheLaterThird) {
  EXPECT_EQ(to_string(grid_cell({10, 10}, 30, 30)), "center");
  EXPECT_EQ(to_string(grid_cell({9.999, 9.999}, 30, 30)), "top-left");
  EXPECT_EQ(to_string(grid_cell({20, 0}, 30, 30)), "top-right");
  EXPECT_EQ(to_string(grid_cell({30, 30}, 30, 30)), "bottom-right");
  EXPECT_EQ(to_string(grid_cell({0, 15}, 30, 30)), "center-left");
}

TEST(GridCell, RejectsOutOfBoundsAndBadDimensions) {
  EXPECT_THROW(grid_cell({-0.5, 1}, 30, 30), ValidationError);
  EXPECT_THROW(grid_cell({1, 30.5}, 30, 30), ValidationError);
  EXPECT_THROW(grid_cell({1, 1}, 0, 30), ValidationError);
  try {
    grid_cell({31, 1}, 30, 30);
    FAIL();
  } catch (const ValidationError& e) {
    ASSERT_EQ(e.violations().size(), 1u);
    EXPECT_EQ(e.violations()[0].where, "x");
  }
}

TEST(GridCell, NamesRoundTripAndVariantsParse) {
  for (int i = 0; i < 9; ++i) {
    const auto cell = GridCell::from_index(i);
    EXPECT_EQ(cell.index(), i);
    EXPECT_EQ(parse_grid_cell(to_string(cell)), cell);
  }
  EXPECT_EQ(parse_grid_cell("Center-Center"), GridCell{});
  EXPECT_EQ(parse_grid_cell("middle"), GridCell{});
  EXPECT_EQ(parse_grid_cell("top left"), (GridCell{GridRow::top, GridCol::left}));
  EXPECT_EQ(parse_grid_cell("BOTTOM_right"), (GridCell{GridRow::bottom, GridCol::right}));
  EXPECT_EQ(parse_grid_cell("left-top"), (GridCell{GridRow::top, GridCol::left}));
  EXPECT_EQ(parse_grid_cell("upper-middle"), (GridCell{GridRow::top, GridCol::center}));
  EXPECT_FALSE(parse_grid_cell("left").has_value());
  EXPECT_FALSE(parse_grid_cell("top-bottom").has_value());
  EXPECT_FALSE(parse_grid_cell("a-b-c").has_value());
}

TEST(SceneModel, BoxCenterIsCornerMean) {
  EXPECT_EQ(bbox_center({10, 20, 30, 60}), (Point{20, 40}));
}

TEST(SceneModel, CountsByCategory) {
  std::vector<ObjectInstance> objs = {{"1", "car", {}, {}}, {"2", "car", {}, {}}, {"3", "car", {}, {}}};
  EXPECT_EQ(count_by_category(objs), (std::map<std::string, int>{{"car", 3}}));
  EXPECT_TRUE(count_by_category({}).empty());
}

TEST(SceneModel, StructuredSceneFromExemplar) {
  const auto graph = load_scene_file(SGRAG_FIXTURES "/exemplar_scene.json");
  const auto s = build_structured_scene(graph);
  ASSERT_EQ(s.summaries.size(), 3u);
  EXPECT_EQ(s.summaries[0].category, "car");
  EXPECT_EQ(s.summaries[1].category, "man");
  EXPECT_EQ(s.summaries[2].category, "tree");

  const auto& car = s.summaries[0];
  EXPECT_EQ(car.count, 3);
  ASSERT_EQ(car.cells.size(), 2u);
  EXPECT_EQ(to_string(car.cells[0]), "center-left");
  EXPECT_EQ(to_string(car.cells[1]), "center");
  EXPECT_EQ(car.relation_phrases, (std::vector<std::string>{"car near tree", "man in car"}));
  EXPECT_EQ(s.summaries[2].relation_phrases, (std::vector<std::string>{"car near tree"}));
  EXPECT_EQ(s.relation_triples.size(), 2u);
}

TEST(SceneModel, PhrasesAreDeduplicatedPerCategory) {
  const auto s = build_structured_scene(two_car_scene());
  ASSERT_EQ(s.summaries.size(), 2u);
  EXPECT_EQ(s.summaries[0].relation_phrases, (std::vector<std::string>{"car near tree"}));
  EXPECT_EQ(s.summaries[1].relation_phrases, (std::vector<std::string>{"car near tree"}));
  EXPECT_EQ(s.relation_triples.size(), 1u);
}

TEST(SceneModel, EmptySceneHasNoSummaries) {
  SceneGraph g;
  g.image_id = "empty";
  g.width = g.height = 10;
  const auto s = build_structured_scene(g);
  EXPECT_TRUE(s.summaries.empty());
  EXPECT_EQ(s.image_id, "empty");
}

TEST(SceneModel, ViolationsAreAllReported) {
  auto g = two_car_scene();
  g.objects.push_back({"a", "bus", {5, 5, 6, 6}, {}});         // duplicate id
  g.objects.push_back({"d", "bus", {50, 10, 40, 20}, {}});     // inverted
  g.objects.push_back({"e", "bus", {50, 10, 95, 20}, {}});     // exceeds width
  g.relationships.push_back({"a", "on", "zzz", {}});           // dangling
  g.relationships.push_back({"c", "on", "c", {}});             // self-loop
  const auto vs = find_violations(g);
  EXPECT_TRUE(has_code(vs, "duplicate object id"));
  EXPECT_TRUE(has_code(vs, "inverted bbox"));
  EXPECT_TRUE(has_code(vs, "bbox out of bounds"));
  EXPECT_TRUE(has_code(vs, "dangling reference"));
  EXPECT_TRUE(has_code(vs, "self-loop"));
  EXPECT_THROW(build_structured_scene(g), ValidationError);
  EXPECT_TRUE(find_violations(two_car_scene()).empty());
}

TEST(SceneModel, LabelsThatBreakTheChunkGrammarAreRejected) {
  auto g = two_car_scene();
  g.objects[0].category = "car, red";
  EXPECT_TRUE(has_code(find_violations(g), "invalid label"));
  g = two_car_scene();
  g.relationships[0].predicate = "";
  EXPECT_TRUE(has_code(find_violations(g), "empty label"));
}

TEST(SceneModel, JsonCheckCollectsMissingFields) {
  const auto raw = nlohmann::json::parse(R"({"width": 10, "objects": [{"id": 1, "bbox": [0, 0, 1]}]})");
  const auto check = check_scene_graph(raw);
  EXPECT_FALSE(check.ok());
  EXPECT_TRUE(has_code(check.violations, "missing field"));
  EXPECT_GE(check.violations.size(), 3u);
  EXPECT_THROW(validate_scene_graph(raw), ValidationError);
}

TEST(SceneModel, JsonAcceptsIntegerIdsAndCanonicalizesLabels) {
  const auto raw = nlohmann::json::parse(R"({
    "image_id": 7, "width": 10, "height": 10,
    "objects": [{"id": 1, "category": "  Traffic  Light", "bbox": [0, 0, 2, 2]},
                {"id": 2, "category": "pole", "bbox": [1, 1, 3, 9]}],
    "relationships": [{"subject_id": 1, "predicate": "ON", "object_id": 2}]})");
  const auto g = validate_scene_graph(raw);
  EXPECT_EQ(g.image_id, "7");
  EXPECT_EQ(g.objects[0].id, "1");
  EXPECT_EQ(g.objects[0].category, "traffic light");
  EXPECT_EQ(g.relationships[0].predicate, "on");
}

TEST(SceneModel, JsonRoundTrip) {
  auto g = two_car_scene();
  g.objects[0].feature = {0.5, -1.25};
  g.relationships[0].union_feature = {3.0};
  const auto back = validate_scene_graph(to_json(g));
  EXPECT_EQ(to_json(back), to_json(g));
}

TEST(SceneModel, PropertiesOnRandomScenes) {
  std::mt19937 rng(11);
  const std::vector<std::string> cats = {"car", "tree", "man", "dog", "sign"};
  for (int trial = 0; trial < 300; ++trial) {
    SceneGraph g;
    g.image_id = "r" + std::to_string(trial);
    g.width = 1 + static_cast<int>(rng() % 500);
    g.height = 1 + static_cast<int>(rng() % 500);
    const int n = static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      std::uniform_real_distribution<double> ux(0, g.width), uy(0, g.height);
      double x0 = ux(rng), x1 = ux(rng), y0 = uy(rng), y1 = uy(rng);
      g.objects.push_back({std::to_string(i), cats[rng() % cats.size()],
                           {std::min(x0, x1), std::min(y0, y1), std::max(x0, x1), std::max(y0, y1)}, {}});
    }
    const auto s = build_structured_scene(g);
    int total = 0;
    for (std::size_t i = 0; i < s.summaries.size(); ++i) {
      const auto& sum = s.summaries[i];
      total += sum.count;
      if (i) EXPECT_LT(s.summaries[i - 1].category, sum.category);
      EXPECT_FALSE(sum.cells.empty());
      EXPECT_LE(sum.cells.size(), static_cast<std::size_t>(sum.count));
      for (std::size_t c = 1; c < sum.cells.size(); ++c) EXPECT_LT(sum.cells[c - 1], sum.cells[c]);
    }
    EXPECT_EQ(total, n);
  }
}
