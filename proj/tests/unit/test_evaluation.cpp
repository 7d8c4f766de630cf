#include <gtest/gtest.h>

#include "sgrag/error.hpp"
#include "sgrag/evaluation.hpp"

using namespace sgrag;
using namespace sgrag::eval;

namespace {

// truth: 3 cars in {center-left, center}, 1 tree in {top-right},
// relations (car near tree), (man in car); 1 man in {center}.
StructuredScene exemplar_truth() {
  SceneGraph g;
  g.image_id = "ex";
  g.width = g.height = 300;
  g.objects = {{"c1", "car", {10, 110, 60, 160}, {}},
               {"c2", "car", {20, 120, 80, 180}, {}},
               {"c3", "car", {120, 120, 180, 180}, {}},
               {"t", "tree", {200, 0, 280, 90}, {}},
               {"m", "man", {130, 130, 160, 170}, {}}};
  g.relationships = {{"c1", "near", "t", {}}, {"m", "in", "c3", {}}};
  return build_structured_scene(g);
}

const AttributeScores& at(const ImageResult& r, Attribute a) { return r.scores[static_cast<int>(a)]; }

}  // namespace

TEST(F1, HandValues) {
  EXPECT_DOUBLE_EQ(f1(0.6, 0.3), 0.4);
  EXPECT_DOUBLE_EQ(f1(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(f1(1, 1), 1.0);
  EXPECT_THROW(f1(1.2, 0.5), std::invalid_argument);
  EXPECT_THROW(f1(0.5, -0.1), std::invalid_argument);
}

TEST(OverallScore, ThresholdIsInclusive) {
  std::map<ClassKey, double> r = {{{Attribute::category, "a"}, 0.6},
                                  {{Attribute::category, "b"}, 0.55},
                                  {{Attribute::category, "c"}, 0.5}};
  EXPECT_DOUBLE_EQ(overall_score(r), 2.0 / 3.0);
  EXPECT_THROW(overall_score({}), std::invalid_argument);
}

TEST(AnswerParser, ReadsObjectsAndRelations) {
  const auto p = parse_structured_answer(R"(Sure! Here is the summary:
```json
{"objects": [{"category": "Car", "count": 3, "locations": ["center-left", "middle", "nowhere"]},
             {"category": "tree", "quantity": "1", "location": "top right"},
             {"category": "man"}],
 "relationships": [["man", "in", "car"], {"subject": "car", "predicate": "near", "object": "tree"}]}
```)");
  EXPECT_TRUE(p.parse_ok);
  ASSERT_EQ(p.categories.size(), 3u);
  EXPECT_EQ(p.categories.at("car"), 3);
  EXPECT_EQ(p.categories.at("tree"), 1);
  EXPECT_FALSE(p.categories.at("man").has_value());
  EXPECT_EQ(p.locations.at("car").size(), 2u);
  EXPECT_EQ(p.locations.at("tree").count(GridCell{GridRow::top, GridCol::right}), 1u);
  EXPECT_FALSE(p.locations.contains("man"));
  EXPECT_EQ(p.relations.size(), 2u);
  EXPECT_TRUE(p.relations.contains(RelationTriple{"man", "in", "car"}));
}

TEST(AnswerParser, ProseIsAParseFailure) {
  const auto p = parse_structured_answer("There are three cars near a tree.");
  EXPECT_FALSE(p.parse_ok);
  EXPECT_TRUE(p.categories.empty());
  EXPECT_FALSE(parse_structured_answer("{\"objects\": [").parse_ok);
  EXPECT_FALSE(parse_structured_answer("{\"answer\": 3}").parse_ok);
}

TEST(AnswerParser, SkipsEarlierObjectsWithoutObjectsArray) {
  const auto p = parse_structured_answer(R"({"note": "x {"} then {"objects": [{"category": "dog", "count": 2}]})");
  EXPECT_TRUE(p.parse_ok);
  EXPECT_EQ(p.categories.at("dog"), 2);
}

TEST(AnswerParser, SynonymsCanonicalize) {
  auto syn = LabelCanonicalizer::parse("# comment\nautomobile = car\nMen = man\n");
  EXPECT_EQ(syn.size(), 2u);
  EXPECT_EQ(syn("  Automobile "), "car");
  EXPECT_EQ(syn("tree"), "tree");
  const auto p = parse_structured_answer(R"({"objects": [{"category": "automobile", "count": 1}]})", syn);
  EXPECT_TRUE(p.categories.contains("car"));
}

TEST(AttributeScores, HandComputedImage) {
  const auto truth = exemplar_truth();
  auto pred = parse_structured_answer(R"({"objects": [
      {"category": "car", "count": 2, "locations": ["center-left", "bottom-left"]},
      {"category": "tree", "count": 1, "locations": ["top-right"]},
      {"category": "bus", "count": 1, "locations": ["center"]}],
    "relationships": [["car", "near", "tree"], ["bus", "near", "car"]]})");
  pred.image_id = "ex";
  const auto r = evaluate_image(pred, truth);
  // categories: truth {car, man, tree}, predicted {bus, car, tree}: 2 matched
  EXPECT_EQ(at(r, Attribute::category).tally, (Tally{2, 3, 3}));
  // quantity: tree right, car wrong
  EXPECT_EQ(at(r, Attribute::quantity).tally, (Tally{1, 3, 3}));
  // location: truth cells car 2 + man 1 + tree 1 = 4; predicted 2 + 1 + 1 = 4; matched car center-left, tree
  EXPECT_EQ(at(r, Attribute::location).tally, (Tally{2, 4, 4}));
  EXPECT_EQ(at(r, Attribute::relationship).tally, (Tally{1, 2, 2}));
  EXPECT_DOUBLE_EQ(at(r, Attribute::category).recall, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(at(r, Attribute::quantity).f1, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(at(r, Attribute::location).precision, 0.5);
  EXPECT_EQ(r.class_tallies.at({Attribute::location, "car"}), (Tally{1, 2, 0}));
  EXPECT_EQ(r.class_tallies.at({Attribute::relationship, "in"}), (Tally{0, 1, 0}));
}

TEST(AttributeScores, EmptyDenominators) {
  StructuredScene truth{"e", {}, {}};
  PredictedScene pred;
  pred.image_id = "e";
  pred.categories["car"] = 1;
  const auto s = attribute_scores(pred, truth, Attribute::category);
  EXPECT_FALSE(s.defined);
  EXPECT_EQ(s.recall, 0.0);

  const auto t = exemplar_truth();
  PredictedScene none;
  none.image_id = "ex";
  const auto n = attribute_scores(none, t, Attribute::category);
  EXPECT_TRUE(n.defined);
  EXPECT_EQ(n.precision, 0.0);
  EXPECT_EQ(n.f1, 0.0);
  none.image_id = "other";
  EXPECT_THROW(attribute_scores(none, t, Attribute::category), ValidationError);
}

TEST(Aggregate, PerImageAndPooledMeans) {
  const auto truth = exemplar_truth();
  PredictedScene perfect;
  perfect.image_id = "ex";
  perfect.parse_ok = true;
  perfect.categories = {{"car", 3}, {"man", 1}, {"tree", 1}};
  auto good = evaluate_image(perfect, truth);
  auto bad = failed_image(truth, "backend down");

  const auto per_image = aggregate({good, bad});
  EXPECT_EQ(per_image.parse_failures, 1u);
  EXPECT_DOUBLE_EQ(per_image.means[0].recall, 0.5);
  EXPECT_DOUBLE_EQ(per_image.means[0].precision, 0.5);
  // location: perfect gave no cells
  EXPECT_DOUBLE_EQ(per_image.means[2].recall, 0.0);

  EvalOptions pooled_opts;
  pooled_opts.averaging = Averaging::pooled;
  const auto pooled = aggregate({good, bad}, pooled_opts);
  EXPECT_DOUBLE_EQ(pooled.means[0].recall, 0.5);  // 3 of 6
  EXPECT_DOUBLE_EQ(pooled.means[0].precision, 1.0);  // 3 of 3

  // classes: category x3, quantity x3, location x3, relationship x2 = 11
  EXPECT_EQ(per_image.classes_total, 11u);
  // category/quantity classes sit at 1/2 recall, below 0.55
  EXPECT_EQ(per_image.classes_passing, 0u);
  EXPECT_THROW(aggregate({}), std::invalid_argument);
}

TEST(Aggregate, MacroPoolingAveragesPerImageRecalls) {
  const auto truth = exemplar_truth();
  PredictedScene p;
  p.image_id = "ex";
  p.parse_ok = true;
  p.locations["car"] = {GridCell{GridRow::center, GridCol::left}};
  const auto half = evaluate_image(p, truth);  // car location recall 1/2
  p.locations["car"].insert(GridCell{});
  const auto full = evaluate_image(p, truth);  // car location recall 1
  EvalOptions macro;
  macro.pooling = ClassPooling::macro;
  const auto m = aggregate({half, full, full}, macro);
  const auto micro = aggregate({half, full, full});
  auto car_loc = [](const MetricsReport& r) {
    for (const auto& c : r.class_recalls)
      if (c.attribute == Attribute::location && c.label == "car") return c.recall;
    return -1.0;
  };
  EXPECT_DOUBLE_EQ(car_loc(m), (0.5 + 1 + 1) / 3);
  EXPECT_DOUBLE_EQ(car_loc(micro), 5.0 / 6.0);
}

TEST(Aggregate, NoClassesGivesZeroOverall) {
  StructuredScene empty{"e", {}, {}};
  PredictedScene p;
  p.image_id = "e";
  const auto r = aggregate({evaluate_image(p, empty)});
  EXPECT_EQ(r.classes_total, 0u);
  EXPECT_EQ(r.overall_score, 0.0);
  EXPECT_EQ(r.means[0].images, 0u);
  EXPECT_TRUE(to_json(r)["means"]["category"]["recall"].is_null());
}

TEST(Report, JsonRoundsAndTableRenders) {
  const auto truth = exemplar_truth();
  PredictedScene p;
  p.image_id = "ex";
  p.parse_ok = true;
  p.categories = {{"car", 3}, {"tree", 2}};
  EvalOptions opts;
  opts.template_version = "eval-v1";
  const auto r = aggregate({evaluate_image(p, truth)}, opts);
  const auto j = to_json(r);
  EXPECT_EQ(j["template_version"], "eval-v1");
  EXPECT_EQ(j["means"]["category"]["recall"].get<double>(), 0.6667);
  EXPECT_EQ(j["means"]["quantity"]["f1"].get<double>(), 0.4);
  const auto table = render_table(r);
  EXPECT_NE(table.find("| Recall    |   0.6667 |"), std::string::npos) << table;
  EXPECT_NE(table.find("Overall score:"), std::string::npos);
  EXPECT_NE(table.find("Relationship"), std::string::npos);
}
