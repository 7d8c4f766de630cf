#include <gtest/gtest.h>

#include "sgrag/error.hpp"
#include "sgrag/generation.hpp"

using namespace sgrag;

namespace {
Chunk chunk(const std::string& text) { return {text.substr(0, text.find(':')), text, "img"}; }
}  // namespace

TEST(Prompt, PopulatedCase) {
  const std::vector<Chunk> chunks = {chunk("car: 3, location: [center], relationships: none")};
  const auto p = build_prompt(chunks, "How many cars?");
  EXPECT_EQ(p.text,
            "Based on the information extracted from the image: car: 3, location: [center], relationships: none, "
            "please answer the following question: How many cars?.");
  EXPECT_EQ(p.data_section, "car: 3, location: [center], relationships: none");
  EXPECT_EQ(p.question, "How many cars?");
}

TEST(Prompt, EmptyRetrievalUsesNone) {
  const auto p = build_prompt({}, "What is here?");
  EXPECT_EQ(p.text,
            "Based on the information extracted from the image: none, please answer the following question: "
            "What is here?.");
}

TEST(Prompt, MultipleChunksJoinInRankOrder) {
  const std::vector<Chunk> chunks = {chunk("b: 1, location: [top-left], relationships: none"),
                                     chunk("a: 2, location: [center], relationships: a near b")};
  EXPECT_EQ(build_prompt(chunks, "Q").text,
            "Based on the information extracted from the image: b: 1, location: [top-left], relationships: none; "
            "a: 2, location: [center], relationships: a near b, please answer the following question: Q.");
}

TEST(Prompt, EmptyQuestionIsRejected) { EXPECT_THROW(build_prompt({}, ""), ValidationError); }

TEST(EvalPrompt, AppendsVersionedInstruction) {
  const auto p = build_eval_prompt({});
  EXPECT_EQ(p.text, build_prompt({}, kEvalQuestion).text + "\n" + kEvalInstruction);
  EXPECT_NE(kEvalInstruction.find("\"objects\""), std::string::npos);
  for (const char* cell : {"top-left", "center", "bottom-right"}) EXPECT_NE(kEvalInstruction.find(cell), std::string::npos);
}

TEST(EvalPrompt, SchemaMustListAllAttributes) {
  EvalInstructionSchema schema;
  schema.attributes.pop_back();
  EXPECT_THROW(build_eval_prompt({}, schema), ValidationError);
  schema = {};
  schema.version = "eval-v0";
  EXPECT_THROW(build_eval_prompt({}, schema), ValidationError);
}
