#include "sgrag/generation.hpp"

#include <algorithm>

#include "sgrag/error.hpp"

namespace sgrag {

const std::string kEvalQuestion =
    "List every object category in the image with its number of instances, the grid regions where it appears, "
    "and the relationships between the objects";

const std::string kEvalInstruction =
    "Respond with one JSON object and no other text, in exactly this shape: "
    "{\"objects\": [{\"category\": \"<category>\", \"count\": <integer>, \"locations\": [\"<region>\"]}], "
    "\"relationships\": [[\"<subject category>\", \"<predicate>\", \"<object category>\"]]}. "
    "Each region must be one of: top-left, top-center, top-right, center-left, center, center-right, "
    "bottom-left, bottom-center, bottom-right.";

PromptText build_prompt(std::span<const Chunk> chunks, const std::string& question) {
  if (question.empty()) throw ValidationError("empty question", "question", "question must be non-empty");
  PromptText p;
  p.question = question;
  if (chunks.empty()) {
    p.data_section = kEmptyData;
  } else {
    for (std::size_t i = 0; i < chunks.size(); ++i) {
      if (i) p.data_section += kDataJoiner;
      p.data_section += chunks[i].text;
    }
  }
  p.text.reserve(kPromptPrefix.size() + p.data_section.size() + kPromptInfix.size() + question.size() + 1);
  p.text.append(kPromptPrefix).append(p.data_section).append(kPromptInfix).append(question).append(kPromptSuffix);
  return p;
}

PromptText build_eval_prompt(std::span<const Chunk> chunks, const EvalInstructionSchema& schema) {
  std::vector<std::string> want{"category", "quantity", "location", "relationship"};
  std::vector<std::string> got = schema.attributes;
  std::sort(want.begin(), want.end());
  std::sort(got.begin(), got.end());
  if (got != want)
    throw ValidationError("invalid schema", "attributes",
                          "eval schema must list category, quantity, location and relationship");
  if (schema.version != kEvalTemplateVersion)
    throw ValidationError("invalid schema", "version", "unsupported eval template '" + schema.version + "'");
  PromptText p = build_prompt(chunks, kEvalQuestion);
  p.text.append("\n").append(kEvalInstruction);
  return p;
}

}  // namespace sgrag
