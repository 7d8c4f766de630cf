#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sgrag/chunking.hpp"

namespace sgrag {

// Prompt skeleton:
//   Based on the information extracted from the image: {DATA}, please answer the following question: {QUESTION}.
inline constexpr std::string_view kPromptPrefix = "Based on the information extracted from the image: ";
inline constexpr std::string_view kPromptInfix = ", please answer the following question: ";
inline constexpr std::string_view kPromptSuffix = ".";
inline constexpr std::string_view kDataJoiner = "; ";
inline constexpr std::string_view kEmptyData = "none";

struct PromptText {
  std::string text;
  std::string data_section;
  std::string question;
  bool operator==(const PromptText&) const = default;
};

/// DATA is the chunk texts in rank order joined by "; ", or "none".
/// Throws ValidationError on an empty question.
PromptText build_prompt(std::span<const Chunk> chunks, const std::string& question);

// Structured-answer evaluation prompt. Reported numbers cite the version.
inline constexpr std::string_view kEvalTemplateVersion = "eval-v1";

/// Question placed in the eval prompt; also the default retrieval query.
extern const std::string kEvalQuestion;

/// Appended after the prompt (separated by a newline); demands the JSON shape
/// that parse_structured_answer reads.
extern const std::string kEvalInstruction;

struct EvalInstructionSchema {
  std::string version{kEvalTemplateVersion};
  std::vector<std::string> attributes{"category", "quantity", "location", "relationship"};
};

/// build_prompt(chunks, kEvalQuestion) + "\n" + kEvalInstruction. Throws
/// ValidationError unless the schema lists exactly the four attributes.
PromptText build_eval_prompt(std::span<const Chunk> chunks, const EvalInstructionSchema& schema = {});

}  // namespace sgrag
