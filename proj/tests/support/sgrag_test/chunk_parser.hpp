#pragma once

// Test-side reader for chunk strings. Written against the grammar in
// docs/chunk_grammar.md without reusing any library code, so round-trip
// checks compare two independent implementations.

#include <optional>
#include <string>
#include <vector>

namespace sgrag_test {

struct ParsedChunk {
  std::string category;
  long count = 0;
  std::vector<std::string> cells;
  std::vector<std::string> relationships;  // empty when the chunk says "none"
};

std::optional<ParsedChunk> parse_chunk(const std::string& text);

}  // namespace sgrag_test
