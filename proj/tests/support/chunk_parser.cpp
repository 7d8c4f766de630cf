#include "sgrag_test/chunk_parser.hpp"

#include <cctype>

namespace sgrag_test {

namespace {

bool eat(const std::string& s, std::size_t& pos, const std::string& lit) {
  if (s.compare(pos, lit.size(), lit) != 0) return false;
  pos += lit.size();
  return true;
}

std::vector<std::string> split(const std::string& s, const std::string& sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto at = s.find(sep, start);
    if (at == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, at - start));
    start = at + sep.size();
  }
}

}  // namespace

std::optional<ParsedChunk> parse_chunk(const std::string& text) {
  ParsedChunk c;
  std::size_t pos = text.find(": ");
  if (pos == std::string::npos || pos == 0) return std::nullopt;
  c.category = text.substr(0, pos);
  pos += 2;

  const std::size_t digits = pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos == digits) return std::nullopt;
  c.count = std::stol(text.substr(digits, pos - digits));

  if (!eat(text, pos, ", location: [")) return std::nullopt;
  const auto close = text.find(']', pos);
  if (close == std::string::npos) return std::nullopt;
  const auto cells = text.substr(pos, close - pos);
  if (cells.empty()) return std::nullopt;
  c.cells = split(cells, ", ");
  pos = close + 1;

  if (!eat(text, pos, ", relationships: ")) return std::nullopt;
  const auto rest = text.substr(pos);
  if (rest.empty()) return std::nullopt;
  if (rest != "none") c.relationships = split(rest, ", ");
  return c;
}

}  // namespace sgrag_test
