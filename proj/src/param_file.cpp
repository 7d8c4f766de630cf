// Text container for relation-scorer parameters. See docs/parameter_file.md.

#include <charconv>
#include <sstream>
#include <stdexcept>

#include "sgrag/relation_scorer.hpp"
#include "sgrag/text.hpp"

namespace sgrag::relation {

namespace {

constexpr std::string_view kMagic = "sgrag-relation-params 1";

void write_row(std::ostringstream& out, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ' ';
    out << format_real(values[i]);
  }
  out << '\n';
}

void write_affine(std::ostringstream& out, const std::string& name, const AffineMap& m) {
  out << "affine " << name << ' ' << m.out_dim() << ' ' << m.in_dim() << '\n';
  for (std::size_t r = 0; r < m.out_dim(); ++r)
    write_row(out, std::span<const double>(m.weight()).subspan(r * m.in_dim(), m.in_dim()));
  write_row(out, m.bias());
}

class Reader {
 public:
  explicit Reader(const std::string& text) : in_(text) {}

  // Next non-blank, non-comment line.
  std::string line() {
    std::string s;
    while (std::getline(in_, s)) {
      ++line_no_;
      if (!s.empty() && s.back() == '\r') s.pop_back();
      if (s.empty() || s[0] == '#') continue;
      return s;
    }
    fail("unexpected end of file");
  }

  std::vector<double> numbers(std::size_t expected) {
    const std::string s = line();
    std::vector<double> out;
    const char* p = s.data();
    const char* end = s.data() + s.size();
    while (p < end) {
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      double v = 0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc{}) fail("malformed number");
      out.push_back(v);
      p = next;
    }
    if (out.size() != expected)
      fail("expected " + std::to_string(expected) + " values, found " + std::to_string(out.size()));
    return out;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("parameter file line " + std::to_string(line_no_) + ": " + why);
  }

 private:
  std::istringstream in_;
  int line_no_ = 0;
};

AffineMap read_affine(Reader& r, const std::string& name) {
  std::istringstream header(r.line());
  std::string tag, got_name;
  std::size_t out_dim = 0, in_dim = 0;
  if (!(header >> tag >> got_name >> out_dim >> in_dim) || tag != "affine" || got_name != name)
    r.fail("expected 'affine " + name + " <out> <in>'");
  std::vector<double> weight;
  weight.reserve(out_dim * in_dim);
  for (std::size_t row = 0; row < out_dim; ++row) {
    auto values = r.numbers(in_dim);
    weight.insert(weight.end(), values.begin(), values.end());
  }
  return AffineMap(out_dim, in_dim, std::move(weight), r.numbers(out_dim));
}

}  // namespace

std::string serialize_params(const PenetParams& p) {
  p.check();
  std::ostringstream out;
  out << kMagic << '\n';
  out << "dims " << p.semantic_dim << ' ' << p.visual_dim << ' ' << p.word_dim << '\n';
  write_affine(out, "w_subject", p.w_subject);
  write_affine(out, "w_object", p.w_object);
  write_affine(out, "w_predicate", p.w_predicate);
  write_affine(out, "m_entity", p.m_entity);
  write_affine(out, "m_union", p.m_union);
  write_affine(out, "gate_entity", p.gate_entity.fc());
  write_affine(out, "gate_predicate", p.gate_predicate.fc());
  out << "classes " << p.class_table.entries().size() << '\n';
  for (const auto& [label, vec] : p.class_table.entries()) {
    out << "class " << label << '\n';
    write_row(out, vec);
  }
  return out.str();
}

PenetParams parse_params(const std::string& text) {
  Reader r(text);
  if (r.line() != kMagic) r.fail("missing header '" + std::string(kMagic) + "'");
  PenetParams p;
  {
    std::istringstream dims(r.line());
    std::string tag;
    if (!(dims >> tag >> p.semantic_dim >> p.visual_dim >> p.word_dim) || tag != "dims")
      r.fail("expected 'dims <d> <d_v> <d_w>'");
  }
  p.w_subject = read_affine(r, "w_subject");
  p.w_object = read_affine(r, "w_object");
  p.w_predicate = read_affine(r, "w_predicate");
  p.m_entity = read_affine(r, "m_entity");
  p.m_union = read_affine(r, "m_union");
  p.gate_entity = GateLayer(read_affine(r, "gate_entity"));
  p.gate_predicate = GateLayer(read_affine(r, "gate_predicate"));

  std::istringstream classes(r.line());
  std::string tag;
  std::size_t n = 0;
  if (!(classes >> tag >> n) || tag != "classes") r.fail("expected 'classes <n>'");
  p.class_table = ClassEmbeddingTable(p.word_dim);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string header = r.line();
    if (header.rfind("class ", 0) != 0 || header.size() <= 6) r.fail("expected 'class <label>'");
    p.class_table.set(header.substr(6), r.numbers(p.word_dim));
  }
  p.check();
  return p;
}

PenetParams load_params(const std::string& path) { return parse_params(read_file(path)); }

void save_params(const PenetParams& params, const std::string& path) { write_file(path, serialize_params(params)); }

}  // namespace sgrag::relation
