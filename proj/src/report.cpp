#include <algorithm>
#include <cmath>
#include <sstream>

#include "sgrag/evaluation.hpp"
#include "sgrag/text.hpp"

namespace sgrag::eval {

namespace {

constexpr int kDecimals = 4;

double rounded(double x) {
  const double r = std::round(x * 1e4) / 1e4;
  return r == 0.0 ? 0.0 : r;
}

const char* to_string(Averaging a) { return a == Averaging::per_image ? "per-image" : "pooled"; }
const char* to_string(ClassPooling p) { return p == ClassPooling::micro ? "micro" : "macro"; }

nlohmann::ordered_json scores_json(const AttributeScores& s) {
  nlohmann::ordered_json j;
  if (s.defined) {
    j["recall"] = rounded(s.recall);
    j["precision"] = rounded(s.precision);
    j["f1"] = rounded(s.f1);
  } else {
    j["recall"] = nullptr;
    j["precision"] = nullptr;
    j["f1"] = nullptr;
  }
  j["matched"] = s.tally.matched;
  j["truth"] = s.tally.truth;
  j["predicted"] = s.tally.predicted;
  return j;
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}
std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

nlohmann::ordered_json to_json(const MetricsReport& report) {
  nlohmann::ordered_json j;
  j["template_version"] = report.options.template_version;
  j["settings"] = {{"threshold", report.options.threshold},
                   {"averaging", to_string(report.options.averaging)},
                   {"class_pooling", to_string(report.options.pooling)}};
  j["image_count"] = report.images.size();
  j["parse_failures"] = report.parse_failures;

  nlohmann::ordered_json means;
  for (auto a : kAttributes) {
    const auto& m = report.means[static_cast<int>(a)];
    nlohmann::ordered_json mj;
    if (m.images) {
      mj["recall"] = rounded(m.recall);
      mj["precision"] = rounded(m.precision);
      mj["f1"] = rounded(m.f1);
    } else {
      mj["recall"] = mj["precision"] = mj["f1"] = nullptr;
    }
    mj["images"] = m.images;
    means[to_string(a)] = std::move(mj);
  }
  j["means"] = std::move(means);

  j["overall_score"] = {{"value", rounded(report.overall_score)},
                        {"passing", report.classes_passing},
                        {"total", report.classes_total}};

  auto classes = nlohmann::ordered_json::array();
  for (const auto& c : report.class_recalls)
    classes.push_back({{"attribute", to_string(c.attribute)},
                       {"class", c.label},
                       {"recall", rounded(c.recall)},
                       {"matched", c.matched},
                       {"truth", c.truth}});
  j["class_recalls"] = std::move(classes);

  auto images = nlohmann::ordered_json::array();
  for (const auto& img : report.images) {
    nlohmann::ordered_json ij;
    ij["image_id"] = img.image_id;
    ij["parse_ok"] = img.parse_ok;
    if (!img.error.empty()) ij["error"] = img.error;
    for (auto a : kAttributes) ij[to_string(a)] = scores_json(img.scores[static_cast<int>(a)]);
    images.push_back(std::move(ij));
  }
  j["images"] = std::move(images);
  return j;
}

std::string render_table(const MetricsReport& report) {
  std::ostringstream out;
  out << "Evaluation report (template " << (report.options.template_version.empty() ? "-" : report.options.template_version)
      << ", " << report.images.size() << " images, " << report.parse_failures << " parse failures, "
      << to_string(report.options.averaging) << " means)\n\n";

  const std::size_t label_w = 9;
  std::vector<std::size_t> widths;
  for (auto a : kAttributes) widths.push_back(std::max<std::size_t>(8, std::string(display_name(a)).size()));

  auto rule = [&] {
    out << '+' << std::string(label_w + 2, '-');
    for (auto w : widths) out << '+' << std::string(w + 2, '-');
    out << "+\n";
  };
  rule();
  out << "| " << pad_right("Metric", label_w) << ' ';
  for (std::size_t i = 0; i < kAttributes.size(); ++i) out << "| " << pad_right(display_name(kAttributes[i]), widths[i]) << ' ';
  out << "|\n";
  rule();
  const std::pair<const char*, double AttributeSummary::*> rows[] = {
      {"Recall", &AttributeSummary::recall}, {"Precision", &AttributeSummary::precision}, {"F1", &AttributeSummary::f1}};
  for (const auto& [name, field] : rows) {
    out << "| " << pad_right(name, label_w) << ' ';
    for (std::size_t i = 0; i < kAttributes.size(); ++i) {
      const auto& m = report.means[i];
      out << "| " << pad_left(m.images ? format_fixed(m.*field, kDecimals) : "n/a", widths[i]) << ' ';
    }
    out << "|\n";
  }
  rule();
  out << "\nOverall score: " << format_fixed(report.overall_score, kDecimals) << " (" << report.classes_passing
      << " of " << report.classes_total << " classes with recall >= " << format_fixed(report.options.threshold, 2)
      << ", " << to_string(report.options.pooling) << " pooling)\n";

  if (!report.class_recalls.empty()) {
    std::size_t class_w = 5;
    for (const auto& c : report.class_recalls) class_w = std::max(class_w, c.label.size());
    out << "\nPer-class recall\n";
    for (const auto& c : report.class_recalls) {
      out << "  " << pad_right(display_name(c.attribute), 12) << ' ' << pad_right(c.label, class_w) << ' '
          << format_fixed(c.recall, kDecimals) << "  (" << c.matched << '/' << c.truth << ")"
          << (c.recall >= report.options.threshold ? "  *" : "") << '\n';
    }
  }
  return out.str();
}

}  // namespace sgrag::eval
