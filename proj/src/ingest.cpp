#include "sgrag/ingest.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>

#include "sgrag/scene_model.hpp"
#include "sgrag/text.hpp"

namespace sgrag {

namespace fs = std::filesystem;

namespace {

std::string id_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  return v.dump();
}

// Locates the records of a JSON document or a JSON Lines file.
std::vector<std::pair<std::string, nlohmann::json>> split_records(const std::string& text) {
  std::vector<std::pair<std::string, nlohmann::json>> out;
  auto doc = nlohmann::json::parse(text, nullptr, false);
  if (!doc.is_discarded()) {
    if (doc.is_object() && doc.contains("images") && doc["images"].is_array()) doc = doc["images"];
    if (doc.is_array()) {
      for (std::size_t i = 0; i < doc.size(); ++i) out.emplace_back("record " + std::to_string(i), doc[i]);
    } else {
      out.emplace_back("record 0", doc);
    }
    return out;
  }
  std::size_t start = 0, line_no = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto rec = nlohmann::json::parse(line, nullptr, false);
    out.emplace_back("line " + std::to_string(line_no), rec.is_discarded() ? nlohmann::json() : rec);
  }
  return out;
}

// [x, y, w, h] -> [x_min, y_min, x_max, y_max]
nlohmann::json xywh_to_corners(double x, double y, double w, double h) {
  return nlohmann::json::array({x, y, x + w, y + h});
}

void write_records(const std::vector<std::pair<std::string, SceneGraph>>& graphs, const std::string& out_dir,
                   ConversionSummary& summary) {
  fs::create_directories(out_dir);
  for (const auto& [locator, g] : graphs) {
    const auto path = (fs::path(out_dir) / scene_file_name(g.image_id)).string();
    write_file(path, to_json(g).dump(2) + "\n");
    summary.written.push_back(path);
    ++summary.images_converted;
    summary.objects += g.objects.size();
    summary.relationships += g.relationships.size();
  }
}

}  // namespace

SourceFormat parse_source_format(const std::string& text) {
  if (text == "vg150-annotations" || text == "vg150") return SourceFormat::vg150;
  if (text == "aug-annotations" || text == "aug") return SourceFormat::aug;
  if (text == "canonical") return SourceFormat::canonical;
  throw ConfigError("unknown source format '" + text + "' (expected vg150-annotations, aug-annotations or canonical)");
}

std::string scene_file_name(const std::string& image_id) {
  std::string name;
  for (char c : image_id) {
    const bool safe = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    name.push_back(safe ? c : '_');
  }
  if (name.empty() || name.front() == '.') name.insert(name.begin(), '_');
  return name + ".json";
}

std::vector<SourceRecord> convert_vg150(const std::vector<std::pair<std::string, nlohmann::json>>& records) {
  std::vector<SourceRecord> out;
  for (const auto& [locator, rec] : records) {
    SourceRecord sr;
    sr.locator = locator;
    auto& errors = sr.errors;
    if (!rec.is_object()) {
      errors.push_back({"malformed record", "", "expected a JSON object"});
      out.push_back(std::move(sr));
      continue;
    }
    nlohmann::json c;
    const auto id = rec.contains("image_id") ? rec["image_id"] : rec.value("id", nlohmann::json());
    if (id.is_null()) errors.push_back({"missing field", "image_id", ""});
    else {
      c["image_id"] = id_text(id);
      sr.locator += " (image " + id_text(id) + ")";
    }
    for (const char* key : {"width", "height"}) {
      if (rec.contains(key) && rec[key].is_number_integer()) c[key] = rec[key];
      else errors.push_back({"missing field", key, "integer image dimension required"});
    }

    c["objects"] = nlohmann::json::array();
    const auto objects = rec.value("objects", nlohmann::json::array());
    for (std::size_t i = 0; i < objects.size(); ++i) {
      const auto& o = objects[i];
      const std::string where = "objects[" + std::to_string(i) + "]";
      std::string name;
      if (o.contains("names") && o["names"].is_array() && !o["names"].empty() && o["names"][0].is_string())
        name = o["names"][0].get<std::string>();
      else if (o.contains("name") && o["name"].is_string())
        name = o["name"].get<std::string>();
      static constexpr const char* kBoxKeys[] = {"x", "y", "w", "h"};
      const bool has_box = std::all_of(std::begin(kBoxKeys), std::end(kBoxKeys),
                                       [&](const char* k) { return o.contains(k) && o[k].is_number(); });
      const auto oid = o.contains("object_id") ? o["object_id"] : o.value("id", nlohmann::json());
      if (oid.is_null() || name.empty() || !has_box) {
        errors.push_back({"malformed record", where, "object needs object_id, names[0] and x/y/w/h"});
        continue;
      }
      nlohmann::json obj = {{"id", id_text(oid)},
                            {"category", canonical_label(name)},
                            {"bbox", xywh_to_corners(o["x"].get<double>(), o["y"].get<double>(),
                                                      o["w"].get<double>(), o["h"].get<double>())}};
      c["objects"].push_back(std::move(obj));
    }

    c["relationships"] = nlohmann::json::array();
    const auto rels = rec.value("relationships", nlohmann::json::array());
    for (std::size_t i = 0; i < rels.size(); ++i) {
      const auto& r = rels[i];
      const std::string where = "relationships[" + std::to_string(i) + "]";
      auto endpoint = [&](const char* id_key, const char* nested) -> nlohmann::json {
        if (r.contains(id_key)) return r[id_key];
        if (r.contains(nested) && r[nested].is_object() && r[nested].contains("object_id"))
          return r[nested]["object_id"];
        return nullptr;
      };
      const auto s = endpoint("subject_id", "subject");
      const auto o = endpoint("object_id", "object");
      if (s.is_null() || o.is_null() || !r.contains("predicate") || !r["predicate"].is_string()) {
        errors.push_back({"malformed record", where, "relationship needs subject, object and predicate"});
        continue;
      }
      c["relationships"].push_back(
          {{"subject_id", id_text(s)}, {"predicate", canonical_label(r["predicate"].get<std::string>())}, {"object_id", id_text(o)}});
    }
    sr.canonical = std::move(c);
    out.push_back(std::move(sr));
  }
  return out;
}

std::vector<SourceRecord> convert_aug(const nlohmann::json& doc) {
  std::vector<SourceRecord> out;
  if (!doc.is_object() || !doc.contains("images") || !doc["images"].is_array()) {
    out.push_back({"document", {}, {{"malformed record", "images", "AUG document needs an images array"}}});
    return out;
  }
  std::map<std::string, std::string> categories, predicates;
  for (const auto& c : doc.value("categories", nlohmann::json::array()))
    if (c.contains("id") && c.contains("name") && c["name"].is_string())
      categories[id_text(c["id"])] = canonical_label(c["name"].get<std::string>());
  for (const auto& p : doc.value("predicates", nlohmann::json::array()))
    if (p.contains("id") && p.contains("name") && p["name"].is_string())
      predicates[id_text(p["id"])] = canonical_label(p["name"].get<std::string>());

  std::map<std::string, std::size_t> slot_of;  // image id -> index in out
  const auto& images = doc["images"];
  for (std::size_t i = 0; i < images.size(); ++i) {
    const auto& img = images[i];
    SourceRecord sr;
    sr.locator = "images[" + std::to_string(i) + "]";
    if (!img.is_object() || !img.contains("id")) {
      sr.errors.push_back({"malformed record", sr.locator, "image needs an id"});
      out.push_back(std::move(sr));
      continue;
    }
    const auto image_id = id_text(img["id"]);
    sr.locator += " (image " + image_id + ")";
    sr.canonical = {{"image_id", image_id},
                    {"objects", nlohmann::json::array()},
                    {"relationships", nlohmann::json::array()}};
    for (const char* key : {"width", "height"}) {
      if (img.contains(key) && img[key].is_number_integer()) sr.canonical[key] = img[key];
      else sr.errors.push_back({"missing field", key, "integer image dimension required"});
    }
    slot_of[image_id] = out.size();
    out.push_back(std::move(sr));
  }

  const auto annotations = doc.value("annotations", nlohmann::json::array());
  for (std::size_t i = 0; i < annotations.size(); ++i) {
    const auto& a = annotations[i];
    const std::string where = "annotations[" + std::to_string(i) + "]";
    if (!a.is_object() || !a.contains("image_id")) continue;
    auto slot = slot_of.find(id_text(a["image_id"]));
    if (slot == slot_of.end()) continue;
    auto& sr = out[slot->second];
    const auto bbox = a.value("bbox", nlohmann::json());
    const auto cat = a.contains("category_id") ? categories.find(id_text(a["category_id"])) : categories.end();
    if (!a.contains("id") || cat == categories.end() || !bbox.is_array() || bbox.size() != 4 ||
        !std::all_of(bbox.begin(), bbox.end(), [](const auto& x) { return x.is_number(); })) {
      sr.errors.push_back({"malformed record", where, "annotation needs id, known category_id and bbox [x,y,w,h]"});
      continue;
    }
    sr.canonical["objects"].push_back({{"id", id_text(a["id"])},
                                       {"category", cat->second},
                                       {"bbox", xywh_to_corners(bbox[0].get<double>(), bbox[1].get<double>(),
                                                                 bbox[2].get<double>(), bbox[3].get<double>())}});
  }

  const auto relationships = doc.value("relationships", nlohmann::json::array());
  for (std::size_t i = 0; i < relationships.size(); ++i) {
    const auto& r = relationships[i];
    const std::string where = "relationships[" + std::to_string(i) + "]";
    if (!r.is_object() || !r.contains("image_id")) continue;
    auto slot = slot_of.find(id_text(r["image_id"]));
    if (slot == slot_of.end()) continue;
    auto& sr = out[slot->second];
    std::string predicate;
    if (r.contains("predicate") && r["predicate"].is_string()) predicate = canonical_label(r["predicate"].get<std::string>());
    else if (r.contains("predicate_id")) {
      auto it = predicates.find(id_text(r["predicate_id"]));
      if (it != predicates.end()) predicate = it->second;
    }
    if (!r.contains("subject_id") || !r.contains("object_id") || predicate.empty()) {
      sr.errors.push_back({"malformed record", where, "relationship needs subject_id, object_id and a known predicate"});
      continue;
    }
    sr.canonical["relationships"].push_back(
        {{"subject_id", id_text(r["subject_id"])}, {"predicate", predicate}, {"object_id", id_text(r["object_id"])}});
  }
  return out;
}

ConversionSummary ingest_convert(SourceFormat format, const std::string& path_in, const std::string& out_dir,
                                 bool strict) {
  std::vector<SourceRecord> records;
  if (format == SourceFormat::canonical) {
    std::vector<std::pair<std::string, nlohmann::json>> raw;
    if (fs::is_directory(path_in)) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(path_in))
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) {
        auto doc = nlohmann::json::parse(read_file(f.string()), nullptr, false);
        raw.emplace_back(f.filename().string(), doc.is_discarded() ? nlohmann::json() : doc);
      }
    } else {
      raw = split_records(read_file(path_in));
    }
    for (auto& [locator, doc] : raw) {
      SourceRecord sr{locator, std::move(doc), {}};
      if (sr.canonical.is_null()) sr.errors.push_back({"malformed record", "", "not valid JSON"});
      records.push_back(std::move(sr));
    }
  } else {
    const auto text = read_file(path_in);
    if (format == SourceFormat::vg150) {
      records = convert_vg150(split_records(text));
    } else {
      auto doc = nlohmann::json::parse(text, nullptr, false);
      if (doc.is_discarded()) throw ValidationError("malformed record", path_in, "AUG annotations must be one JSON document");
      records = convert_aug(doc);
    }
  }

  ConversionSummary summary;
  std::vector<std::pair<std::string, SceneGraph>> graphs;
  std::set<std::string> names;
  for (auto& sr : records) {
    std::vector<Violation> violations = sr.errors;
    std::optional<SceneGraph> graph;
    if (violations.empty()) {
      auto check = check_scene_graph(sr.canonical);
      violations = std::move(check.violations);
      graph = std::move(check.graph);
    }
    if (graph && !names.insert(scene_file_name(graph->image_id)).second)
      violations.push_back({"duplicate image id", "image_id", "image '" + graph->image_id + "' appears twice"});
    if (!violations.empty()) {
      if (strict) {
        for (auto& v : violations) v.where = sr.locator + (v.where.empty() ? "" : ": " + v.where);
        throw ValidationError(std::move(violations));
      }
      summary.rejects.push_back({sr.locator, std::move(violations)});
      continue;
    }
    graphs.emplace_back(sr.locator, std::move(*graph));
  }
  write_records(graphs, out_dir, summary);
  return summary;
}

nlohmann::ordered_json to_json(const ConversionSummary& s) {
  nlohmann::ordered_json j;
  j["images_converted"] = s.images_converted;
  j["objects"] = s.objects;
  j["relationships"] = s.relationships;
  auto rejects = nlohmann::ordered_json::array();
  for (const auto& r : s.rejects) {
    auto problems = nlohmann::ordered_json::array();
    for (const auto& v : r.violations) problems.push_back({{"code", v.code}, {"where", v.where}, {"message", v.message}});
    rejects.push_back({{"record", r.locator}, {"violations", std::move(problems)}});
  }
  j["validation_rejects"] = rejects.size();
  j["rejects"] = std::move(rejects);
  return j;
}

}  // namespace sgrag
