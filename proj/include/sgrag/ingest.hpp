#pragma once

// Converters from annotation dumps to canonical scene-graph files.
//
//   vg150-annotations  Visual-Genome style: a JSON array (or JSON Lines) of
//                      images with objects {object_id, names|name, x, y, w, h}
//                      and relationships {subject_id|subject, predicate,
//                      object_id|object}. Needs width/height per image.
//   aug-annotations    COCO style with relations: images, categories,
//                      annotations (bbox [x, y, w, h]), predicates,
//                      relationships {image_id, subject_id, object_id,
//                      predicate_id|predicate}.
//   canonical          canonical documents: a file, a JSON array, or a
//                      directory of *.json files.
//
// See docs/scene_graph_schema.md.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgrag/error.hpp"

namespace sgrag {

enum class SourceFormat { vg150, aug, canonical };

/// "vg150-annotations", "aug-annotations", "canonical"; throws ConfigError.
SourceFormat parse_source_format(const std::string& text);

/// One source record mapped to the canonical shape, before validation.
struct SourceRecord {
  std::string locator;  // "record 3" or "line 7", plus image id when known
  nlohmann::json canonical;
  std::vector<Violation> errors;  // problems found while mapping
};

std::vector<SourceRecord> convert_vg150(const std::vector<std::pair<std::string, nlohmann::json>>& records);
std::vector<SourceRecord> convert_aug(const nlohmann::json& document);

struct Reject {
  std::string locator;
  std::vector<Violation> violations;
};

struct ConversionSummary {
  std::size_t images_converted = 0;
  std::size_t objects = 0;
  std::size_t relationships = 0;
  std::vector<Reject> rejects;
  std::vector<std::string> written;  // output files, in write order
};

/// Converts, validates, and writes <out_dir>/<image_id>.json per image. With
/// `strict`, the first invalid record aborts with a ValidationError naming it
/// and nothing is written; otherwise invalid records are skipped and listed.
ConversionSummary ingest_convert(SourceFormat format, const std::string& path_in, const std::string& out_dir,
                                 bool strict);

nlohmann::ordered_json to_json(const ConversionSummary& summary);

/// File name used for an image id ("/" and other unsafe bytes become "_").
std::string scene_file_name(const std::string& image_id);

}  // namespace sgrag
