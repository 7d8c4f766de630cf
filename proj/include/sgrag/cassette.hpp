#pragma once

// Record/replay store for backend calls. One JSON object per line:
//   {"digest": "<sha256 hex of the request>", ...payload fields}
// Replay is read-only; record appends under a single writer lock.

#include <map>
#include <mutex>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace sgrag {

enum class BackendMode { live, record, replay };

const char* to_string(BackendMode mode);
/// Throws ConfigError for anything but "live", "record", "replay".
BackendMode parse_backend_mode(const std::string& text);

class Cassette {
 public:
  /// In-memory only; append() does not touch the filesystem.
  Cassette() = default;

  /// Loads the file. A missing file is an IoError unless `allow_missing`, in
  /// which case the cassette starts empty and the file is created on append.
  static std::shared_ptr<Cassette> open(const std::string& path, bool allow_missing);

  std::optional<nlohmann::json> find(const std::string& digest) const;
  /// Adds the entry (payload must be an object) and appends one line to the
  /// backing file, if any. Re-recording an identical entry is a no-op.
  void append(const std::string& digest, const nlohmann::json& payload);

  std::size_t size() const;
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  mutable std::mutex mutex_;
  std::map<std::string, nlohmann::json> entries_;
};

}  // namespace sgrag
