#pragma once

#include <filesystem>
#include <set>
#include <string>

namespace sgrag_test {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

// Every regular file below `root`, as paths relative to it. Unreadable
// entries are skipped.
std::set<std::string> list_files(const std::filesystem::path& root);

std::string slurp(const std::filesystem::path& path);

}  // namespace sgrag_test
