#pragma once

#include <string>

namespace sgrag_test {

struct ProcessResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

// Runs a shell command line; `cwd` and `tmpdir` are applied when non-empty.
ProcessResult run_command(const std::string& command, const std::string& cwd = {}, const std::string& tmpdir = {});

std::string quote(const std::string& arg);

}  // namespace sgrag_test
