#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sgrag {

enum class ErrorKind {
  validation,
  provider,       // transport, timeout, refusal, malformed backend response
  cassette_miss,
  io,
  config,
};

const char* to_string(ErrorKind kind);

// Process exit code for the CLI: 0 ok, 1 validation, 2 provider, 3 cassette miss.
int exit_code_for(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// One broken invariant found while checking an input record.
struct Violation {
  std::string code;     // stable identifier, e.g. "inverted bbox"
  std::string where;    // record path, e.g. "objects[2].bbox"
  std::string message;
};

std::string describe(const std::vector<Violation>& violations);

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  ValidationError(std::string code, std::string where, std::string message);

  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

class ProviderError : public Error {
 public:
  explicit ProviderError(const std::string& what) : Error(ErrorKind::provider, what) {}
};

class CassetteMiss : public Error {
 public:
  explicit CassetteMiss(std::string digest);
  const std::string& digest() const noexcept { return digest_; }

 private:
  std::string digest_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

/// Wraps a failure with the pipeline stage it came from. Keeps the cause's kind.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause);
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace sgrag
