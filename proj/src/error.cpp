#include "sgrag/error.hpp"

namespace sgrag {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::provider: return "provider";
    case ErrorKind::cassette_miss: return "cassette miss";
    case ErrorKind::io: return "io";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::provider: return 2;
    case ErrorKind::cassette_miss: return 3;
    default: return 1;
  }
}

std::string describe(const std::vector<Violation>& violations) {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.code;
    if (!v.where.empty()) out += " at " + v.where;
    if (!v.message.empty()) out += ": " + v.message;
  }
  return out;
}

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(ErrorKind::validation, "validation failed: " + describe(violations)),
      violations_(std::move(violations)) {}

ValidationError::ValidationError(std::string code, std::string where, std::string message)
    : ValidationError(std::vector<Violation>{{std::move(code), std::move(where), std::move(message)}}) {}

CassetteMiss::CassetteMiss(std::string digest)
    : Error(ErrorKind::cassette_miss, "cassette miss for digest " + digest), digest_(std::move(digest)) {}

StageError::StageError(std::string stage, const Error& cause)
    : Error(cause.kind(), stage + ": " + cause.what()), stage_(std::move(stage)) {}

}  // namespace sgrag
