#include "sgrag/session_config.hpp"

#include <charconv>
#include <filesystem>
#include <sstream>

#include "sgrag/error.hpp"
#include "sgrag/text.hpp"

namespace sgrag {

namespace {

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || end != value.data() + value.size())
    throw ConfigError("config: '" + key + "' expects a number, got '" + value + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config: '" + key + "' expects true/false, got '" + value + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void require_file(const std::string& path, const char* what) {
  if (!path.empty() && !std::filesystem::exists(path))
    throw ConfigError(std::string(what) + " '" + path + "' does not exist");
}

}  // namespace

void SessionConfig::check() const {
  if (k == 0) throw ConfigError("config: k must be >= 1");
  if (workers == 0) throw ConfigError("config: workers must be >= 1");
  if (max_in_flight == 0) throw ConfigError("config: max_in_flight must be >= 1");
  if (embedder == EmbedderKind::hash && hash_dim < 8) throw ConfigError("config: hash.dim must be >= 8");
  if (!(eval.threshold >= 0 && eval.threshold <= 1)) throw ConfigError("config: eval.threshold must be in [0,1]");
  completion.check();
  if (mode == BackendMode::replay) {
    if (cassette.empty()) throw ConfigError("replay mode needs a completion cassette");
    require_file(cassette, "cassette");
    if (embedder == EmbedderKind::remote) {
      if (embed_cassette.empty()) throw ConfigError("replay mode with the remote embedder needs embed.cassette");
      require_file(embed_cassette, "embedding cassette");
    }
  }
  if (mode == BackendMode::record && cassette.empty()) throw ConfigError("record mode needs a completion cassette");
  require_file(synonyms, "synonym file");
}

void apply_setting(SessionConfig& c, const std::string& key, const std::string& value) {
  if (key == "embedder") {
    if (value == "hash") c.embedder = EmbedderKind::hash;
    else if (value == "remote") c.embedder = EmbedderKind::remote;
    else throw ConfigError("config: embedder must be hash or remote");
  } else if (key == "hash.dim") c.hash_dim = parse_number<std::size_t>(key, value);
  else if (key == "seed" || key == "hash.seed") c.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "embed.url") c.remote.url = value;
  else if (key == "embed.model") c.remote.model = value;
  else if (key == "embed.dimension") c.remote.dimension = parse_number<std::size_t>(key, value);
  else if (key == "embed.auth_header") c.remote.auth_header = value;
  else if (key == "embed.auth_prefix") c.remote.auth_prefix = value;
  else if (key == "embed.secret_env") c.remote.secret_env = value;
  else if (key == "embed.timeout") c.remote.timeout_seconds = parse_number<double>(key, value);
  else if (key == "embed.cassette") c.embed_cassette = value;
  else if (key == "llm.url") c.completion.url = value;
  else if (key == "llm.model") c.completion.model = value;
  else if (key == "llm.temperature") c.completion.temperature = parse_number<double>(key, value);
  else if (key == "llm.max_tokens") c.completion.max_tokens = parse_number<int>(key, value);
  else if (key == "llm.auth_header") c.completion.auth_header = value;
  else if (key == "llm.auth_prefix") c.completion.auth_prefix = value;
  else if (key == "llm.secret_env") c.completion.secret_env = value;
  else if (key == "llm.timeout") c.completion.timeout_seconds = parse_number<double>(key, value);
  else if (key == "mode") c.mode = parse_backend_mode(value);
  else if (key == "cassette") c.cassette = value;
  else if (key == "k") c.k = parse_number<std::size_t>(key, value);
  else if (key == "workers") c.workers = parse_number<std::size_t>(key, value);
  else if (key == "max_in_flight") c.max_in_flight = parse_number<std::size_t>(key, value);
  else if (key == "cache_per_image") c.cache_per_image = parse_bool(key, value);
  else if (key == "synonyms") c.synonyms = value;
  else if (key == "timings") c.emit_timings = parse_bool(key, value);
  else if (key == "eval.threshold") c.eval.threshold = parse_number<double>(key, value);
  else if (key == "eval.averaging") {
    if (value == "per-image") c.eval.averaging = eval::Averaging::per_image;
    else if (value == "pooled") c.eval.averaging = eval::Averaging::pooled;
    else throw ConfigError("config: eval.averaging must be per-image or pooled");
  } else if (key == "eval.pooling") {
    if (value == "micro") c.eval.pooling = eval::ClassPooling::micro;
    else if (value == "macro") c.eval.pooling = eval::ClassPooling::macro;
    else throw ConfigError("config: eval.pooling must be micro or macro");
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

SessionConfig load_config(const std::string& path, SessionConfig base) {
  std::istringstream in(read_file(path));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
    apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

}  // namespace sgrag
