// sgrag: scene-graph retrieval-augmented VQA from the command line.
//
//   sgrag ingest --from vg150-annotations --in raw.json --out scenes/ [--strict]
//   sgrag ask --scene scenes/1.json --question "How many cars are there?"
//   sgrag eval --dataset scenes/ --questions questions.jsonl --report report.json

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sgrag/error.hpp"
#include "sgrag/ingest.hpp"
#include "sgrag/pipeline.hpp"
#include "sgrag/session_config.hpp"
#include "sgrag/text.hpp"

namespace {

struct SessionFlags {
  std::string config_file;
  std::vector<std::string> settings;  // key=value overrides
  std::optional<std::string> mode;
  std::optional<std::string> cassette;
  std::optional<std::size_t> k;
  std::optional<std::size_t> workers;
  bool timings = false;
};

void add_session_flags(CLI::App* cmd, SessionFlags& f) {
  cmd->add_option("--mode", f.mode, "Backend mode")->check(CLI::IsMember({"live", "record", "replay"}));
  cmd->add_option("--cassette", f.cassette, "Record/replay file for completions");
  cmd->add_option("--set", f.settings, "Extra config setting as key=value (repeatable)");
}

sgrag::SessionConfig make_config(const SessionFlags& f) {
  sgrag::SessionConfig cfg;
  if (!f.config_file.empty()) cfg = sgrag::load_config(f.config_file);
  for (const auto& s : f.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw sgrag::ConfigError("--set expects key=value, got '" + s + "'");
    sgrag::apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  if (f.mode) sgrag::apply_setting(cfg, "mode", *f.mode);
  if (f.cassette) cfg.cassette = *f.cassette;
  if (f.k) sgrag::apply_setting(cfg, "k", std::to_string(*f.k));
  if (f.workers) sgrag::apply_setting(cfg, "workers", std::to_string(*f.workers));
  if (f.timings) cfg.emit_timings = true;
  return cfg;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    const auto parent = std::filesystem::path(out_path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    sgrag::write_file(out_path, text);
  }
}

void report_error(const sgrag::Error& e) {
  std::cerr << "error (" << sgrag::to_string(e.kind()) << "): " << e.what() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scene-graph retrieval-augmented visual question answering"};
  app.require_subcommand(1);

  SessionFlags flags;
  app.add_option("--config", flags.config_file, "Key-value config file")->check(CLI::ExistingFile);

  auto* ingest = app.add_subcommand("ingest", "Convert annotations into canonical scene-graph files");
  std::string from, in_path, out_dir;
  bool strict = false;
  ingest->add_option("--from", from, "vg150-annotations | aug-annotations | canonical")->required();
  ingest->add_option("--in", in_path, "Input file or directory")->required();
  ingest->add_option("--out", out_dir, "Output directory")->required();
  ingest->add_flag("--strict", strict, "Abort on the first invalid record");

  auto* ask = app.add_subcommand("ask", "Answer one question about one scene");
  std::string scene_file, question, ask_out;
  ask->add_option("--scene", scene_file, "Canonical scene-graph file")->required();
  ask->add_option("--question", question, "Question text")->required();
  ask->add_option("--k", flags.k, "Chunks to retrieve (default 4)")->check(CLI::PositiveNumber);
  ask->add_option("--out", ask_out, "Write the result JSON here instead of stdout");
  ask->add_flag("--timings", flags.timings, "Include stage durations in the output");
  add_session_flags(ask, flags);

  auto* eval = app.add_subcommand("eval", "Score structured answers over a dataset");
  std::string dataset, questions, report_path;
  bool table = false;
  eval->add_option("--dataset", dataset, "Directory of canonical scene files")->required();
  eval->add_option("--questions", questions, "Questions file (JSON Lines)")->required();
  eval->add_option("--report", report_path, "Report output path")->required();
  eval->add_option("--workers", flags.workers, "Images processed concurrently")->check(CLI::PositiveNumber);
  eval->add_flag("--table", table, "Also print the metrics table");
  add_session_flags(eval, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*ingest) {
      const auto summary = sgrag::ingest_convert(sgrag::parse_source_format(from), in_path, out_dir, strict);
      std::cout << sgrag::to_json(summary).dump(2) << "\n";
      for (const auto& r : summary.rejects)
        std::cerr << "rejected " << r.locator << ": " << sgrag::describe(r.violations) << "\n";
      return 0;
    }
    const auto cfg = make_config(flags);
    if (*ask) {
      sgrag::Session session(cfg);
      const auto result = session.answer_question_file(scene_file, question);
      const bool durations = cfg.emit_timings || cfg.mode == sgrag::BackendMode::live;
      emit(sgrag::to_json(result, durations).dump(2) + "\n", ask_out);
      return 0;
    }
    if (*eval) {
      sgrag::Session session(cfg);
      const auto report = session.run_eval(dataset, questions);
      emit(sgrag::eval::to_json(report).dump(2) + "\n", report_path);
      if (table) std::cout << sgrag::eval::render_table(report);
      return 0;
    }
  } catch (const sgrag::Error& e) {
    report_error(e);
    return sgrag::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
