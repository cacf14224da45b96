#include "sgp/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "sgp/parallel.hpp"
#include "sgp/pipeline.hpp"
#include "sgp/synth.hpp"
#include "sgp/tokenstats.hpp"

namespace sgp {

namespace fs = std::filesystem;

namespace {

class CliFailure : public std::runtime_error {
 public:
  CliFailure(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

std::string_view code_name(ExitCode code) {
  switch (code) {
    case kExitUsage:
      return "usage";
    case kExitIo:
      return "io";
    default:
      return "data";
  }
}

void report(std::ostream& err, ExitCode code, const std::string& message,
            std::optional<std::size_t> line = std::nullopt, const std::string& frame = {}) {
  err << "error: code=" << code_name(code);
  if (line) err << " line=" << *line;
  if (!frame.empty()) err << " frame=" << frame;
  err << " " << message << "\n";
}

struct Record {
  std::size_t line = 0;
  std::string text;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliFailure(kExitIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw CliFailure(kExitIo, "cannot read " + path.string());
  return buf.str();
}

// Non-blank lines with their 1-based line numbers.
std::vector<Record> read_records(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::vector<Record> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    records.push_back({line_no, line});
  }
  return records;
}

void write_file(const fs::path& path, std::string_view body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CliFailure(kExitIo, "cannot write " + path.string());
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw CliFailure(kExitIo, "cannot write " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CliFailure(kExitIo, "cannot create directory " + dir.string() + ": " + ec.message());
}

struct Options {
  std::string config_path;
  bool quiet = false;
  std::size_t jobs = 1;

  std::string in;
  std::string out;
  std::string abstraction;
  std::string format;
  std::string prompt_template;
  std::string tokenizer;
  std::string counts;
  std::string dump_bodies;
  bool no_graph = false;
  std::uint64_t seed = 42;
  long long n = 0;
};

PipelineConfig resolve_config(const Options& opt) {
  PipelineConfig cfg;
  std::string path = opt.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("SGP_CONFIG"); env != nullptr) path = env;
  }
  if (!path.empty()) {
    try {
      cfg = parse_pipeline_config(read_file(path));
    } catch (const ConfigError& e) {
      throw CliFailure(kExitUsage, path + ": " + e.what());
    }
  }
  if (!opt.abstraction.empty()) {
    const auto a = abstraction_from_name(opt.abstraction);
    if (!a) throw CliFailure(kExitUsage, "unknown abstraction '" + opt.abstraction + "'");
    cfg.abstraction = *a;
  }
  if (!opt.format.empty()) {
    const auto f = format_from_name(opt.format);
    if (!f) throw CliFailure(kExitUsage, "unknown format '" + opt.format + "'");
    cfg.format = *f;
  }
  if (!opt.prompt_template.empty()) {
    if (opt.prompt_template == "none") {
      cfg.prompt_template.reset();
    } else if (const auto v = template_from_name(opt.prompt_template)) {
      cfg.prompt_template = *v;
    } else {
      throw CliFailure(kExitUsage, "unknown template '" + opt.prompt_template + "'");
    }
  }
  if (!opt.tokenizer.empty()) cfg.tokenizer = opt.tokenizer;
  return cfg;
}

// Per-record outcome, filled concurrently and consumed in input order.
struct Outcome {
  std::string frame_id;
  std::string file_name;
  std::string body;
  std::vector<std::string> errors;
};

SceneSnapshot parse_valid(const Record& record) {
  SceneSnapshot s = snapshot_from_json(record.text);
  if (const auto errors = validate_snapshot(s); !errors.empty()) {
    std::string joined;
    for (const auto& e : errors) joined += (joined.empty() ? "" : "; ") + e;
    throw SnapshotError(joined);
  }
  return s;
}

// Writes successful outcomes and a manifest in input order. Returns the
// number of failed records after reporting them.
std::size_t emit(const std::vector<Record>& records, std::vector<Outcome>& outcomes,
                 const fs::path& dir, std::string_view manifest_name, std::ostream& err) {
  std::set<std::string> frames;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto& o = outcomes[i];
    if (o.errors.empty() && !frames.insert(o.frame_id).second) {
      o.errors.push_back("duplicate frame_id");
    }
  }
  ensure_dir(dir);
  std::string manifest;
  std::size_t failures = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    if (!o.errors.empty()) {
      ++failures;
      for (const auto& e : o.errors) report(err, kExitData, e, records[i].line, o.frame_id);
      continue;
    }
    write_file(dir / o.file_name, o.body);
    manifest += o.file_name + "\n";
  }
  write_file(dir / manifest_name, manifest);
  return failures;
}

int cmd_validate(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto records = read_records(opt.in);
  if (records.empty()) {
    report(err, kExitData, "no records in " + opt.in);
    if (!opt.quiet) out << "no records\n";
    return kExitData;
  }
  std::vector<std::vector<std::string>> problems(records.size());
  std::vector<std::string> frames(records.size());
  parallel_for(records.size(), opt.jobs, [&](std::size_t i) {
    try {
      const SceneSnapshot s = snapshot_from_json(records[i].text);
      frames[i] = s.frame_id;
      problems[i] = validate_snapshot(s);
    } catch (const std::exception& e) {
      problems[i] = {e.what()};
    }
  });
  std::size_t ok = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (problems[i].empty()) {
      ++ok;
      continue;
    }
    for (const auto& p : problems[i]) report(err, kExitData, p, records[i].line, frames[i]);
  }
  if (!opt.quiet) {
    out << ok << " ok";
    if (ok != records.size()) out << ", " << records.size() - ok << " invalid";
    out << "\n";
  }
  return ok == records.size() ? kExitOk : kExitData;
}

int cmd_build(const Options& opt, std::ostream& out, std::ostream& err) {
  const PipelineConfig cfg = resolve_config(opt);
  const auto records = read_records(opt.in);
  if (records.empty()) throw CliFailure(kExitData, "no records in " + opt.in);

  std::vector<Outcome> outcomes(records.size());
  parallel_for(records.size(), opt.jobs, [&](std::size_t i) {
    Outcome& o = outcomes[i];
    try {
      const SceneSnapshot s = parse_valid(records[i]);
      o.frame_id = s.frame_id;
      o.body = run_graph_pipeline(s, cfg).body;
      o.file_name = s.frame_id + "." + std::string(name_of(cfg.abstraction)) + "." +
                    std::string(file_extension(cfg.format));
    } catch (const std::exception& e) {
      o.errors.push_back(e.what());
    }
  });
  const std::size_t failures = emit(records, outcomes, opt.out, "manifest.txt", err);
  if (!opt.quiet) out << records.size() - failures << " built, " << failures << " failed\n";
  return failures == 0 ? kExitOk : kExitData;
}

int cmd_prompt(const Options& opt, std::ostream& out, std::ostream& err) {
  const PipelineConfig cfg = resolve_config(opt);
  if (!cfg.prompt_template) {
    throw CliFailure(kExitUsage, "template is 'none'; prompt emission is disabled");
  }
  const TemplateVersion version = *cfg.prompt_template;
  std::optional<PromptTemplate> tmpl;
  if (cfg.template_override) {
    try {
      tmpl.emplace(version, read_file(*cfg.template_override));
    } catch (const PromptError& e) {
      throw CliFailure(kExitUsage, *cfg.template_override + ": " + e.what());
    }
  } else {
    tmpl.emplace(PromptTemplate::builtin(version));
  }

  const auto records = read_records(opt.in);
  if (records.empty()) throw CliFailure(kExitData, "no records in " + opt.in);
  std::vector<Outcome> outcomes(records.size());
  parallel_for(records.size(), opt.jobs, [&](std::size_t i) {
    Outcome& o = outcomes[i];
    try {
      const SceneSnapshot s = parse_valid(records[i]);
      o.frame_id = s.frame_id;
      if (opt.no_graph) {
        o.body = render_without_graph(version, s.command).rendered;
      } else {
        const auto graph = run_graph_pipeline(s, cfg);
        o.body = render(*tmpl, s.command, graph.body, cfg.format).rendered;
      }
      o.file_name = s.frame_id + ".prompt.txt";
    } catch (const std::exception& e) {
      o.errors.push_back(e.what());
    }
  });
  const std::size_t failures = emit(records, outcomes, opt.out, "prompt_manifest.txt", err);
  if (!opt.quiet) out << records.size() - failures << " prompts, " << failures << " failed\n";
  return failures == 0 ? kExitOk : kExitData;
}

int cmd_stats(const Options& opt, std::ostream& out, std::ostream& err) {
  const PipelineConfig cfg = resolve_config(opt);
  const Tokenizer* tokenizer = nullptr;
  if (opt.counts.empty()) {
    try {
      tokenizer = &tokenizer_by_name(cfg.tokenizer);
    } catch (const UnknownTokenizerError& e) {
      throw CliFailure(kExitUsage, e.what());
    }
  }

  const auto records = read_records(opt.in);
  if (records.empty()) throw CliFailure(kExitData, "no records in " + opt.in);
  std::vector<SceneSnapshot> scenes(records.size());
  std::vector<std::string> errors(records.size());
  parallel_for(records.size(), opt.jobs, [&](std::size_t i) {
    try {
      scenes[i] = parse_valid(records[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  bool bad = false;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (errors[i].empty()) continue;
    report(err, kExitData, errors[i], records[i].line);
    bad = true;
  }
  if (bad) return kExitData;

  std::vector<VariantBody> bodies;
  try {
    bodies = variant_bodies(scenes, cfg.extraction, opt.jobs);
  } catch (const PipelineError& e) {
    report(err, kExitData, e.what(), std::nullopt, e.frame_id());
    return kExitData;
  }

  if (!opt.dump_bodies.empty()) {
    ensure_dir(opt.dump_bodies);
    std::set<std::string> written;
    for (const auto& b : bodies) {
      const std::string digest = body_digest(b.body);
      if (written.insert(digest).second) write_file(fs::path(opt.dump_bodies) / (digest + ".txt"), b.body);
    }
  }

  CorpusStats stats;
  if (!opt.counts.empty()) {
    std::map<std::string, std::size_t> counts;
    try {
      counts = parse_counts_file(read_file(opt.counts));
      stats = external_token_counts(bodies, counts);
    } catch (const PipelineError& e) {
      report(err, kExitData, e.what(), std::nullopt, e.frame_id());
      return kExitData;
    } catch (const CliFailure&) {
      throw;
    } catch (const std::exception& e) {
      throw CliFailure(kExitData, e.what());
    }
  } else {
    std::vector<std::size_t> counts(bodies.size());
    parallel_for(bodies.size(), opt.jobs,
                 [&](std::size_t i) { counts[i] = tokenizer->count(bodies[i].body); });
    stats = stats_from_counts(bodies, counts, std::string(tokenizer->name()));
  }

  const fs::path csv_path = opt.out;
  fs::path json_path = csv_path;
  if (json_path.extension() == ".csv") json_path.replace_extension();
  json_path += ".stats.json";
  if (csv_path.has_parent_path()) ensure_dir(csv_path.parent_path());
  const std::string csv = stats_csv(stats);
  write_file(csv_path, csv);
  write_file(json_path, stats_json(stats));
  if (!opt.quiet) out << csv;
  return kExitOk;
}

int cmd_synth(const Options& opt, std::ostream& out, std::ostream&) {
  if (opt.n < 1) throw CliFailure(kExitUsage, "--n must be at least 1");
  SynthConfig cfg;
  cfg.seed = opt.seed;
  std::string body;
  for (long long i = 0; i < opt.n; ++i) {
    body += snapshot_to_json(synth_scene(cfg, static_cast<std::uint64_t>(i)));
    body += "\n";
  }
  const fs::path path = opt.out;
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  write_file(path, body);
  if (!opt.quiet) out << opt.n << " scenes written to " << opt.out << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scene graph construction, serialization and prompt tooling", "sgp"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--config", opt.config_path, "Pipeline config JSON (default: $SGP_CONFIG)");
  app.add_flag("--quiet", opt.quiet, "Suppress summaries on stdout");
  app.add_option("--jobs", opt.jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate", "Check a snapshot JSONL file");
  validate->add_option("--in", opt.in, "Snapshot JSONL")->required();

  auto* build = app.add_subcommand("build", "Serialize one graph per snapshot");
  build->add_option("--in", opt.in, "Snapshot JSONL")->required();
  build->add_option("--out", opt.out, "Output directory")->required();
  build->add_option("--abstraction", opt.abstraction, "full | road_level | actor_only");
  build->add_option("--format", opt.format, "text | json | yaml");

  auto* prompt = app.add_subcommand("prompt", "Render one prompt per snapshot");
  prompt->add_option("--in", opt.in, "Snapshot JSONL")->required();
  prompt->add_option("--out", opt.out, "Output directory")->required();
  prompt->add_option("--template", opt.prompt_template, "v1 | v2 | v3");
  prompt->add_option("--abstraction", opt.abstraction, "full | road_level | actor_only");
  prompt->add_option("--format", opt.format, "text | json | yaml");
  prompt->add_flag("--no-graph", opt.no_graph, "Drop the scene-graph section");

  auto* stats = app.add_subcommand("stats", "Token statistics per abstraction and format");
  stats->add_option("--in", opt.in, "Snapshot JSONL")->required();
  stats->add_option("--out", opt.out, "CSV report path")->required();
  stats->add_option("--tokenizer", opt.tokenizer, "Tokenizer name");
  stats->add_option("--counts", opt.counts, "External counts file: '<sha256> <count>' lines");
  stats->add_option("--dump-bodies", opt.dump_bodies, "Write each body as <sha256>.txt here");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic snapshot corpus");
  synth->add_option("--seed", opt.seed, "Corpus seed");
  synth->add_option("--n", opt.n, "Number of scenes")->required();
  synth->add_option("--out", opt.out, "Output JSONL")->required();

  std::vector<std::string> argv_storage{"sgp"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report(err, kExitUsage, e.what());
    return kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(opt, out, err);
    if (build->parsed()) return cmd_build(opt, out, err);
    if (prompt->parsed()) return cmd_prompt(opt, out, err);
    if (stats->parsed()) return cmd_stats(opt, out, err);
    if (synth->parsed()) return cmd_synth(opt, out, err);
  } catch (const CliFailure& e) {
    report(err, e.code(), e.what());
    return e.code();
  } catch (const std::exception& e) {
    report(err, kExitData, e.what());
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace sgp
