#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sgp/cli.hpp"
#include "sgp/pipeline.hpp"
#include "sgp/synth.hpp"

namespace sgp {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  out << body;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sgp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    ::unsetenv("SGP_CONFIG");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string corpus(int n) {
    const std::string path = (dir_ / "in.jsonl").string();
    EXPECT_EQ(run({"--quiet", "synth", "--seed", "3", "--n", std::to_string(n), "--out", path}).code,
              0);
    return path;
  }

  fs::path dir_;
};

TEST(PipelineConfigJson, DefaultsAndOverrides) {
  const PipelineConfig d = parse_pipeline_config("{}");
  EXPECT_EQ(d.abstraction, Abstraction::kFull);
  EXPECT_EQ(d.format, Format::kText);
  EXPECT_EQ(d.prompt_template, TemplateVersion::kV3);
  EXPECT_EQ(d.tokenizer, "default");
  const PipelineConfig c = parse_pipeline_config(
      R"({"abstraction": "road_level", "format": "yaml", "template": "none",
          "extraction": {"bands": {"visible": 30}, "lateral_threshold_m": 2.0}})");
  EXPECT_EQ(c.abstraction, Abstraction::kRoadLevel);
  EXPECT_EQ(c.format, Format::kYaml);
  EXPECT_FALSE(c.prompt_template);
  EXPECT_DOUBLE_EQ(c.extraction.band_upper_m[5], 30.0);
  EXPECT_DOUBLE_EQ(c.extraction.lateral_threshold_m, 2.0);
  EXPECT_EQ(parse_pipeline_config(pipeline_config_to_json(c)).abstraction, c.abstraction);
}

TEST(PipelineConfigJson, StrictKeysAndValues) {
  EXPECT_THROW(parse_pipeline_config("{\"abstraction\": \"lane_level\"}"), ConfigError);
  EXPECT_THROW(parse_pipeline_config("{\"colour\": 1}"), ConfigError);
  EXPECT_THROW(parse_pipeline_config("{\"extraction\": {\"bands\": {\"far\": 1}}}"), ConfigError);
  EXPECT_THROW(parse_pipeline_config("{\"extraction\": {\"bands\": {\"near\": 50}}}"), ConfigError);
  EXPECT_THROW(parse_pipeline_config("[1"), ConfigError);
}

TEST_F(CliTest, SynthThenValidate) {
  const std::string in = corpus(10);
  const CliRun r = run({"validate", "--in", in});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "10 ok\n");
}

TEST_F(CliTest, SynthRepeatable) {
  const std::string a = (dir_ / "a.jsonl").string();
  const std::string b = (dir_ / "b.jsonl").string();
  EXPECT_EQ(run({"synth", "--seed", "1", "--n", "5", "--out", a}).code, 0);
  EXPECT_EQ(run({"synth", "--seed", "1", "--n", "5", "--out", b}).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(run({"synth", "--n", "0", "--out", a}).code, kExitUsage);
}

TEST_F(CliTest, ValidateReportsLineNumbers) {
  const std::string in = corpus(3);
  std::string body = slurp(in);
  const auto second = body.find('\n') + 1;
  const auto pos = body.find("\"road_id\":\"road_1\"", second);
  ASSERT_NE(pos, std::string::npos);
  body.replace(pos, 18, "\"road_id\":\"road_99\"");
  spit(in, body);
  const CliRun r = run({"validate", "--in", in});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find("error: code=data line=2 frame=frame_000001"), std::string::npos) << r.err;
}

TEST_F(CliTest, ValidateEmptyAndMissingFiles) {
  const std::string empty = (dir_ / "empty.jsonl").string();
  spit(empty, "");
  const CliRun r = run({"validate", "--in", empty});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.out.find("no records"), std::string::npos);
  EXPECT_EQ(run({"validate", "--in", (dir_ / "nope.jsonl").string()}).code, kExitIo);
}

TEST_F(CliTest, BuildWritesFilesAndManifest) {
  const std::string in = corpus(4);
  const fs::path out = dir_ / "out";
  const CliRun r = run({"build", "--in", in, "--abstraction", "actor_only", "--format", "text",
                     "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(out / "manifest.txt"),
            "frame_000000.actor_only.txt\nframe_000001.actor_only.txt\n"
            "frame_000002.actor_only.txt\nframe_000003.actor_only.txt\n");
  PipelineConfig cfg;
  cfg.abstraction = Abstraction::kActorOnly;
  SynthConfig sc;
  sc.seed = 3;
  EXPECT_EQ(slurp(out / "frame_000002.actor_only.txt"),
            run_graph_pipeline(synth_scene(sc, 2), cfg).body);
}

TEST_F(CliTest, BuildHonoursConfigFileAndEnv) {
  const std::string in = corpus(2);
  const fs::path cfg = dir_ / "cfg.json";
  spit(cfg, R"({"abstraction": "road_level", "format": "yaml"})");
  const fs::path out = dir_ / "out";
  ASSERT_EQ(run({"--config", cfg.string(), "build", "--in", in, "--out", out.string()}).code, 0);
  EXPECT_TRUE(fs::exists(out / "frame_000000.road_level.yaml"));
  ::setenv("SGP_CONFIG", cfg.string().c_str(), 1);
  const fs::path out2 = dir_ / "out2";
  ASSERT_EQ(run({"build", "--in", in, "--format", "json", "--out", out2.string()}).code, 0);
  EXPECT_TRUE(fs::exists(out2 / "frame_000001.road_level.json"));
  spit(cfg, R"({"abstraction": 7})");
  EXPECT_EQ(run({"build", "--in", in, "--out", out2.string()}).code, kExitUsage);
}

TEST_F(CliTest, BuildIsolatesBadRecordsAndDuplicates) {
  const std::string in = corpus(3);
  std::string body = slurp(in);
  const std::string first = body.substr(0, body.find('\n') + 1);
  body += first;           // duplicate frame id
  body += "{not json}\n";  // malformed
  spit(in, body);
  const fs::path out = dir_ / "out";
  const CliRun r = run({"build", "--in", in, "--out", out.string()});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find("line=4 frame=frame_000000 duplicate frame_id"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("line=5"), std::string::npos) << r.err;
  const std::string manifest = slurp(out / "manifest.txt");
  EXPECT_EQ(std::count(manifest.begin(), manifest.end(), '\n'), 3);
}

TEST_F(CliTest, PromptTemplatesAndNoGraph) {
  const std::string in = corpus(2);
  const fs::path out = dir_ / "p";
  ASSERT_EQ(run({"prompt", "--in", in, "--template", "v3", "--format", "json", "--out",
                 out.string()})
                .code,
            0);
  const std::string p = slurp(out / "frame_000000.prompt.txt");
  EXPECT_NE(p.find("```json\n"), std::string::npos);
  const fs::path bare = dir_ / "bare";
  ASSERT_EQ(run({"prompt", "--in", in, "--no-graph", "--out", bare.string()}).code, 0);
  const std::string q = slurp(bare / "frame_000000.prompt.txt");
  EXPECT_EQ(q.find("Scene Graph"), std::string::npos);
  EXPECT_NE(q.find(synth_scene(SynthConfig{3}, 0).command), std::string::npos);
  EXPECT_EQ(run({"prompt", "--in", in, "--template", "none", "--out", bare.string()}).code,
            kExitUsage);
}

TEST_F(CliTest, PromptTemplateOverride) {
  const std::string in = corpus(1);
  const fs::path tmpl = dir_ / "t.txt";
  spit(tmpl, "CMD={command}\nG={graph}\n");
  const fs::path cfg = dir_ / "cfg.json";
  spit(cfg, "{\"template\": \"v2\", \"template_override\": \"" + tmpl.string() + "\"}");
  const fs::path out = dir_ / "p";
  ASSERT_EQ(run({"--config", cfg.string(), "prompt", "--in", in, "--out", out.string()}).code, 0);
  EXPECT_EQ(slurp(out / "frame_000000.prompt.txt").rfind("CMD=", 0), 0u);
  spit(tmpl, "{command} only");
  EXPECT_EQ(run({"--config", cfg.string(), "prompt", "--in", in, "--out", out.string()}).code,
            kExitUsage);
}

TEST_F(CliTest, PromptEmptyCommandIsRecordError) {
  const std::string in = corpus(2);
  std::string body = slurp(in);
  const auto pos = body.find("\"command\":\"");
  const auto end = body.find('"', pos + 11);
  body.erase(pos + 11, end - pos - 11);
  spit(in, body);
  const CliRun r = run({"prompt", "--in", in, "--out", (dir_ / "p").string()});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find("line=1 frame=frame_000000"), std::string::npos) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "p" / "frame_000001.prompt.txt"));
}

TEST_F(CliTest, StatsReports) {
  const std::string in = corpus(1);
  const fs::path csv = dir_ / "report.csv";
  const CliRun r = run({"--quiet", "stats", "--in", in, "--out", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const std::string body = slurp(csv);
  EXPECT_EQ(std::count(body.begin(), body.end(), '\n'), 10);
  std::istringstream rows(body);
  std::string line;
  std::getline(rows, line);
  while (std::getline(rows, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    ASSERT_EQ(f.size(), 8u);
    EXPECT_EQ(f[4], f[7]) << line;  // min == max for one scene
  }
  EXPECT_TRUE(fs::exists(dir_ / "report.stats.json"));
  EXPECT_EQ(run({"stats", "--in", in, "--tokenizer", "bogus", "--out", csv.string()}).code,
            kExitUsage);
}

TEST_F(CliTest, StatsExternalCounts) {
  const std::string in = corpus(2);
  const fs::path bodies = dir_ / "bodies";
  const fs::path csv = dir_ / "r.csv";
  ASSERT_EQ(run({"--quiet", "stats", "--in", in, "--out", csv.string(), "--dump-bodies",
                 bodies.string()})
                .code,
            0);
  std::string counts = "# sha256 digest, whitespace word count\n";
  for (const auto& entry : fs::directory_iterator(bodies)) {
    std::istringstream words(slurp(entry.path()));
    std::size_t n = 0;
    for (std::string w; words >> w;) ++n;
    counts += entry.path().stem().string() + " " + std::to_string(n) + "\n";
  }
  spit(dir_ / "counts.txt", counts);
  const fs::path ext = dir_ / "ext.csv";
  ASSERT_EQ(run({"--quiet", "stats", "--in", in, "--out", ext.string(), "--counts",
                 (dir_ / "counts.txt").string()})
                .code,
            0);
  const fs::path ws = dir_ / "ws.csv";
  ASSERT_EQ(run({"--quiet", "stats", "--in", in, "--out", ws.string(), "--tokenizer",
                 "whitespace"})
                .code,
            0);
  EXPECT_EQ(slurp(ext), slurp(ws));
  spit(dir_ / "counts.txt", counts.substr(0, counts.rfind('\n', counts.size() - 2) + 1));
  const CliRun r = run({"stats", "--in", in, "--out", ext.string(), "--counts",
                     (dir_ / "counts.txt").string()});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find("frame=frame_"), std::string::npos) << r.err;
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"build", "--in", "x"}).code, kExitUsage);
  const CliRun r = run({"build", "--in", "x", "--out", "y", "--format", "xml"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_EQ(r.err.rfind("error: code=usage ", 0), 0u) << r.err;
  EXPECT_EQ(run({"--jobs", "0", "validate", "--in", "x"}).code, kExitUsage);
  EXPECT_EQ(run({"--help"}).code, 0);
}

}  // namespace
}  // namespace sgp
