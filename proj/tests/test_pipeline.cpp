#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "coact/pipeline.hpp"
#include "coact/synthgen.hpp"

using namespace coact;
using namespace coact::pipeline;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("coact_pipeline_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path small_corpus(const fs::path& dir) {
  synthgen::ScenarioConfig cfg;
  cfg.background.posts = 300;
  cfg.background.users = 80;
  cfg.reuse_pairs_per_type = 4;
  cfg.clusters = 2;
  cfg.cluster_min_users = 9;
  cfg.cluster_max_users = 10;
  const auto s = synthgen::generate_scenario(cfg, 3);
  std::ofstream out(dir / "corpus.jsonl");
  ingest::write_dataset(out, s.posts);
  return dir / "corpus.jsonl";
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(COACT_CLI) + " " + args + " > /dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("config parsing accepts every documented key") {
  const auto doc = nlohmann::json::parse(R"({
    "corpus": "c.jsonl", "out": "o", "layers": ["HS", "music_id"],
    "filters": {"HS": "frequency:2", "MI": {"variant": "temporal", "value": 60}},
    "temporal_mode": "any_pair", "prune": {"min_edges": 2, "min_component_size": 5},
    "export_formats": ["csv"], "group_cap": 100, "keep_evidence": false,
    "drop_low_info_frames": true, "video_max_distance": 0,
    "audio_thresholds": {"exact": 90, "partial": 70}, "threads": 2,
    "top_components": 5, "evidence_sample": 7, "seed": 4})");
  const auto c = PipelineConfig::from_json(doc);
  CHECK(c.layers == std::vector<LayerKind>{LayerKind::HashtagSequence, LayerKind::MusicId});
  CHECK(c.filter_for(LayerKind::HashtagSequence) == FilterSpec::frequency(2));
  CHECK(c.filter_for(LayerKind::MusicId) == FilterSpec::temporal(60));
  CHECK(c.filter_for(LayerKind::VideoDescription) == FilterSpec::frequency(10));
  CHECK(c.temporal_mode == filtering::TemporalMode::AnyPair);
  CHECK(c.prune.min_component_size == 5);
  CHECK(c.export_formats == std::vector<graph_io::GraphFormat>{graph_io::GraphFormat::Csv});
  CHECK(c.build.group_cap == 100);
  CHECK_FALSE(c.build.keep_evidence);
  CHECK(c.build.video.drop_low_information);
  CHECK(c.build.audio_thresholds.exact == 90);
  CHECK(c.build.threads == 2);
  CHECK(c.top_components == 5);
}

TEST_CASE("invalid configs raise InvalidConfig") {
  for (const char* text : {R"({"bogus": 1})", R"({"layers": ["XX"]})", R"({"filters": {"HS": "frequency:0"}})",
                           R"({"threads": "many"})", R"({"export_formats": ["gexf"]})", R"([1, 2])",
                           R"({"audio_thresholds": {"exact": 101}})", R"({"prune": {"min_size": 3}})"}) {
    CAPTURE(text);
    try {
      PipelineConfig::from_json(nlohmann::json::parse(text));
      FAIL("expected InvalidConfig");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidConfig);
    }
  }
}

TEST_CASE("missing corpus is reported as such") {
  PipelineConfig c;
  c.corpus = "/nonexistent/corpus.jsonl";
  try {
    build_network(c);
    FAIL("expected MissingCorpus");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingCorpus);
  }
}

TEST_CASE("pipeline writes every artifact and is byte-identical on rerun") {
  const auto dir = scratch("full");
  PipelineConfig c;
  c.corpus = small_corpus(dir);
  c.out = dir / "run1";
  const auto r1 = run_pipeline(c);
  for (const char* f : {"summary.json", "stats.json", "stats.csv", "overlap.csv", "overlap.json"}) {
    CHECK(fs::exists(c.out / f));
  }
  for (LayerKind k : kAllLayerKinds) {
    const std::string n(to_string(k));
    CHECK(fs::exists(c.out / "layers" / (n + ".graphml")));
    CHECK(fs::exists(c.out / "layers" / (n + ".csv")));
    CHECK(fs::exists(c.out / "filtered" / (n + ".csv")));
    CHECK(fs::exists(c.out / "sweep" / (n + ".json")));
    CHECK(fs::exists(c.out / "components" / (n + ".json")));
  }
  c.out = dir / "run2";
  c.build.threads = 3;
  const auto r2 = run_pipeline(c);
  REQUIRE(r1.written == r2.written);
  for (const auto& rel : r1.written) {
    CAPTURE(rel.string());
    CHECK(slurp(dir / "run1" / rel) == slurp(dir / "run2" / rel));
  }
  for (const auto& entry : fs::recursive_directory_iterator(dir / "run1")) {
    CHECK(entry.path().extension() != ".tmp");
  }
}

TEST_CASE("empty corpus gives empty artifacts") {
  const auto dir = scratch("empty");
  std::ofstream(dir / "empty.jsonl").close();
  PipelineConfig c;
  c.corpus = dir / "empty.jsonl";
  c.out = dir / "out";
  run_pipeline(c);
  CHECK(slurp(c.out / "layers" / "hashtag_sequence.csv") == "user_a,user_b,weight,min_delta_t\n");
  const auto stats = nlohmann::json::parse(slurp(c.out / "stats.json"));
  CHECK(stats["layers"].size() == 7);
}

TEST_CASE("truncated evidence falls back to whole-edge temporal filtering") {
  const auto dir = scratch("truncated");
  PipelineConfig c;
  c.corpus = small_corpus(dir);
  c.out = dir / "out";
  c.layers = {LayerKind::MusicId};
  c.filters[LayerKind::MusicId] = FilterSpec::temporal(300);
  c.build.keep_evidence = false;
  run_pipeline(c);
  const auto stats = nlohmann::json::parse(slurp(c.out / "stats.json"));
  CHECK(stats["layers"][0]["filtered"]["temporal_mode"] == "any_pair");
}

TEST_CASE("cli exit codes") {
  const auto dir = scratch("cli");
  CHECK(run_cli("analyze --corpus " + (dir / "missing.jsonl").string() + " --out " + (dir / "o").string()) == 2);
  std::ofstream(dir / "bad.json") << R"({"corpus": "x", "unknown": true})";
  CHECK(run_cli("analyze --config " + (dir / "bad.json").string()) == 3);
  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK(run_cli("analyze --config " + (dir / "broken.json").string()) == 3);
  const auto corpus = small_corpus(dir);
  std::ofstream(dir / "good.json") << R"({"corpus": ")" << corpus.string() << R"(", "layers": ["HS", "VD"]})";
  CHECK(run_cli("analyze --config " + (dir / "good.json").string() + " --out " + (dir / "o").string()) == 0);
  CHECK(fs::exists(dir / "o" / "summary.json"));
  CHECK(run_cli("export --corpus " + corpus.string() + " --layer VD --format gexf --out " + (dir / "o").string()) == 1);
  CHECK(run_cli("export --corpus " + corpus.string() + " --layer VD --format csv --out " + (dir / "o").string()) == 0);
  CHECK(fs::exists(dir / "o" / "video_description.csv"));
}
