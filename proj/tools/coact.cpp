#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "coact/filtering.hpp"
#include "coact/graph_io.hpp"
#include "coact/ingest.hpp"
#include "coact/metrics.hpp"
#include "coact/pipeline.hpp"
#include "coact/report.hpp"
#include "coact/service.hpp"
#include "coact/synthgen.hpp"
#include "coact/tuning.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace coact;

namespace {

struct GlobalFlags {
  std::string config;
  std::string corpus;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = -1;
  bool drop_low_info_frames = false;
};

pipeline::PipelineConfig resolve_config(const GlobalFlags& g) {
  pipeline::PipelineConfig c;
  if (!g.config.empty()) c = pipeline::PipelineConfig::load(g.config);
  if (!g.corpus.empty()) c.corpus = g.corpus;
  if (!g.out.empty()) c.out = g.out;
  if (g.seed_set) c.seed = g.seed;
  if (g.threads >= 0) c.build.threads = static_cast<unsigned>(g.threads);
  if (g.drop_low_info_frames) c.build.video.drop_low_information = true;
  return c;
}

LayerKind require_kind(const std::string& text) {
  auto kind = parse_layer_kind(text);
  if (!kind) throw Error(ErrorCode::InvalidArgument, "unknown layer '" + text + "'");
  return *kind;
}

/// Builds only the requested layers of the configured corpus.
pipeline::Network network_for(pipeline::PipelineConfig config, const std::vector<std::string>& layers) {
  if (!layers.empty()) {
    config.layers.clear();
    for (const auto& l : layers) config.layers.push_back(require_kind(l));
  }
  return pipeline::build_network(config);
}

std::string graph_text(const Layer& layer, graph_io::GraphFormat format) {
  std::ostringstream out;
  graph_io::write_graph(out, layer, format);
  return out.str();
}

void print(const json& doc) { std::cout << doc.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coact: multilayer co-action networks for coordinated behaviour detection"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--config", g.config, "Pipeline config (JSON)");
  app.add_option("--corpus", g.corpus, "Corpus JSON Lines file (overrides config)");
  app.add_option("--out", g.out, "Output directory (overrides config)");
  app.add_option("--seed", g.seed, "Random seed")->each([&](const std::string&) { g.seed_set = true; });
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)");
  app.add_flag("--drop-low-info-frames", g.drop_low_info_frames, "Ignore low-information frames in VS");

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "Validate a corpus and print its summary");
  std::string normalized;
  ingest_cmd->add_option("--normalized", normalized, "Write the parsed corpus back as JSON Lines");

  // build
  auto* build_cmd = app.add_subcommand("build", "Build layers and export them under OUT/layers");
  std::vector<std::string> layer_names;
  build_cmd->add_option("--layer", layer_names, "Layer(s) to build (default: config)");

  // filter
  auto* filter_cmd = app.add_subcommand("filter", "Filter one layer and print snapshot stats");
  std::string filter_layer;
  std::string filter_label;
  std::string temporal_mode = "per_pair";
  filter_cmd->add_option("--layer", filter_layer, "Layer")->required();
  filter_cmd->add_option("--filter", filter_label, "Filter label (e.g. frequency:10, frequency:avg, temporal:60)");
  filter_cmd->add_option("--temporal-mode", temporal_mode, "per_pair or any_pair")
      ->check(CLI::IsMember({"per_pair", "any_pair"}));

  // analyze
  app.add_subcommand("analyze", "Run the full pipeline and write all artifacts");

  // overlap
  auto* overlap_cmd = app.add_subcommand("overlap", "Cross-layer overlap of the filtered layers");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Filter candidate sweep per layer");
  std::vector<std::string> sweep_layers;
  sweep_cmd->add_option("--layer", sweep_layers, "Layer(s) (default: config)");

  // tune
  auto* tune_cmd = app.add_subcommand("tune", "Calibrate audio thresholds from labelled pairs");
  std::string labels_path;
  std::string policy = "first_perfect";
  tune_cmd->add_option("--labels", labels_path, "Labelled pairs CSV")->required();
  tune_cmd->add_option("--policy", policy, "first_perfect or max_f1")->check(CLI::IsMember({"first_perfect", "max_f1"}));

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus with ground truth");
  synthgen::ScenarioConfig sc;
  synth_cmd->add_option("--posts", sc.background.posts, "Background posts");
  synth_cmd->add_option("--users", sc.background.users, "Background users");
  synth_cmd->add_option("--reuse-pairs", sc.reuse_pairs_per_type, "Reuse pairs per type");
  synth_cmd->add_option("--clusters", sc.clusters, "Injected coordinated clusters");
  synth_cmd->add_option("--cluster-min", sc.cluster_min_users, "Minimum users per cluster");
  synth_cmd->add_option("--cluster-max", sc.cluster_max_users, "Maximum users per cluster");
  synth_cmd->add_option("--cluster-posts", sc.cluster_posts_per_user, "Posts per cluster user");
  synth_cmd->add_option("--time-window", sc.jitter.time_window, "Cluster burst window in seconds (0 = spread)");
  synth_cmd->add_option("--mutation-rate", sc.jitter.description_mutation_rate, "Cluster description mutation rate");
  synth_cmd->add_flag("--permute-hashtags", sc.jitter.permute_hashtags, "Shuffle hashtags per cluster post");

  // export
  auto* export_cmd = app.add_subcommand("export", "Export one layer or snapshot as GraphML or CSV");
  std::string export_layer;
  std::string export_format = "graphml";
  std::string export_filter;
  std::string export_file;
  export_cmd->add_option("--layer", export_layer, "Layer")->required();
  export_cmd->add_option("--format", export_format, "graphml or csv");
  export_cmd->add_option("--filter", export_filter, "Filter label to apply before export");
  export_cmd->add_option("--file", export_file, "Destination (default OUT/<layer>.<ext>)");

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP JSON API");
  std::string host = "127.0.0.1";
  int port = 8080;
  bool pseudonymize = false;
  serve_cmd->add_option("--host", host, "Bind address");
  serve_cmd->add_option("--port", port, "Port");
  serve_cmd->add_flag("--pseudonymize", pseudonymize, "Replace user ids and usernames with stable pseudonyms");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth_cmd->parsed()) {
      const fs::path out = g.out.empty() ? fs::path("synth") : fs::path(g.out);
      const auto scenario = synthgen::generate_scenario(sc, g.seed);
      std::ostringstream corpus;
      ingest::write_dataset(corpus, scenario.posts);
      graph_io::write_file_atomic(out / "corpus.jsonl", corpus.str());
      graph_io::write_file_atomic(out / "ground_truth.json", pipeline::dump_json(synthgen::ground_truth_json(scenario)));
      print(json{{"posts", scenario.posts.size()},
                 {"reuse_pairs", scenario.reuse_pairs.size()},
                 {"clusters", scenario.clusters.size()},
                 {"corpus", (out / "corpus.jsonl").string()},
                 {"ground_truth", (out / "ground_truth.json").string()}});
      return 0;
    }

    const auto config = resolve_config(g);

    if (ingest_cmd->parsed()) {
      if (config.corpus.empty()) throw Error(ErrorCode::InvalidConfig, "no corpus given (--corpus or --config)");
      if (!fs::is_regular_file(config.corpus)) {
        throw Error(ErrorCode::MissingCorpus, "corpus not found: " + config.corpus.string());
      }
      auto parsed = ingest::parse_dataset_file(config.corpus);
      json errors = json::array();
      for (const auto& e : parsed.errors) errors.push_back(json{{"line", e.line}, {"message", e.message}});
      if (!normalized.empty()) {
        std::ostringstream out;
        ingest::write_dataset(out, parsed.posts);
        graph_io::write_file_atomic(normalized, out.str());
      }
      print(json{{"summary", report::to_json(parsed.summary)},
                 {"duplicates", parsed.duplicates},
                 {"errors", std::move(errors)}});
      return 0;
    }

    if (app.got_subcommand("analyze")) {
      const auto result = pipeline::run_pipeline(config);
      std::cout << "wrote " << result.written.size() << " files to " << config.out.string() << "\n";
      return 0;
    }

    if (build_cmd->parsed()) {
      const auto net = network_for(config, layer_names);
      json out = json::array();
      for (const Layer& l : net.layers) {
        for (auto f : config.export_formats) {
          graph_io::write_file_atomic(config.out / "layers" / (std::string(to_string(l.kind())) + std::string(graph_io::extension(f))),
                                      graph_text(l, f));
        }
        out.push_back(json{{"layer", std::string(to_string(l.kind()))},
                           {"nodes", l.node_count()},
                           {"edges", l.edge_count()},
                           {"evidence_complete", l.evidence_complete()}});
      }
      print(out);
      return 0;
    }

    if (filter_cmd->parsed()) {
      const auto kind = require_kind(filter_layer);
      const auto net = network_for(config, {filter_layer});
      const FilterSpec spec = filter_label.empty() ? config.filter_for(kind) : FilterSpec::parse(filter_label);
      const auto mode = temporal_mode == "any_pair" ? filtering::TemporalMode::AnyPair : filtering::TemporalMode::PerPair;
      const auto snap = filtering::apply_filter(net.layers.front(), spec, mode);
      for (auto f : config.export_formats) {
        graph_io::write_file_atomic(config.out / "filtered" / (std::string(to_string(kind)) + std::string(graph_io::extension(f))),
                                    graph_text(snap.layer, f));
      }
      print(json{{"layer", std::string(to_string(kind))},
                 {"filter", report::to_json(snap.filter)},
                 {"snapshot_id", snap.snapshot_id},
                 {"stats", report::to_json(snap.stats)},
                 {"top_component_sizes", snap.largest_components},
                 {"viable", filtering::is_viable(snap, config.prune.min_edges, config.prune.min_component_size)}});
      return 0;
    }

    if (overlap_cmd->parsed()) {
      const auto net = pipeline::build_network(config);
      std::vector<filtering::FilteredSnapshot> snaps;
      for (const Layer& l : net.layers) snaps.push_back(pipeline::select_snapshot(l, config.filter_for(l.kind()), config.temporal_mode));
      std::vector<const Layer*> ptrs;
      std::vector<std::string> labels;
      for (const auto& s : snaps) {
        ptrs.push_back(&s.layer);
        labels.emplace_back(abbreviation(s.base_kind));
      }
      const auto matrix = metrics::cross_layer_overlap(ptrs, labels);
      std::ostringstream chord;
      metrics::write_chord_csv(chord, matrix);
      graph_io::write_file_atomic(config.out / "overlap.csv", chord.str());
      graph_io::write_file_atomic(config.out / "overlap.json", pipeline::dump_json(report::to_json(matrix)));
      std::cout << chord.str();
      return 0;
    }

    if (sweep_cmd->parsed()) {
      const auto net = network_for(config, sweep_layers);
      json all = json::array();
      for (const Layer& l : net.layers) {
        const auto doc = report::to_json(filtering::sweep_report(l, config.prune.min_edges,
                                                                 config.prune.min_component_size, config.temporal_mode));
        graph_io::write_file_atomic(config.out / "sweep" / (std::string(to_string(l.kind())) + ".json"), pipeline::dump_json(doc));
        all.push_back(doc);
      }
      print(all);
      return 0;
    }

    if (tune_cmd->parsed()) {
      if (config.corpus.empty()) throw Error(ErrorCode::InvalidConfig, "no corpus given (--corpus or --config)");
      if (!fs::is_regular_file(config.corpus)) {
        throw Error(ErrorCode::MissingCorpus, "corpus not found: " + config.corpus.string());
      }
      std::ifstream labels_in(labels_path);
      if (!labels_in) throw Error(ErrorCode::Io, "cannot read labels " + labels_path);
      const auto pairs = tuning::parse_labels_csv(labels_in);
      std::map<std::string, std::string> transcripts;
      for (const auto& p : ingest::parse_dataset_file(config.corpus).posts) {
        if (p.transcript) transcripts[p.post_id] = *p.transcript;
      }
      const auto cal = tuning::calibrate_audio(
          pairs, transcripts, policy == "max_f1" ? tuning::ThresholdPolicy::MaxF1 : tuning::ThresholdPolicy::FirstPerfect);
      auto curve_json = [](const std::vector<tuning::CurvePoint>& curve) {
        json out = json::array();
        for (const auto& p : curve) {
          out.push_back(json{{"threshold", p.threshold},
                             {"precision", p.precision},
                             {"recall", p.recall},
                             {"f1", p.f1()}});
        }
        return out;
      };
      const json doc{{"policy", policy},
                     {"pairs", pairs.size()},
                     {"exact_threshold", cal.thresholds.exact},
                     {"partial_threshold", cal.thresholds.partial},
                     {"midpoint", cal.midpoint},
                     {"exact_curve", curve_json(cal.exact_curve)},
                     {"partial_curve", curve_json(cal.partial_curve)}};
      if (!g.out.empty()) graph_io::write_file_atomic(fs::path(g.out) / "tuning.json", pipeline::dump_json(doc));
      print(doc);
      return 0;
    }

    if (export_cmd->parsed()) {
      const auto kind = require_kind(export_layer);
      const auto format = graph_io::parse_format(export_format);
      const auto net = network_for(config, {export_layer});
      Layer layer = net.layers.front();
      if (!export_filter.empty()) {
        layer = pipeline::select_snapshot(layer, FilterSpec::parse(export_filter), config.temporal_mode).layer;
      }
      const fs::path dest = export_file.empty()
                                ? config.out / (std::string(to_string(kind)) + std::string(graph_io::extension(format)))
                                : fs::path(export_file);
      graph_io::write_file_atomic(dest, graph_text(layer, format));
      std::cout << dest.string() << "\n";
      return 0;
    }

    if (serve_cmd->parsed()) {
      service::ServiceOptions opts;
      opts.pseudonymize = pseudonymize;
      opts.temporal_mode = config.temporal_mode;
      opts.prune = config.prune;
      service::Service svc(pipeline::build_network(config), opts);
      service::HttpServer server(svc);
      std::cerr << "serving on http://" << host << ":" << port << "\n";
      server.run(host, port);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::MissingCorpus: return 2;
      case ErrorCode::InvalidConfig: return 3;
      default: return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
