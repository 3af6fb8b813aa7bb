#include "coact/pipeline.hpp"

#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "coact/digest.hpp"
#include "coact/metrics.hpp"
#include "coact/report.hpp"

namespace coact::pipeline {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& message) { throw Error(ErrorCode::InvalidConfig, message); }

template <typename T>
T get_as(const json& value, std::string_view key) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    config_error("key '" + std::string(key) + "' has the wrong type");
  }
}

std::int64_t get_int(const json& value, std::string_view key, std::int64_t min, std::int64_t max) {
  if (!value.is_number_integer()) config_error("key '" + std::string(key) + "' must be an integer");
  const auto v = value.get<std::int64_t>();
  if (v < min || v > max) {
    config_error("key '" + std::string(key) + "' must be in [" + std::to_string(min) + ", " +
                 std::to_string(max) + "]");
  }
  return v;
}

bool get_bool(const json& value, std::string_view key) {
  if (!value.is_boolean()) config_error("key '" + std::string(key) + "' must be a boolean");
  return value.get<bool>();
}

LayerKind get_kind(const std::string& text) {
  auto kind = parse_layer_kind(text);
  if (!kind) config_error("unknown layer '" + text + "'");
  return *kind;
}

FilterSpec get_filter(const json& value, std::string_view key) {
  try {
    if (value.is_string()) return FilterSpec::parse(value.get<std::string>());
    if (value.is_object()) {
      for (const auto& [k, v] : value.items()) {
        if (k != "variant" && k != "value") config_error("unknown key '" + k + "' in filter " + std::string(key));
      }
      if (!value.contains("variant") || !value["variant"].is_string()) {
        config_error("filter " + std::string(key) + " needs a string 'variant'");
      }
      std::int64_t v = 0;
      if (value.contains("value")) v = get_int(value["value"], "value", 0, std::numeric_limits<std::int64_t>::max());
      return FilterSpec::from_variant(value["variant"].get<std::string>(), v);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidConfig) throw;
    config_error("filter for " + std::string(key) + ": " + e.what());
  }
  config_error("filter for " + std::string(key) + " must be a label string or an object");
}

std::string_view temporal_mode_name(filtering::TemporalMode mode) {
  return mode == filtering::TemporalMode::PerPair ? "per_pair" : "any_pair";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingCorpus, "cannot open corpus " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string layer_text(const Layer& layer, graph_io::GraphFormat format) {
  std::ostringstream out;
  graph_io::write_graph(out, layer, format);
  return out.str();
}

}  // namespace

FilterSpec PipelineConfig::filter_for(LayerKind kind) const {
  auto it = filters.find(kind);
  return it == filters.end() ? default_filter(kind) : it->second;
}

PipelineConfig PipelineConfig::from_json(const json& doc) {
  if (!doc.is_object()) config_error("config must be a JSON object");
  PipelineConfig c;
  for (const auto& [key, value] : doc.items()) {
    if (key == "corpus") {
      c.corpus = get_as<std::string>(value, key);
    } else if (key == "out") {
      c.out = get_as<std::string>(value, key);
    } else if (key == "layers") {
      if (!value.is_array()) config_error("'layers' must be an array");
      c.layers.clear();
      std::set<LayerKind> seen;
      for (const auto& item : value) {
        const auto kind = get_kind(get_as<std::string>(item, key));
        if (!seen.insert(kind).second) config_error("layer listed twice: " + std::string(to_string(kind)));
        c.layers.push_back(kind);
      }
    } else if (key == "filters") {
      if (!value.is_object()) config_error("'filters' must be an object keyed by layer");
      for (const auto& [layer, spec] : value.items()) c.filters[get_kind(layer)] = get_filter(spec, layer);
    } else if (key == "temporal_mode") {
      const auto mode = get_as<std::string>(value, key);
      if (mode == "per_pair") {
        c.temporal_mode = filtering::TemporalMode::PerPair;
      } else if (mode == "any_pair") {
        c.temporal_mode = filtering::TemporalMode::AnyPair;
      } else {
        config_error("temporal_mode must be per_pair or any_pair");
      }
    } else if (key == "prune") {
      if (!value.is_object()) config_error("'prune' must be an object");
      for (const auto& [pk, pv] : value.items()) {
        if (pk == "min_edges") {
          c.prune.min_edges = static_cast<std::size_t>(get_int(pv, pk, 0, 1LL << 40));
        } else if (pk == "min_component_size") {
          c.prune.min_component_size = static_cast<std::size_t>(get_int(pv, pk, 0, 1LL << 40));
        } else {
          config_error("unknown key 'prune." + pk + "'");
        }
      }
    } else if (key == "export_formats") {
      if (!value.is_array()) config_error("'export_formats' must be an array");
      c.export_formats.clear();
      for (const auto& item : value) {
        try {
          const auto f = graph_io::parse_format(get_as<std::string>(item, key));
          if (std::find(c.export_formats.begin(), c.export_formats.end(), f) == c.export_formats.end()) {
            c.export_formats.push_back(f);
          }
        } catch (const Error& e) {
          if (e.code() == ErrorCode::InvalidConfig) throw;
          config_error(e.what());
        }
      }
    } else if (key == "group_cap") {
      c.build.group_cap = static_cast<std::size_t>(get_int(value, key, 2, 1LL << 40));
    } else if (key == "keep_evidence") {
      c.build.keep_evidence = get_bool(value, key);
    } else if (key == "drop_low_info_frames") {
      c.build.video.drop_low_information = get_bool(value, key);
    } else if (key == "video_max_distance") {
      c.build.video.max_distance = static_cast<int>(get_int(value, key, 0, 1));
    } else if (key == "audio_thresholds") {
      if (!value.is_object()) config_error("'audio_thresholds' must be an object");
      for (const auto& [ak, av] : value.items()) {
        if (ak == "exact") {
          c.build.audio_thresholds.exact = static_cast<int>(get_int(av, ak, 0, 100));
        } else if (ak == "partial") {
          c.build.audio_thresholds.partial = static_cast<int>(get_int(av, ak, 0, 100));
        } else {
          config_error("unknown key 'audio_thresholds." + ak + "'");
        }
      }
    } else if (key == "threads") {
      c.build.threads = static_cast<unsigned>(get_int(value, key, 0, 1024));
    } else if (key == "top_components") {
      c.top_components = static_cast<int>(get_int(value, key, 1, 1 << 20));
    } else if (key == "evidence_sample") {
      c.evidence_sample = static_cast<std::size_t>(get_int(value, key, 0, 1 << 20));
    } else if (key == "seed") {
      c.seed = static_cast<std::uint64_t>(get_int(value, key, 0, std::numeric_limits<std::int64_t>::max()));
    } else {
      config_error("unknown key '" + key + "'");
    }
  }
  return c;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error("cannot read config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    config_error("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(doc);
}

json PipelineConfig::to_json() const {
  json layer_names = json::array();
  json filter_map = json::object();
  for (LayerKind k : layers) {
    layer_names.push_back(std::string(to_string(k)));
    filter_map[std::string(to_string(k))] = filter_for(k).label();
  }
  json formats = json::array();
  for (auto f : export_formats) formats.push_back(f == graph_io::GraphFormat::GraphML ? "graphml" : "csv");
  return json{{"layers", std::move(layer_names)},
              {"filters", std::move(filter_map)},
              {"temporal_mode", std::string(temporal_mode_name(temporal_mode))},
              {"prune", {{"min_edges", prune.min_edges}, {"min_component_size", prune.min_component_size}}},
              {"export_formats", std::move(formats)},
              {"group_cap", build.group_cap},
              {"keep_evidence", build.keep_evidence},
              {"drop_low_info_frames", build.video.drop_low_information},
              {"video_max_distance", build.video.max_distance},
              {"audio_thresholds", {{"exact", build.audio_thresholds.exact}, {"partial", build.audio_thresholds.partial}}},
              {"top_components", top_components},
              {"evidence_sample", evidence_sample},
              {"seed", seed}};
}

const Layer* Network::find(LayerKind kind) const {
  for (const Layer& l : layers) {
    if (l.kind() == kind) return &l;
  }
  return nullptr;
}

std::vector<Layer> build_layers(const layers::Corpus& corpus, std::span<const LayerKind> kinds,
                                const layers::BuildOptions& options) {
  std::optional<layers::AudioLayers> audio;
  std::vector<Layer> out;
  for (LayerKind kind : kinds) {
    switch (kind) {
      case LayerKind::SameAudio:
      case LayerKind::PartialAudio:
        if (!audio) audio = layers::build_audio_layers(corpus, options);
        out.push_back(kind == LayerKind::SameAudio ? audio->same : audio->partial);
        break;
      case LayerKind::VideoSimilarity:
        out.push_back(layers::build_video_layer(corpus, options));
        break;
      default:
        out.push_back(layers::build_exact_layer(corpus, kind, options));
    }
  }
  return out;
}

Network build_network(const PipelineConfig& config) {
  if (config.corpus.empty()) throw Error(ErrorCode::InvalidConfig, "no corpus configured");
  if (!std::filesystem::is_regular_file(config.corpus)) {
    throw Error(ErrorCode::MissingCorpus, "corpus not found: " + config.corpus.string());
  }
  const std::string bytes = read_file(config.corpus);
  Network net;
  net.corpus_sha256 = sha256_hex(bytes);
  std::istringstream in(bytes);
  auto parsed = ingest::parse_dataset(in);
  ingest::resolve_frame_images(parsed.posts, config.corpus.parent_path());
  net.summary = parsed.summary;
  net.errors = std::move(parsed.errors);
  net.duplicates = parsed.duplicates;
  const layers::Corpus corpus(std::move(parsed.posts));
  net.layers = build_layers(corpus, config.layers, config.build);
  return net;
}

filtering::FilteredSnapshot select_snapshot(const Layer& layer, const FilterSpec& spec,
                                            filtering::TemporalMode mode) {
  if (spec.variant == FilterSpec::Variant::Temporal && mode == filtering::TemporalMode::PerPair &&
      !layer.evidence_complete()) {
    return filtering::apply_temporal_filter(layer, spec, filtering::TemporalMode::AnyPair);
  }
  return filtering::apply_filter(layer, spec, mode);
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

RunResult run_pipeline(const PipelineConfig& config) { return run_pipeline(config, build_network(config)); }

RunResult run_pipeline(const PipelineConfig& config, const Network& network) {
  RunResult result;
  auto emit = [&](const std::filesystem::path& rel, std::string_view contents) {
    graph_io::write_file_atomic(config.out / rel, contents);
    result.written.push_back(rel);
  };

  const unsigned threads = config.build.threads;
  json stats_layers = json::array();
  std::string stats_csv = report::stats_csv_header() + "\n";
  std::vector<filtering::FilteredSnapshot> selected;

  for (const Layer& layer : network.layers) {
    const std::string name(to_string(layer.kind()));
    for (auto format : config.export_formats) {
      emit(std::filesystem::path("layers") / (name + std::string(graph_io::extension(format))),
           layer_text(layer, format));
    }

    const FilterSpec spec = config.filter_for(layer.kind());
    auto snap = select_snapshot(layer, spec, config.temporal_mode);
    const bool fallback = spec.variant == FilterSpec::Variant::Temporal &&
                          config.temporal_mode == filtering::TemporalMode::PerPair && !layer.evidence_complete();
    for (auto format : config.export_formats) {
      emit(std::filesystem::path("filtered") / (name + std::string(graph_io::extension(format))),
           layer_text(snap.layer, format));
    }

    const auto sweep = filtering::sweep_report(layer, config.prune.min_edges, config.prune.min_component_size,
                                               config.temporal_mode);
    emit(std::filesystem::path("sweep") / (name + ".json"), dump_json(report::to_json(sweep)));

    json comps = json::array();
    for (const auto& c : metrics::top_components(snap.layer, config.top_components, config.evidence_sample)) {
      comps.push_back(report::to_json(c));
    }
    emit(std::filesystem::path("components") / (name + ".json"),
         dump_json(json{{"layer", name},
                        {"filter", snap.filter.label()},
                        {"snapshot_id", snap.snapshot_id},
                        {"components", std::move(comps)}}));

    const auto base_stats = metrics::layer_stats(layer, threads);
    const auto base_id = filtering::snapshot_id(layer, FilterSpec::none());
    stats_layers.push_back(json{
        {"layer", name},
        {"abbreviation", std::string(abbreviation(layer.kind()))},
        {"evidence_complete", layer.evidence_complete()},
        {"base", {{"snapshot_id", base_id}, {"stats", report::to_json(base_stats)}}},
        {"filtered",
         {{"filter", report::to_json(snap.filter)},
          {"snapshot_id", snap.snapshot_id},
          {"temporal_mode",
           std::string(temporal_mode_name(fallback ? filtering::TemporalMode::AnyPair : config.temporal_mode))},
          {"viable", filtering::is_viable(snap, config.prune.min_edges, config.prune.min_component_size)},
          {"stats", report::to_json(snap.stats)}}}});
    stats_csv += report::stats_csv_row(name, "none", base_id, base_stats) + "\n";
    stats_csv += report::stats_csv_row(name, snap.filter.label(), snap.snapshot_id, snap.stats) + "\n";
    selected.push_back(std::move(snap));
  }

  emit("stats.json", dump_json(json{{"layers", std::move(stats_layers)}}));
  emit("stats.csv", stats_csv);

  std::vector<const Layer*> ptrs;
  std::vector<std::string> labels;
  for (const auto& s : selected) {
    ptrs.push_back(&s.layer);
    labels.emplace_back(abbreviation(s.base_kind));
  }
  const auto overlap = metrics::cross_layer_overlap(ptrs, labels);
  std::ostringstream chord;
  metrics::write_chord_csv(chord, overlap);
  emit("overlap.csv", chord.str());
  emit("overlap.json", dump_json(report::to_json(overlap)));

  json errors = json::array();
  for (const auto& e : network.errors) errors.push_back(json{{"line", e.line}, {"message", e.message}});
  json artifacts = json::array();
  for (const auto& p : result.written) artifacts.push_back(p.generic_string());
  artifacts.push_back("summary.json");
  emit("summary.json", dump_json(json{{"corpus",
                                       {{"sha256", network.corpus_sha256},
                                        {"summary", report::to_json(network.summary)},
                                        {"duplicates", network.duplicates},
                                        {"malformed_lines", std::move(errors)}}},
                                      {"config", config.to_json()},
                                      {"artifacts", std::move(artifacts)}}));
  return result;
}

}  // namespace coact::pipeline
