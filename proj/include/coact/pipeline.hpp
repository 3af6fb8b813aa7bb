#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "coact/filtering.hpp"
#include "coact/graph_io.hpp"
#include "coact/ingest.hpp"
#include "coact/layers.hpp"
#include "coact/model.hpp"

namespace coact::pipeline {

struct PruneConfig {
  std::size_t min_edges = 1;
  std::size_t min_component_size = 8;
};

/// Declarative run description. Every key of the JSON form is optional except
/// "corpus"; unknown keys and malformed values throw InvalidConfig.
struct PipelineConfig {
  std::filesystem::path corpus;
  std::filesystem::path out = "out";
  std::vector<LayerKind> layers{kAllLayerKinds.begin(), kAllLayerKinds.end()};
  /// Per-layer overrides of default_filter().
  std::map<LayerKind, FilterSpec> filters;
  filtering::TemporalMode temporal_mode = filtering::TemporalMode::PerPair;
  PruneConfig prune;
  std::vector<graph_io::GraphFormat> export_formats{graph_io::GraphFormat::GraphML, graph_io::GraphFormat::Csv};
  layers::BuildOptions build;
  int top_components = 3;
  std::size_t evidence_sample = 20;
  std::uint64_t seed = 0;

  FilterSpec filter_for(LayerKind kind) const;

  static PipelineConfig from_json(const nlohmann::json& doc);
  static PipelineConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

/// Parsed corpus plus the requested layers, in config order.
struct Network {
  ingest::CorpusSummary summary;
  std::vector<ingest::LineError> errors;
  std::size_t duplicates = 0;
  std::string corpus_sha256;
  std::vector<Layer> layers;

  const Layer* find(LayerKind kind) const;
};

/// Reads the corpus (MissingCorpus when absent), resolves frame images
/// relative to the corpus file and builds the configured layers.
Network build_network(const PipelineConfig& config);

/// Builds only `kinds` (SameAudio and PartialAudio share one pass).
std::vector<Layer> build_layers(const layers::Corpus& corpus, std::span<const LayerKind> kinds,
                                const layers::BuildOptions& options);

/// The configured filter applied to one layer. A per-pair temporal filter on
/// a layer with truncated evidence falls back to whole-edge mode.
filtering::FilteredSnapshot select_snapshot(const Layer& layer, const FilterSpec& spec,
                                            filtering::TemporalMode mode);

struct RunResult {
  std::vector<std::filesystem::path> written;  // relative to config.out
};

/// Builds, filters and analyzes, then writes under config.out:
/// summary.json, layers/<kind>.<ext>, filtered/<kind>.<ext>, stats.json,
/// stats.csv, sweep/<kind>.json, overlap.csv, overlap.json and
/// components/<kind>.json. Files are written atomically and are a pure
/// function of the corpus bytes and the config.
RunResult run_pipeline(const PipelineConfig& config);
RunResult run_pipeline(const PipelineConfig& config, const Network& network);

/// Serializes `doc` with two-space indentation and a trailing newline.
std::string dump_json(const nlohmann::json& doc);

}  // namespace coact::pipeline
