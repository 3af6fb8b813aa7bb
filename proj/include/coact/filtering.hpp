#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coact/model.hpp"

namespace coact::filtering {

/// Immutable filtered view of a layer.
struct FilteredSnapshot {
  std::string snapshot_id;
  LayerKind base_kind = LayerKind::HashtagSequence;
  FilterSpec filter;
  Layer layer;
  LayerStats stats;
  std::size_t largest_components[3] = {0, 0, 0};
};

enum class TemporalMode {
  /// Drop evidence pairs with delta_t > T and recount weights.
  PerPair,
  /// Keep whole edges whose closest co-action is within T, weight unchanged.
  AnyPair,
};

/// SHA-256 (hex, 16 chars) over the layer's canonical edge and evidence list.
std::string layer_digest(const Layer& layer);

/// Content address of (base layer, filter).
std::string snapshot_id(const Layer& base, const FilterSpec& filter);
/// Same address from a precomputed layer_digest().
std::string snapshot_id(std::string_view base_digest, const FilterSpec& filter);

double mean_edge_weight(const Layer& layer);

FilteredSnapshot apply_frequency_filter(const Layer& layer, const FilterSpec& spec);
FilteredSnapshot apply_temporal_filter(const Layer& layer, const FilterSpec& spec,
                                       TemporalMode mode = TemporalMode::PerPair);
/// Dispatches on spec.variant; None yields the unfiltered layer as a snapshot.
FilteredSnapshot apply_filter(const Layer& layer, const FilterSpec& spec,
                              TemporalMode mode = TemporalMode::PerPair);

/// The six canonical candidates, in canonical_filter_candidates() order.
std::vector<FilteredSnapshot> generate_filter_candidates(const Layer& layer,
                                                         TemporalMode mode = TemporalMode::PerPair);

bool is_viable(const FilteredSnapshot& snapshot, std::size_t min_edges = 1,
               std::size_t min_component_size = 8);

/// Keeps snapshots with at least min_edges edges and a component strictly
/// larger than min_component_size.
std::vector<FilteredSnapshot> prune_candidates(std::span<const FilteredSnapshot> snapshots,
                                               std::size_t min_edges = 1,
                                               std::size_t min_component_size = 8);

struct SweepRow {
  FilterSpec filter;
  std::string snapshot_id;
  LayerStats stats;
  std::array<std::size_t, 3> top_sizes{};
  bool viable = false;
};

struct SweepReport {
  LayerKind kind = LayerKind::HashtagSequence;
  std::vector<SweepRow> rows;
  /// Row-major rows.size() squared node-set Jaccard between candidates.
  std::vector<double> jaccard;
};

SweepReport sweep_report(const Layer& layer, std::size_t min_edges = 1,
                         std::size_t min_component_size = 8,
                         TemporalMode mode = TemporalMode::PerPair);

}  // namespace coact::filtering
