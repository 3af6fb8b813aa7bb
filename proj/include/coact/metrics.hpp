#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "coact/model.hpp"

namespace coact::metrics {

/// Undirected components as sorted member lists, ordered by size descending
/// then by smallest member id.
std::vector<std::vector<UserIndex>> connected_components(const Layer& layer);

/// Table-style structure statistics. Diameter is taken over the largest
/// component only; avg_clustering is the mean local coefficient over all
/// nodes (degree < 2 contributes 0); transitivity is the global ratio.
LayerStats layer_stats(const Layer& layer, unsigned threads = 1);

/// Labels default to the layer abbreviations.
OverlapMatrix cross_layer_overlap(std::span<const Layer> layers);
OverlapMatrix cross_layer_overlap(std::span<const Layer* const> layers,
                                  std::vector<std::string> labels);

/// source_layer,target_layer,node_overlap,edge_overlap; self rows carry the
/// unique counts, other rows (source before target) the shared counts.
void write_chord_csv(std::ostream& out, const OverlapMatrix& matrix);

struct EvidenceRow {
  std::string post_a;
  std::string post_b;
  std::string user_a;
  std::string user_b;
  int score = 0;
  std::int64_t delta_t = 0;
};

struct ComponentSummary {
  std::size_t index = 0;
  std::size_t size = 0;
  std::vector<std::string> user_ids;
  std::vector<std::string> usernames;
  std::size_t internal_edges = 0;
  std::uint64_t internal_weight = 0;
  std::size_t evidence_total = 0;
  std::vector<EvidenceRow> evidence;
};

/// Members, internal edges and an evidence page [offset, offset + limit) for
/// one component.
ComponentSummary summarize_component(const Layer& layer, std::span<const UserIndex> members,
                                     std::size_t index, std::size_t evidence_offset = 0,
                                     std::size_t evidence_limit = 20);

/// First k components (largest first). Throws InvalidArgument for k <= 0.
std::vector<ComponentSummary> top_components(const Layer& layer, int k = 3,
                                             std::size_t evidence_limit = 20);

/// |A intersect B| / |A union B| over node sets; two empty layers give 1.
double node_jaccard(const Layer& a, const Layer& b);

}  // namespace coact::metrics
