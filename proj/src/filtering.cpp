#include "coact/filtering.hpp"

#include <algorithm>
#include <memory>

#include "coact/digest.hpp"
#include "coact/metrics.hpp"

namespace coact::filtering {

namespace {

void hash_layer(Sha256& h, const Layer& layer) {
  const auto& dir = *layer.directory();
  h.update(to_string(layer.kind()));
  h.update("\x1e");
  for (const UserEdge& e : layer.edges()) {
    h.update(dir.user_id(e.user_a));
    h.update("\x1f");
    h.update(dir.user_id(e.user_b));
    h.update("\x1f");
    h.update_number(static_cast<long long>(e.weight));
    h.update_number(e.min_delta_t);
    for (const CoActionPair& p : layer.evidence(e)) {
      h.update(dir.post_id(p.post_a));
      h.update("\x1f");
      h.update(dir.post_id(p.post_b));
      h.update("\x1f");
      h.update_number(p.delta_t);
      h.update_number(p.score);
    }
    h.update("\x1e");
  }
}

// Rebuilds a layer from a per-edge decision: nullopt drops the edge, otherwise
// the evidence pairs to keep and the resulting weight/min_delta_t.
struct EdgeOutcome {
  std::vector<CoActionPair> evidence;
  std::uint64_t weight = 0;
  std::int64_t min_delta_t = 0;
};

template <typename Decide>
Layer rebuild(const Layer& layer, bool evidence_complete, Decide&& decide) {
  std::vector<UserEdge> edges;
  std::vector<CoActionPair> pairs;
  for (const UserEdge& e : layer.edges()) {
    std::optional<EdgeOutcome> out = decide(e);
    if (!out || out->weight == 0) continue;
    UserEdge kept = e;
    kept.weight = out->weight;
    kept.min_delta_t = out->min_delta_t;
    kept.evidence_begin = static_cast<std::uint32_t>(pairs.size());
    pairs.insert(pairs.end(), out->evidence.begin(), out->evidence.end());
    kept.evidence_end = static_cast<std::uint32_t>(pairs.size());
    edges.push_back(kept);
  }
  const bool complete = edges.empty() || evidence_complete;
  return Layer(layer.kind(), layer.directory(), std::move(edges), std::move(pairs), complete);
}

FilteredSnapshot finish(const Layer& base, const FilterSpec& spec, Layer filtered) {
  FilteredSnapshot s;
  s.snapshot_id = snapshot_id(base, spec);
  s.base_kind = base.kind();
  s.filter = spec;
  s.stats = metrics::layer_stats(filtered);
  const auto comps = metrics::connected_components(filtered);
  for (std::size_t i = 0; i < 3 && i < comps.size(); ++i) s.largest_components[i] = comps[i].size();
  s.layer = std::move(filtered);
  return s;
}

}  // namespace

std::string layer_digest(const Layer& layer) {
  Sha256 h;
  hash_layer(h, layer);
  return h.hex(16);
}

std::string snapshot_id(const Layer& base, const FilterSpec& filter) {
  return snapshot_id(layer_digest(base), filter);
}

std::string snapshot_id(std::string_view base_digest, const FilterSpec& filter) {
  Sha256 h;
  h.update(base_digest);
  h.update("|");
  h.update(filter.label());
  return h.hex(16);
}

double mean_edge_weight(const Layer& layer) {
  if (layer.edge_count() == 0) return 0.0;
  long double total = 0;
  for (const UserEdge& e : layer.edges()) total += static_cast<long double>(e.weight);
  return static_cast<double>(total / static_cast<long double>(layer.edge_count()));
}

FilteredSnapshot apply_frequency_filter(const Layer& layer, const FilterSpec& spec) {
  using V = FilterSpec::Variant;
  if (spec.variant != V::Frequency && spec.variant != V::FrequencyAboveAverage) {
    throw Error(ErrorCode::InvalidArgument, "not a frequency filter: " + spec.label());
  }
  // weight >= mean  <=>  weight * edge_count >= total weight (exact integers).
  long double total = 0;
  for (const UserEdge& e : layer.edges()) total += static_cast<long double>(e.weight);
  const long double count = static_cast<long double>(layer.edge_count());
  auto keep = [&](const UserEdge& e) {
    if (spec.variant == V::Frequency) return e.weight >= static_cast<std::uint64_t>(spec.value);
    return static_cast<long double>(e.weight) * count >= total;
  };
  Layer filtered = rebuild(layer, layer.evidence_complete(), [&](const UserEdge& e) -> std::optional<EdgeOutcome> {
    if (!keep(e)) return std::nullopt;
    auto ev = layer.evidence(e);
    return EdgeOutcome{{ev.begin(), ev.end()}, e.weight, e.min_delta_t};
  });
  return finish(layer, spec, std::move(filtered));
}

FilteredSnapshot apply_temporal_filter(const Layer& layer, const FilterSpec& spec, TemporalMode mode) {
  if (spec.variant != FilterSpec::Variant::Temporal) {
    throw Error(ErrorCode::InvalidArgument, "not a temporal filter: " + spec.label());
  }
  const std::int64_t window = spec.value;
  if (mode == TemporalMode::AnyPair) {
    Layer filtered = rebuild(layer, layer.evidence_complete(), [&](const UserEdge& e) -> std::optional<EdgeOutcome> {
      if (e.min_delta_t > window) return std::nullopt;
      auto ev = layer.evidence(e);
      return EdgeOutcome{{ev.begin(), ev.end()}, e.weight, e.min_delta_t};
    });
    return finish(layer, spec, std::move(filtered));
  }
  if (!layer.evidence_complete()) {
    throw Error(ErrorCode::EvidenceUnavailable,
                "temporal filtering needs evidence pairs; layer " + std::string(to_string(layer.kind())) +
                    " was built without them");
  }
  Layer filtered = rebuild(layer, true, [&](const UserEdge& e) -> std::optional<EdgeOutcome> {
    EdgeOutcome out;
    for (const CoActionPair& p : layer.evidence(e)) {
      if (p.delta_t > window) continue;
      out.min_delta_t = out.evidence.empty() ? p.delta_t : std::min(out.min_delta_t, p.delta_t);
      out.evidence.push_back(p);
    }
    out.weight = out.evidence.size();
    return out;
  });
  return finish(layer, spec, std::move(filtered));
}

FilteredSnapshot apply_filter(const Layer& layer, const FilterSpec& spec, TemporalMode mode) {
  switch (spec.variant) {
    case FilterSpec::Variant::None: return finish(layer, spec, layer);
    case FilterSpec::Variant::Temporal: return apply_temporal_filter(layer, spec, mode);
    default: return apply_frequency_filter(layer, spec);
  }
}

std::vector<FilteredSnapshot> generate_filter_candidates(const Layer& layer, TemporalMode mode) {
  std::vector<FilteredSnapshot> out;
  for (const FilterSpec& spec : canonical_filter_candidates()) out.push_back(apply_filter(layer, spec, mode));
  return out;
}

bool is_viable(const FilteredSnapshot& snapshot, std::size_t min_edges, std::size_t min_component_size) {
  return snapshot.stats.edge_count >= min_edges &&
         snapshot.stats.largest_component_size > min_component_size;
}

std::vector<FilteredSnapshot> prune_candidates(std::span<const FilteredSnapshot> snapshots,
                                               std::size_t min_edges, std::size_t min_component_size) {
  std::vector<FilteredSnapshot> out;
  for (const auto& s : snapshots) {
    if (is_viable(s, min_edges, min_component_size)) out.push_back(s);
  }
  return out;
}

SweepReport sweep_report(const Layer& layer, std::size_t min_edges, std::size_t min_component_size,
                         TemporalMode mode) {
  SweepReport report;
  report.kind = layer.kind();
  // Temporal candidates need evidence unless the whole-edge mode is used.
  std::vector<FilteredSnapshot> candidates;
  for (const FilterSpec& spec : canonical_filter_candidates()) {
    if (spec.variant == FilterSpec::Variant::Temporal && mode == TemporalMode::PerPair &&
        !layer.evidence_complete()) {
      candidates.push_back(apply_temporal_filter(layer, spec, TemporalMode::AnyPair));
      candidates.back().filter = spec;
    } else {
      candidates.push_back(apply_filter(layer, spec, mode));
    }
  }
  for (const auto& c : candidates) {
    SweepRow row;
    row.filter = c.filter;
    row.snapshot_id = c.snapshot_id;
    row.stats = c.stats;
    for (int i = 0; i < 3; ++i) row.top_sizes[i] = c.largest_components[i];
    row.viable = is_viable(c, min_edges, min_component_size);
    report.rows.push_back(row);
  }
  const std::size_t n = candidates.size();
  report.jaccard.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = metrics::node_jaccard(candidates[i].layer, candidates[j].layer);
      report.jaccard[i * n + j] = report.jaccard[j * n + i] = v;
    }
  }
  return report;
}

}  // namespace coact::filtering
