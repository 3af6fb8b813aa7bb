#include "coact/report.hpp"

#include <sstream>

#include "coact/digest.hpp"

namespace coact::report {

using nlohmann::json;

json to_json(const ingest::CorpusSummary& s) {
  return json{{"post_count", s.post_count},
              {"user_count", s.user_count},
              {"posts_with_transcript", s.posts_with_transcript},
              {"posts_with_frames", s.posts_with_frames},
              {"posts_with_music_id", s.posts_with_music_id},
              {"time_min", s.time_min},
              {"time_max", s.time_max}};
}

json to_json(const LayerStats& s) {
  return json{{"node_count", s.node_count},
              {"edge_count", s.edge_count},
              {"component_count", s.component_count},
              {"giant_component_pct", s.giant_component_pct},
              {"largest_component_size", s.largest_component_size},
              {"diameter", s.diameter},
              {"avg_clustering", s.avg_clustering},
              {"transitivity", s.transitivity},
              {"density", s.density}};
}

json to_json(const FilterSpec& f) {
  json out{{"label", f.label()}, {"variant", std::string(f.variant_name())}};
  if (f.variant == FilterSpec::Variant::Frequency || f.variant == FilterSpec::Variant::Temporal) {
    out["value"] = f.value;
  } else {
    out["value"] = nullptr;
  }
  return out;
}

json to_json(const filtering::SweepReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back(json{{"filter", to_json(row.filter)},
                        {"snapshot_id", row.snapshot_id},
                        {"stats", to_json(row.stats)},
                        {"top_component_sizes", row.top_sizes},
                        {"viable", row.viable}});
  }
  json labels = json::array();
  for (const auto& row : r.rows) labels.push_back(row.filter.label());
  const std::size_t n = r.rows.size();
  json jaccard = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json line = json::array();
    for (std::size_t j = 0; j < n; ++j) line.push_back(r.jaccard[i * n + j]);
    jaccard.push_back(std::move(line));
  }
  return json{{"layer", std::string(to_string(r.kind))},
              {"rows", std::move(rows)},
              {"jaccard", json{{"labels", std::move(labels)}, {"matrix", std::move(jaccard)}}}};
}

json to_json(const OverlapMatrix& m) {
  const std::size_t n = m.size();
  json rows = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json nodes = json::array();
    json edges = json::array();
    for (std::size_t j = 0; j < n; ++j) {
      nodes.push_back(m.nodes(i, j));
      edges.push_back(m.edges(i, j));
    }
    rows.push_back(json{{"label", m.labels[i]},
                        {"shared_nodes", std::move(nodes)},
                        {"shared_edges", std::move(edges)},
                        {"unique_nodes", m.unique_nodes[i]},
                        {"unique_edges", m.unique_edges[i]}});
  }
  return json{{"labels", m.labels}, {"rows", std::move(rows)}};
}

std::string pseudonym(std::string_view user_id) { return "anon-" + sha256_hex(user_id, 12); }

json to_json(const metrics::ComponentSummary& c, bool pseudonymize) {
  auto name = [&](const std::string& id) { return pseudonymize ? pseudonym(id) : id; };
  json members = json::array();
  for (std::size_t i = 0; i < c.user_ids.size(); ++i) {
    members.push_back(json{{"user_id", name(c.user_ids[i])},
                           {"username", pseudonymize ? name(c.user_ids[i]) : c.usernames[i]}});
  }
  json evidence = json::array();
  for (const auto& e : c.evidence) {
    evidence.push_back(json{{"post_a", e.post_a},
                            {"post_b", e.post_b},
                            {"user_a", name(e.user_a)},
                            {"user_b", name(e.user_b)},
                            {"score", e.score},
                            {"delta_t", e.delta_t}});
  }
  return json{{"index", c.index},
              {"size", c.size},
              {"members", std::move(members)},
              {"internal_edges", c.internal_edges},
              {"internal_weight", c.internal_weight},
              {"evidence_total", c.evidence_total},
              {"evidence", std::move(evidence)}};
}

std::string stats_csv_header() {
  return "layer,filter,snapshot_id,node_count,edge_count,component_count,giant_component_pct,"
         "largest_component_size,diameter,avg_clustering,transitivity,density";
}

std::string stats_csv_row(std::string_view layer, std::string_view filter, std::string_view snapshot_id,
                          const LayerStats& s) {
  std::ostringstream out;
  out.precision(17);
  out << layer << ',' << filter << ',' << snapshot_id << ',' << s.node_count << ',' << s.edge_count << ','
      << s.component_count << ',' << s.giant_component_pct << ',' << s.largest_component_size << ','
      << s.diameter << ',' << s.avg_clustering << ',' << s.transitivity << ',' << s.density;
  return out.str();
}

}  // namespace coact::report
