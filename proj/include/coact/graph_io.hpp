#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "coact/model.hpp"

namespace coact::graph_io {

enum class GraphFormat { GraphML, Csv };

/// "graphml" or "csv"; anything else throws UnknownFormat.
GraphFormat parse_format(std::string_view name);
std::string_view extension(GraphFormat format);

/// Nodes carry a username attribute; edges carry weight and min_delta_t.
void write_graphml(std::ostream& out, const Layer& layer);
/// Header user_a,user_b,weight,min_delta_t.
void write_edge_csv(std::ostream& out, const Layer& layer);
void write_graph(std::ostream& out, const Layer& layer, GraphFormat format);

struct WeightedEdge {
  std::string user_a;
  std::string user_b;
  std::uint64_t weight = 1;
  std::int64_t min_delta_t = 0;
};

/// Builds an evidence-free layer from weighted string edges. Usernames default
/// to the user id when absent from `usernames`.
Layer layer_from_weighted_edges(LayerKind kind, std::vector<WeightedEdge> edges,
                                const std::vector<std::pair<std::string, std::string>>& usernames = {});

/// Reads files produced by the writers above. The layer kind comes from the
/// GraphML graph id, or from `kind` for CSV.
Layer read_graphml(std::istream& in);
Layer read_edge_csv(std::istream& in, LayerKind kind);

/// Writes to a temporary sibling then renames over the destination.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace coact::graph_io
