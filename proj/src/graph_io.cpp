#include "coact/graph_io.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace coact::graph_io {

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  cells.push_back(std::move(cell));
  return cells;
}

template <typename Int>
Int to_int(const std::string& s, std::string_view what) {
  Int v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::UnknownFormat, "bad " + std::string(what) + " '" + s + "'");
  }
  return v;
}

}  // namespace

GraphFormat parse_format(std::string_view name) {
  if (name == "graphml") return GraphFormat::GraphML;
  if (name == "csv") return GraphFormat::Csv;
  throw Error(ErrorCode::UnknownFormat, "unknown graph format '" + std::string(name) + "'");
}

std::string_view extension(GraphFormat format) {
  return format == GraphFormat::GraphML ? ".graphml" : ".csv";
}

void write_graphml(std::ostream& out, const Layer& layer) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"username\" for=\"node\" attr.name=\"username\" attr.type=\"string\"/>\n"
      << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n"
      << "  <key id=\"min_delta_t\" for=\"edge\" attr.name=\"min_delta_t\" attr.type=\"long\"/>\n"
      << "  <graph id=\"" << to_string(layer.kind()) << "\" edgedefault=\"undirected\">\n";
  for (UserIndex u : layer.nodes()) {
    out << "    <node id=\"" << xml_escape(layer.user_id(u)) << "\"><data key=\"username\">"
        << xml_escape(layer.username(u)) << "</data></node>\n";
  }
  for (const UserEdge& e : layer.edges()) {
    out << "    <edge source=\"" << xml_escape(layer.user_id(e.user_a)) << "\" target=\""
        << xml_escape(layer.user_id(e.user_b)) << "\"><data key=\"weight\">" << e.weight
        << "</data><data key=\"min_delta_t\">" << e.min_delta_t << "</data></edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
}

void write_edge_csv(std::ostream& out, const Layer& layer) {
  out << "user_a,user_b,weight,min_delta_t\n";
  for (const UserEdge& e : layer.edges()) {
    out << csv_field(layer.user_id(e.user_a)) << ',' << csv_field(layer.user_id(e.user_b)) << ','
        << e.weight << ',' << e.min_delta_t << '\n';
  }
}

void write_graph(std::ostream& out, const Layer& layer, GraphFormat format) {
  if (format == GraphFormat::GraphML) {
    write_graphml(out, layer);
  } else {
    write_edge_csv(out, layer);
  }
}

Layer layer_from_weighted_edges(LayerKind kind, std::vector<WeightedEdge> edges,
                                const std::vector<std::pair<std::string, std::string>>& usernames) {
  std::map<std::string, std::string> names(usernames.begin(), usernames.end());
  std::map<std::pair<std::string, std::string>, WeightedEdge> merged;
  for (auto& e : edges) {
    auto key = canonical_edge_key(e.user_a, e.user_b);
    auto [it, inserted] = merged.try_emplace(key, WeightedEdge{key.first, key.second, 0, e.min_delta_t});
    it->second.weight += e.weight;
    it->second.min_delta_t = std::min(it->second.min_delta_t, e.min_delta_t);
    names.try_emplace(key.first, key.first);
    names.try_emplace(key.second, key.second);
  }
  std::vector<std::string> ids;
  std::vector<std::string> display;
  for (const auto& [id, name] : names) {
    ids.push_back(id);
    display.push_back(name);
  }
  auto dir = std::make_shared<const Directory>(std::move(ids), std::move(display), std::vector<std::string>{});
  std::vector<UserEdge> out;
  for (const auto& [key, e] : merged) {
    UserEdge ue;
    ue.user_a = *dir->find_user(key.first);
    ue.user_b = *dir->find_user(key.second);
    ue.weight = e.weight;
    ue.min_delta_t = e.min_delta_t;
    out.push_back(ue);
  }
  const bool complete = out.empty();
  return Layer(kind, std::move(dir), std::move(out), {}, complete);
}

Layer read_graphml(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorCode::UnknownFormat, std::string("GraphML parse error: ") + e.what());
  }
  const auto& graph = tree.get_child("graphml.graph");
  const auto kind = parse_layer_kind(graph.get<std::string>("<xmlattr>.id", ""));
  if (!kind) throw Error(ErrorCode::UnknownFormat, "GraphML graph id is not a layer kind");

  std::vector<std::pair<std::string, std::string>> usernames;
  std::vector<WeightedEdge> edges;
  for (const auto& [tag, child] : graph) {
    if (tag == "node") {
      std::string name;
      for (const auto& [dtag, data] : child) {
        if (dtag == "data" && data.get<std::string>("<xmlattr>.key", "") == "username") name = data.data();
      }
      usernames.emplace_back(child.get<std::string>("<xmlattr>.id"), name);
    } else if (tag == "edge") {
      WeightedEdge e;
      e.user_a = child.get<std::string>("<xmlattr>.source");
      e.user_b = child.get<std::string>("<xmlattr>.target");
      for (const auto& [dtag, data] : child) {
        if (dtag != "data") continue;
        const auto key = data.get<std::string>("<xmlattr>.key", "");
        if (key == "weight") e.weight = to_int<std::uint64_t>(data.data(), "weight");
        if (key == "min_delta_t") e.min_delta_t = to_int<std::int64_t>(data.data(), "min_delta_t");
      }
      edges.push_back(std::move(e));
    }
  }
  return layer_from_weighted_edges(*kind, std::move(edges), usernames);
}

Layer read_edge_csv(std::istream& in, LayerKind kind) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::UnknownFormat, "empty edge CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "user_a,user_b,weight,min_delta_t") {
    throw Error(ErrorCode::UnknownFormat, "unexpected edge CSV header '" + line + "'");
  }
  std::vector<WeightedEdge> edges;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 4) throw Error(ErrorCode::UnknownFormat, "edge CSV row needs 4 columns");
    edges.push_back({cells[0], cells[1], to_int<std::uint64_t>(cells[2], "weight"),
                     to_int<std::int64_t>(cells[3], "min_delta_t")});
  }
  return layer_from_weighted_edges(kind, std::move(edges));
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::Io, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace coact::graph_io
