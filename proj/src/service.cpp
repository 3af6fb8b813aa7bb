#include "coact/service.hpp"

#include <httplib.h>

#include <charconv>

#include "coact/metrics.hpp"
#include "coact/report.hpp"

namespace coact::service {

using nlohmann::json;

namespace {

Response error_response(int status, const std::string& message) {
  return {status, json{{"error", message}}};
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : path) {
    if (c == '/') {
      if (!cur.empty()) parts.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(std::move(cur));
  return parts;
}

std::optional<std::size_t> parse_size(const std::string& text) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  return v;
}

/// Query integer with default; nullopt on malformed input.
std::optional<std::size_t> query_size(const Query& query, const std::string& key, std::size_t fallback) {
  auto it = query.find(key);
  if (it == query.end()) return fallback;
  return parse_size(it->second);
}

json component_brief(const metrics::ComponentSummary& c, bool pseudonymize) {
  json j = report::to_json(c, pseudonymize);
  j.erase("evidence");
  return j;
}

}  // namespace

Service::Service(pipeline::Network network, ServiceOptions options)
    : network_(std::move(network)), options_(options) {
  if (network_.layers.empty()) throw Error(ErrorCode::InvalidArgument, "service needs at least one layer");
  for (const Layer& l : network_.layers) digests_.push_back(filtering::layer_digest(l));
  for (const Layer& l : network_.layers) {
    filter(l.kind(), FilterSpec::none());
    filter(l.kind(), default_filter(l.kind()));
  }
}

std::size_t Service::computations() const {
  std::lock_guard lock(mutex_);
  return computations_;
}

std::shared_ptr<const SnapshotEntry> Service::filter(LayerKind kind, const FilterSpec& spec) {
  std::size_t pos = network_.layers.size();
  for (std::size_t i = 0; i < network_.layers.size(); ++i) {
    if (network_.layers[i].kind() == kind) pos = i;
  }
  if (pos == network_.layers.size()) {
    throw Error(ErrorCode::InvalidArgument, "layer not built: " + std::string(to_string(kind)));
  }
  const std::string id = filtering::snapshot_id(digests_[pos], spec);

  std::promise<std::shared_ptr<const SnapshotEntry>> promise;
  EntryFuture future;
  bool owner = false;
  {
    std::lock_guard lock(mutex_);
    auto it = snapshots_.find(id);
    if (it != snapshots_.end()) {
      future = it->second;
    } else {
      future = promise.get_future().share();
      snapshots_.emplace(id, future);
      owner = true;
      ++computations_;
    }
  }
  if (!owner) return future.get();
  try {
    auto entry = std::make_shared<SnapshotEntry>();
    entry->snapshot = pipeline::select_snapshot(network_.layers[pos], spec, options_.temporal_mode);
    entry->components = metrics::connected_components(entry->snapshot.layer);
    promise.set_value(std::move(entry));
  } catch (...) {
    promise.set_exception(std::current_exception());
    std::lock_guard lock(mutex_);
    snapshots_.erase(id);
  }
  return future.get();
}

std::shared_ptr<const SnapshotEntry> Service::find_snapshot(const std::string& id) const {
  EntryFuture future;
  {
    std::lock_guard lock(mutex_);
    auto it = snapshots_.find(id);
    if (it == snapshots_.end()) return nullptr;
    future = it->second;
  }
  try {
    return future.get();
  } catch (const std::exception&) {
    return nullptr;
  }
}

Response Service::handle(const std::string& method, const std::string& path, const Query& query,
                         const std::string& body) {
  const auto parts = split_path(path);
  try {
    if (method == "GET" && parts == std::vector<std::string>{"dataset", "summary"}) {
      json j = report::to_json(network_.summary);
      j["duplicates"] = network_.duplicates;
      j["malformed_lines"] = network_.errors.size();
      j["corpus_sha256"] = network_.corpus_sha256;
      return {200, std::move(j)};
    }
    if (method == "GET" && parts == std::vector<std::string>{"layers"}) return get_layers();
    if (parts.size() == 3 && parts[0] == "layers") {
      const auto kind = parse_layer_kind(parts[1]);
      if (!kind || !network_.find(*kind)) return error_response(404, "unknown layer '" + parts[1] + "'");
      if (method == "GET" && parts[2] == "sweep") return get_sweep(*kind);
      if (method == "POST" && parts[2] == "filter") return post_filter(*kind, body);
    }
    if (method == "GET" && parts.size() >= 2 && parts[0] == "snapshots") {
      if (parts.size() == 2) {
        auto entry = find_snapshot(parts[1]);
        if (!entry) return error_response(404, "unknown snapshot '" + parts[1] + "'");
        const auto& s = entry->snapshot;
        return {200, json{{"snapshot_id", s.snapshot_id},
                          {"layer", std::string(to_string(s.base_kind))},
                          {"filter", report::to_json(s.filter)},
                          {"stats", report::to_json(s.stats)},
                          {"component_count", entry->components.size()}}};
      }
      if (parts.size() == 3 && parts[2] == "components") return get_components(parts[1], query);
      if (parts.size() == 4 && parts[2] == "components") return get_component(parts[1], parts[3], query);
    }
    if (method == "GET" && parts == std::vector<std::string>{"overlap"}) return get_overlap(query);
    return error_response(404, "no route for " + method + " " + path);
  } catch (const Error& e) {
    return error_response(400, e.what());
  }
}

Response Service::get_layers() const {
  json out = json::array();
  for (std::size_t i = 0; i < network_.layers.size(); ++i) {
    const Layer& l = network_.layers[i];
    out.push_back(json{{"kind", std::string(to_string(l.kind()))},
                       {"abbreviation", std::string(abbreviation(l.kind()))},
                       {"base_snapshot_id", filtering::snapshot_id(digests_[i], FilterSpec::none())},
                       {"evidence_complete", l.evidence_complete()},
                       {"stats", report::to_json(metrics::layer_stats(l))},
                       {"default_filter", report::to_json(default_filter(l.kind()))},
                       {"default_snapshot_id", filtering::snapshot_id(digests_[i], default_filter(l.kind()))}});
  }
  return {200, std::move(out)};
}

Response Service::get_sweep(LayerKind kind) {
  std::promise<json> promise;
  std::shared_future<json> future;
  bool owner = false;
  {
    std::lock_guard lock(mutex_);
    auto it = sweeps_.find(kind);
    if (it != sweeps_.end()) {
      future = it->second;
    } else {
      future = promise.get_future().share();
      sweeps_.emplace(kind, future);
      owner = true;
    }
  }
  if (owner) {
    try {
      const auto report = filtering::sweep_report(*network_.find(kind), options_.prune.min_edges,
                                                  options_.prune.min_component_size, options_.temporal_mode);
      promise.set_value(report::to_json(report));
    } catch (...) {
      promise.set_exception(std::current_exception());
      std::lock_guard lock(mutex_);
      sweeps_.erase(kind);
    }
  }
  return {200, future.get()};
}

Response Service::post_filter(LayerKind kind, const std::string& body) {
  json req;
  try {
    req = json::parse(body.empty() ? std::string("{}") : body);
  } catch (const json::exception&) {
    return error_response(400, "request body is not JSON");
  }
  if (!req.is_object() || !req.contains("variant") || !req["variant"].is_string()) {
    return error_response(400, "body must be {\"variant\": string, \"value\": integer}");
  }
  std::int64_t value = 0;
  if (req.contains("value") && !req["value"].is_null()) {
    if (!req["value"].is_number_integer()) return error_response(400, "value must be an integer");
    value = req["value"].get<std::int64_t>();
  }
  const auto spec = FilterSpec::from_variant(req["variant"].get<std::string>(), value);
  const auto entry = filter(kind, spec);
  const auto& s = entry->snapshot;
  return {200, json{{"snapshot_id", s.snapshot_id},
                    {"layer", std::string(to_string(kind))},
                    {"filter", report::to_json(s.filter)},
                    {"stats", report::to_json(s.stats)},
                    {"viable", filtering::is_viable(s, options_.prune.min_edges, options_.prune.min_component_size)}}};
}

Response Service::get_components(const std::string& id, const Query& query) const {
  auto entry = find_snapshot(id);
  if (!entry) return error_response(404, "unknown snapshot '" + id + "'");
  const auto min_size = query_size(query, "min_size", 0);
  const auto offset = query_size(query, "offset", 0);
  const auto limit = query_size(query, "limit", 50);
  if (!min_size || !offset || !limit) return error_response(400, "min_size, offset and limit must be integers");
  std::vector<std::size_t> matching;
  for (std::size_t i = 0; i < entry->components.size(); ++i) {
    if (entry->components[i].size() >= *min_size) matching.push_back(i);
  }
  json comps = json::array();
  for (std::size_t k = *offset; k < matching.size() && k < *offset + *limit; ++k) {
    const auto i = matching[k];
    comps.push_back(component_brief(
        metrics::summarize_component(entry->snapshot.layer, entry->components[i], i, 0, 0), options_.pseudonymize));
  }
  return {200, json{{"snapshot_id", id},
                    {"total", matching.size()},
                    {"offset", *offset},
                    {"limit", *limit},
                    {"components", std::move(comps)}}};
}

Response Service::get_component(const std::string& id, const std::string& index, const Query& query) const {
  auto entry = find_snapshot(id);
  if (!entry) return error_response(404, "unknown snapshot '" + id + "'");
  const auto idx = parse_size(index);
  if (!idx) return error_response(400, "component index must be an integer");
  if (*idx >= entry->components.size()) return error_response(404, "no component " + index);
  const auto offset = query_size(query, "offset", 0);
  const auto limit = query_size(query, "limit", options_.evidence_cap);
  if (!offset || !limit) return error_response(400, "offset and limit must be integers");
  const std::size_t capped = std::min(*limit, options_.evidence_cap);
  const auto summary =
      metrics::summarize_component(entry->snapshot.layer, entry->components[*idx], *idx, *offset, capped);
  json j = report::to_json(summary, options_.pseudonymize);
  json internal = json::array();
  const auto& members = entry->components[*idx];
  const auto& layer = entry->snapshot.layer;
  auto name = [&](UserIndex u) {
    return options_.pseudonymize ? report::pseudonym(layer.user_id(u)) : layer.user_id(u);
  };
  for (const UserEdge& e : layer.edges()) {
    if (std::binary_search(members.begin(), members.end(), e.user_a) &&
        std::binary_search(members.begin(), members.end(), e.user_b)) {
      internal.push_back(json{{"user_a", name(e.user_a)},
                              {"user_b", name(e.user_b)},
                              {"weight", e.weight},
                              {"min_delta_t", e.min_delta_t}});
    }
  }
  j["edges"] = std::move(internal);
  j["snapshot_id"] = id;
  j["evidence_offset"] = *offset;
  j["evidence_limit"] = capped;
  return {200, std::move(j)};
}

Response Service::get_overlap(const Query& query) const {
  std::vector<std::shared_ptr<const SnapshotEntry>> entries;
  std::vector<const Layer*> ptrs;
  std::vector<std::string> labels;
  auto it = query.find("snapshots");
  if (it == query.end() || it->second.empty()) {
    for (const Layer& l : network_.layers) {
      ptrs.push_back(&l);
      labels.emplace_back(abbreviation(l.kind()));
    }
  } else {
    std::string list = it->second;
    std::size_t start = 0;
    while (start <= list.size()) {
      const auto comma = list.find(',', start);
      const std::string id = list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (!id.empty()) {
        auto entry = find_snapshot(id);
        if (!entry) return error_response(404, "unknown snapshot '" + id + "'");
        entries.push_back(entry);
        ptrs.push_back(&entry->snapshot.layer);
        labels.push_back(std::string(abbreviation(entry->snapshot.base_kind)) + ":" + entry->snapshot.filter.label());
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  json j = report::to_json(metrics::cross_layer_overlap(ptrs, labels));
  return {200, std::move(j)};
}

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>()) {
  auto dispatch = [&service](const httplib::Request& req, httplib::Response& res) {
    Query query;
    for (const auto& [k, v] : req.params) query[k] = v;
    const auto out = service.handle(req.method, req.path, query, req.body);
    res.status = out.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(out.body.dump(), "application/json");
  };
  impl_->server.Get(".*", dispatch);
  impl_->server.Post(".*", dispatch);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw Error(ErrorCode::Io, "cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void HttpServer::run(const std::string& host, int port) {
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error(ErrorCode::Io, "cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->server.listen_after_bind();
}

void HttpServer::stop() {
  impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace coact::service
