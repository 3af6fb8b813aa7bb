#pragma once

#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "coact/filtering.hpp"
#include "coact/pipeline.hpp"

namespace coact::service {

struct ServiceOptions {
  bool pseudonymize = false;
  filtering::TemporalMode temporal_mode = filtering::TemporalMode::PerPair;
  pipeline::PruneConfig prune;
  std::size_t evidence_cap = 200;
};

struct Response {
  int status = 200;
  nlohmann::json body;
};

using Query = std::map<std::string, std::string>;

/// Snapshot with its components precomputed; never mutated after insertion.
struct SnapshotEntry {
  filtering::FilteredSnapshot snapshot;
  std::vector<std::vector<UserIndex>> components;
};

/// Transport-independent request handling over a built network. Snapshots are
/// content-addressed; concurrent identical filter requests share one
/// computation and readers only ever see finished entries.
class Service {
 public:
  Service(pipeline::Network network, ServiceOptions options = {});

  Response handle(const std::string& method, const std::string& path, const Query& query = {},
                  const std::string& body = {});

  /// Creates (or returns) the snapshot of `kind` under `filter`.
  std::shared_ptr<const SnapshotEntry> filter(LayerKind kind, const FilterSpec& filter);
  std::shared_ptr<const SnapshotEntry> find_snapshot(const std::string& id) const;
  /// Number of distinct snapshot computations started so far.
  std::size_t computations() const;

 private:
  using EntryFuture = std::shared_future<std::shared_ptr<const SnapshotEntry>>;

  Response get_layers() const;
  Response get_sweep(LayerKind kind);
  Response post_filter(LayerKind kind, const std::string& body);
  Response get_components(const std::string& id, const Query& query) const;
  Response get_component(const std::string& id, const std::string& index, const Query& query) const;
  Response get_overlap(const Query& query) const;

  pipeline::Network network_;
  ServiceOptions options_;
  std::vector<std::string> digests_;  // per network_.layers
  mutable std::mutex mutex_;
  std::map<std::string, EntryFuture> snapshots_;
  std::map<LayerKind, std::shared_future<nlohmann::json>> sweeps_;
  std::size_t computations_ = 0;
};

/// HTTP front end (cpp-httplib) over a Service.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds (port 0 picks a free port) and serves on a background thread.
  /// Returns the bound port; throws Io when binding fails.
  int start(const std::string& host, int port);
  /// Binds and serves on the calling thread until stop().
  void run(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
};

}  // namespace coact::service
