#include "coact/metrics.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <ostream>
#include <queue>
#include <unordered_map>

#include "coact/parallel.hpp"

namespace coact::metrics {

namespace {

// CSR adjacency over positions in layer.nodes().
struct Adjacency {
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> targets;

  std::span<const std::uint32_t> neighbours(std::size_t v) const {
    return std::span<const std::uint32_t>(targets).subspan(offsets[v], offsets[v + 1] - offsets[v]);
  }
  std::size_t size() const { return offsets.size() - 1; }
};

std::uint32_t local_id(std::span<const UserIndex> nodes, UserIndex u) {
  return static_cast<std::uint32_t>(std::lower_bound(nodes.begin(), nodes.end(), u) - nodes.begin());
}

Adjacency build_adjacency(const Layer& layer) {
  const auto nodes = layer.nodes();
  Adjacency adj;
  adj.offsets.assign(nodes.size() + 1, 0);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> ends;
  ends.reserve(layer.edge_count());
  for (const UserEdge& e : layer.edges()) {
    const auto a = local_id(nodes, e.user_a);
    const auto b = local_id(nodes, e.user_b);
    ends.emplace_back(a, b);
    ++adj.offsets[a + 1];
    ++adj.offsets[b + 1];
  }
  std::partial_sum(adj.offsets.begin(), adj.offsets.end(), adj.offsets.begin());
  adj.targets.resize(adj.offsets.back());
  std::vector<std::size_t> cursor(adj.offsets.begin(), adj.offsets.end() - 1);
  for (auto [a, b] : ends) {
    adj.targets[cursor[a]++] = b;
    adj.targets[cursor[b]++] = a;
  }
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    std::sort(adj.targets.begin() + static_cast<std::ptrdiff_t>(adj.offsets[v]),
              adj.targets.begin() + static_cast<std::ptrdiff_t>(adj.offsets[v + 1]));
  }
  return adj;
}

std::vector<std::vector<std::uint32_t>> local_components(const Adjacency& adj) {
  std::vector<std::vector<std::uint32_t>> comps;
  std::vector<bool> seen(adj.size(), false);
  std::vector<std::uint32_t> stack;
  for (std::uint32_t s = 0; s < adj.size(); ++s) {
    if (seen[s]) continue;
    std::vector<std::uint32_t> comp;
    seen[s] = true;
    stack.push_back(s);
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (auto u : adj.neighbours(v)) {
        if (!seen[u]) {
          seen[u] = true;
          stack.push_back(u);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  // Local ids follow user index order, so comp.front() is the smallest member.
  std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  return comps;
}

std::size_t eccentricity(const Adjacency& adj, std::uint32_t source, std::vector<std::int32_t>& dist,
                         std::vector<std::uint32_t>& queue) {
  queue.clear();
  queue.push_back(source);
  dist[source] = 0;
  std::size_t far = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto v = queue[head];
    far = static_cast<std::size_t>(dist[v]);
    for (auto u : adj.neighbours(v)) {
      if (dist[u] < 0) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  for (auto v : queue) dist[v] = -1;
  return far;
}

}  // namespace

std::vector<std::vector<UserIndex>> connected_components(const Layer& layer) {
  const auto nodes = layer.nodes();
  std::vector<std::vector<UserIndex>> out;
  for (const auto& comp : local_components(build_adjacency(layer))) {
    std::vector<UserIndex> members;
    members.reserve(comp.size());
    for (auto v : comp) members.push_back(nodes[v]);
    out.push_back(std::move(members));
  }
  return out;
}

LayerStats layer_stats(const Layer& layer, unsigned threads) {
  LayerStats s;
  s.node_count = layer.node_count();
  s.edge_count = layer.edge_count();
  if (s.node_count == 0) return s;

  const Adjacency adj = build_adjacency(layer);
  const auto comps = local_components(adj);
  s.component_count = comps.size();
  s.largest_component_size = comps.front().size();
  s.giant_component_pct = 100.0 * static_cast<double>(comps.front().size()) / s.node_count;
  if (s.node_count >= 2) {
    s.density = 2.0 * static_cast<double>(s.edge_count) /
                (static_cast<double>(s.node_count) * static_cast<double>(s.node_count - 1));
  }

  const auto& giant = comps.front();
  threads = resolve_threads(threads);
  std::vector<std::size_t> far(threads, 0);
  parallel_chunks(giant.size(), threads, [&](unsigned w, std::size_t begin, std::size_t end) {
    std::vector<std::int32_t> dist(adj.size(), -1);
    std::vector<std::uint32_t> queue;
    for (std::size_t i = begin; i < end; ++i) {
      far[w] = std::max(far[w], eccentricity(adj, giant[i], dist, queue));
    }
  });
  s.diameter = *std::max_element(far.begin(), far.end());

  double local_sum = 0.0;
  std::uint64_t closed = 0;
  std::uint64_t triples = 0;
  std::vector<std::uint8_t> mark(adj.size(), 0);
  for (std::uint32_t v = 0; v < adj.size(); ++v) {
    const auto nb = adj.neighbours(v);
    const std::uint64_t k = nb.size();
    if (k < 2) continue;
    for (auto u : nb) mark[u] = 1;
    std::uint64_t links = 0;
    for (auto u : nb) {
      for (auto x : adj.neighbours(u)) links += mark[x];
    }
    for (auto u : nb) mark[u] = 0;
    const std::uint64_t tri = links / 2;
    const std::uint64_t possible = k * (k - 1) / 2;
    local_sum += static_cast<double>(tri) / static_cast<double>(possible);
    closed += tri;
    triples += possible;
  }
  s.avg_clustering = local_sum / static_cast<double>(s.node_count);
  s.transitivity = triples == 0 ? 0.0 : static_cast<double>(closed) / static_cast<double>(triples);
  return s;
}

OverlapMatrix cross_layer_overlap(std::span<const Layer> layers) {
  std::vector<const Layer*> ptrs;
  std::vector<std::string> labels;
  for (const Layer& l : layers) {
    ptrs.push_back(&l);
    labels.emplace_back(abbreviation(l.kind()));
  }
  return cross_layer_overlap(ptrs, std::move(labels));
}

OverlapMatrix cross_layer_overlap(std::span<const Layer* const> layers,
                                  std::vector<std::string> labels) {
  const std::size_t n = layers.size();
  if (labels.size() != n) throw Error(ErrorCode::InvalidArgument, "one label per layer required");
  using EdgeKey = std::pair<std::string, std::string>;
  std::vector<std::vector<std::string>> node_sets(n);
  std::vector<std::vector<EdgeKey>> edge_sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Layer& l = *layers[i];
    for (UserIndex u : l.nodes()) node_sets[i].push_back(l.user_id(u));
    for (const UserEdge& e : l.edges()) edge_sets[i].emplace_back(l.user_id(e.user_a), l.user_id(e.user_b));
    std::sort(node_sets[i].begin(), node_sets[i].end());
    std::sort(edge_sets[i].begin(), edge_sets[i].end());
  }
  auto intersection_size = [](const auto& a, const auto& b) {
    std::size_t count = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
      if (*ia < *ib) {
        ++ia;
      } else if (*ib < *ia) {
        ++ib;
      } else {
        ++count;
        ++ia;
        ++ib;
      }
    }
    return count;
  };

  OverlapMatrix m;
  m.labels = std::move(labels);
  m.shared_nodes.assign(n * n, 0);
  m.shared_edges.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const auto sn = intersection_size(node_sets[i], node_sets[j]);
      const auto se = intersection_size(edge_sets[i], edge_sets[j]);
      m.shared_nodes[i * n + j] = m.shared_nodes[j * n + i] = sn;
      m.shared_edges[i * n + j] = m.shared_edges[j * n + i] = se;
    }
  }

  std::map<std::string, std::size_t> node_freq;
  std::map<EdgeKey, std::size_t> edge_freq;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& v : node_sets[i]) ++node_freq[v];
    for (const auto& e : edge_sets[i]) ++edge_freq[e];
  }
  for (std::size_t i = 0; i < n; ++i) {
    m.unique_nodes.push_back(static_cast<std::size_t>(std::count_if(
        node_sets[i].begin(), node_sets[i].end(), [&](const auto& v) { return node_freq[v] == 1; })));
    m.unique_edges.push_back(static_cast<std::size_t>(std::count_if(
        edge_sets[i].begin(), edge_sets[i].end(), [&](const auto& e) { return edge_freq[e] == 1; })));
  }
  return m;
}

void write_chord_csv(std::ostream& out, const OverlapMatrix& m) {
  out << "source_layer,target_layer,node_overlap,edge_overlap\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i; j < m.size(); ++j) {
      const bool self = i == j;
      out << m.labels[i] << ',' << m.labels[j] << ',' << (self ? m.unique_nodes[i] : m.nodes(i, j))
          << ',' << (self ? m.unique_edges[i] : m.edges(i, j)) << '\n';
    }
  }
}

ComponentSummary summarize_component(const Layer& layer, std::span<const UserIndex> members,
                                     std::size_t index, std::size_t evidence_offset,
                                     std::size_t evidence_limit) {
  ComponentSummary c;
  c.index = index;
  c.size = members.size();
  for (UserIndex u : members) {
    c.user_ids.push_back(layer.user_id(u));
    c.usernames.push_back(layer.username(u));
  }
  auto member = [&](UserIndex u) { return std::binary_search(members.begin(), members.end(), u); };
  std::size_t seen = 0;
  for (const UserEdge& e : layer.edges()) {
    if (!member(e.user_a) || !member(e.user_b)) continue;
    ++c.internal_edges;
    c.internal_weight += e.weight;
    for (const CoActionPair& p : layer.evidence(e)) {
      if (seen >= evidence_offset && c.evidence.size() < evidence_limit) {
        const auto& dir = *layer.directory();
        c.evidence.push_back({dir.post_id(p.post_a), dir.post_id(p.post_b), dir.user_id(p.user_a),
                              dir.user_id(p.user_b), p.score, p.delta_t});
      }
      ++seen;
    }
  }
  c.evidence_total = seen;
  return c;
}

std::vector<ComponentSummary> top_components(const Layer& layer, int k, std::size_t evidence_limit) {
  if (k <= 0) throw Error(ErrorCode::InvalidArgument, "k must be positive");
  const auto comps = connected_components(layer);
  std::vector<ComponentSummary> out;
  for (std::size_t i = 0; i < comps.size() && i < static_cast<std::size_t>(k); ++i) {
    out.push_back(summarize_component(layer, comps[i], i, 0, evidence_limit));
  }
  return out;
}

double node_jaccard(const Layer& a, const Layer& b) {
  std::vector<std::string> na;
  std::vector<std::string> nb;
  for (UserIndex u : a.nodes()) na.push_back(a.user_id(u));
  for (UserIndex u : b.nodes()) nb.push_back(b.user_id(u));
  std::sort(na.begin(), na.end());
  std::sort(nb.begin(), nb.end());
  std::vector<std::string> common;
  std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(common));
  const std::size_t uni = na.size() + nb.size() - common.size();
  return uni == 0 ? 1.0 : static_cast<double>(common.size()) / static_cast<double>(uni);
}

}  // namespace coact::metrics
