#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coact/error.hpp"

namespace coact {

using UserIndex = std::uint32_t;
using PostIndex = std::uint32_t;
using FrameHash = std::uint64_t;

/// One short-video post. hashtags/urls are always derived from description.
struct PostRecord {
  std::string post_id;
  std::string user_id;
  std::string username;
  std::int64_t created_at = 0;
  std::string description;
  std::vector<std::string> hashtags;
  std::vector<std::string> urls;
  std::optional<std::string> music_id;
  std::optional<std::string> transcript;
  std::optional<std::vector<FrameHash>> frame_hashes;
  std::optional<std::string> frames_dir;

  bool operator==(const PostRecord&) const = default;
};

enum class LayerKind : std::uint8_t {
  HashtagSequence,
  VideoDescription,
  Url,
  MusicId,
  SameAudio,
  PartialAudio,
  VideoSimilarity,
};

inline constexpr std::array<LayerKind, 7> kAllLayerKinds = {
    LayerKind::HashtagSequence, LayerKind::VideoDescription, LayerKind::Url,
    LayerKind::MusicId,         LayerKind::SameAudio,        LayerKind::PartialAudio,
    LayerKind::VideoSimilarity,
};

/// Short code used in reports: HS, VD, U, MI, SA, PA, VS.
std::string_view abbreviation(LayerKind kind);
/// snake_case name used in file names and the HTTP API.
std::string_view to_string(LayerKind kind);
/// Accepts either the snake_case name or the abbreviation (case-insensitive).
std::optional<LayerKind> parse_layer_kind(std::string_view text);

/// Returns (min, max) in lexicographic order. Throws SelfLoop on equal ids.
std::pair<std::string, std::string> canonical_edge_key(std::string_view user_a,
                                                       std::string_view user_b);

/// Interned user and post ids. Both tables are sorted and unique, so index
/// order equals lexicographic id order.
class Directory {
 public:
  Directory() = default;
  Directory(std::vector<std::string> user_ids, std::vector<std::string> usernames,
            std::vector<std::string> post_ids);

  static std::shared_ptr<const Directory> from_posts(std::span<const PostRecord> posts);

  std::size_t user_count() const { return user_ids_.size(); }
  std::size_t post_count() const { return post_ids_.size(); }
  const std::string& user_id(UserIndex u) const { return user_ids_.at(u); }
  const std::string& username(UserIndex u) const { return usernames_.at(u); }
  const std::string& post_id(PostIndex p) const { return post_ids_.at(p); }
  std::optional<UserIndex> find_user(std::string_view id) const;
  std::optional<PostIndex> find_post(std::string_view id) const;

 private:
  std::vector<std::string> user_ids_;
  std::vector<std::string> usernames_;
  std::vector<std::string> post_ids_;
};

/// A similar (post, post) pair within one modality. post_a < post_b; user_a
/// owns post_a and user_b owns post_b.
struct CoActionPair {
  LayerKind kind = LayerKind::HashtagSequence;
  PostIndex post_a = 0;
  PostIndex post_b = 0;
  UserIndex user_a = 0;
  UserIndex user_b = 0;
  std::uint8_t score = 100;
  std::int64_t delta_t = 0;

  bool operator==(const CoActionPair&) const = default;
};

/// Undirected weighted user-user edge, user_a < user_b. Evidence pairs are
/// the half-open range [evidence_begin, evidence_end) of Layer::pairs().
struct UserEdge {
  UserIndex user_a = 0;
  UserIndex user_b = 0;
  std::uint64_t weight = 0;
  std::int64_t min_delta_t = 0;
  std::uint32_t evidence_begin = 0;
  std::uint32_t evidence_end = 0;

  std::size_t evidence_count() const { return evidence_end - evidence_begin; }
  bool operator==(const UserEdge&) const = default;
};

/// Fixture description of one edge: endpoints plus the delta_t of every
/// supporting co-action (weight = deltas.size()).
struct EdgeSpec {
  std::string user_a;
  std::string user_b;
  std::vector<std::int64_t> deltas{0};
};

/// Immutable user-user network for one modality.
///
/// Edges are sorted by (user_a, user_b) and pairs are grouped per edge in the
/// same order. When evidence_complete() is false some edges carry fewer
/// evidence pairs than their weight (large exact-match groups, or evidence
/// dropped on request).
class Layer {
 public:
  Layer() = default;
  explicit Layer(LayerKind kind);
  Layer(LayerKind kind, std::shared_ptr<const Directory> directory, std::vector<UserEdge> edges,
        std::vector<CoActionPair> pairs, bool evidence_complete);

  /// Builds a self-contained layer from string endpoints, synthesizing one
  /// evidence pair per delta.
  static Layer from_edge_specs(LayerKind kind, std::span<const EdgeSpec> specs);

  LayerKind kind() const { return kind_; }
  const std::shared_ptr<const Directory>& directory() const { return directory_; }
  std::span<const UserEdge> edges() const { return edges_; }
  std::span<const CoActionPair> pairs() const { return pairs_; }
  std::span<const UserIndex> nodes() const { return nodes_; }
  std::span<const CoActionPair> evidence(const UserEdge& edge) const;
  bool evidence_complete() const { return evidence_complete_; }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::string& user_id(UserIndex u) const { return directory_->user_id(u); }
  const std::string& username(UserIndex u) const { return directory_->username(u); }

  /// Copy without evidence pairs; weights and min_delta_t are kept.
  Layer without_evidence() const;

 private:
  LayerKind kind_ = LayerKind::HashtagSequence;
  std::shared_ptr<const Directory> directory_ = std::make_shared<Directory>();
  std::vector<UserEdge> edges_;
  std::vector<CoActionPair> pairs_;
  std::vector<UserIndex> nodes_;
  bool evidence_complete_ = true;
};

/// Frequency{min_weight}, FrequencyAboveAverage, Temporal{max_delta_t} or None.
struct FilterSpec {
  enum class Variant : std::uint8_t { None, Frequency, FrequencyAboveAverage, Temporal };

  Variant variant = Variant::None;
  std::int64_t value = 0;

  static FilterSpec none() { return {}; }
  static FilterSpec frequency(std::int64_t min_weight);
  static FilterSpec above_average() { return {Variant::FrequencyAboveAverage, 0}; }
  static FilterSpec temporal(std::int64_t max_delta_t);

  /// "none", "frequency:2", "frequency:avg", "temporal:60".
  std::string label() const;
  static FilterSpec parse(std::string_view label);
  /// API form: variant in {none, frequency, frequency_avg, temporal}.
  static FilterSpec from_variant(std::string_view variant, std::int64_t value);
  std::string_view variant_name() const;

  bool operator==(const FilterSpec&) const = default;
};

/// The six candidates generated per layer, in fixed order.
std::array<FilterSpec, 6> canonical_filter_candidates();

/// Selected filter per layer kind (HS/VD: frequency 10; MI: above average;
/// others unfiltered).
FilterSpec default_filter(LayerKind kind);

struct LayerStats {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::size_t component_count = 0;
  double giant_component_pct = 0.0;
  std::size_t diameter = 0;
  double avg_clustering = 0.0;
  double transitivity = 0.0;
  double density = 0.0;
  std::size_t largest_component_size = 0;

  bool operator==(const LayerStats&) const = default;
};

/// Shared and unique node/edge counts across a list of layers.
struct OverlapMatrix {
  std::vector<std::string> labels;
  /// Row-major, labels.size() squared. Diagonal holds layer sizes.
  std::vector<std::size_t> shared_nodes;
  std::vector<std::size_t> shared_edges;
  std::vector<std::size_t> unique_nodes;
  std::vector<std::size_t> unique_edges;

  std::size_t size() const { return labels.size(); }
  std::size_t nodes(std::size_t i, std::size_t j) const { return shared_nodes[i * size() + j]; }
  std::size_t edges(std::size_t i, std::size_t j) const { return shared_edges[i * size() + j]; }
};

}  // namespace coact
