#pragma once

#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "coact/model.hpp"
#include "coact/similarity.hpp"

namespace coact::layers {

/// Posts sorted by post_id so that PostIndex is the position in posts().
class Corpus {
 public:
  Corpus() : Corpus(std::vector<PostRecord>{}) {}
  explicit Corpus(std::vector<PostRecord> posts);

  std::span<const PostRecord> posts() const { return posts_; }
  const PostRecord& post(PostIndex p) const { return posts_.at(p); }
  const std::shared_ptr<const Directory>& directory() const { return directory_; }
  UserIndex user_of(PostIndex p) const { return post_user_[p]; }
  std::size_t size() const { return posts_.size(); }

 private:
  std::vector<PostRecord> posts_;
  std::shared_ptr<const Directory> directory_;
  std::vector<UserIndex> post_user_;
};

struct BuildOptions {
  /// Exact-match groups above this many posts are projected from per-user
  /// counts; their evidence pairs are not materialized.
  std::size_t group_cap = 5000;
  bool keep_evidence = true;
  similarity::AudioThresholds audio_thresholds{};
  similarity::VideoMatchOptions video{};
  unsigned threads = 1;
};

/// Collapses post pairs to weighted user edges. Pairs must all be of `kind`
/// and join distinct users; duplicate post pairs count once.
Layer project_to_users(std::vector<CoActionPair> pairs, LayerKind kind,
                       std::shared_ptr<const Directory> directory, bool keep_evidence = true);

/// HS, VD, Url or MusicId.
Layer build_exact_layer(const Corpus& corpus, LayerKind kind, const BuildOptions& options = {});

struct AudioLayers {
  Layer same;
  Layer partial;
};

AudioLayers build_audio_layers(const Corpus& corpus, const BuildOptions& options = {});

Layer build_video_layer(const Corpus& corpus, const BuildOptions& options = {});

/// All seven layers in kAllLayerKinds order.
std::vector<Layer> build_all_layers(const Corpus& corpus, const BuildOptions& options = {});

struct Posting {
  PostIndex post = 0;
  std::uint32_t frame_position = 0;

  bool operator==(const Posting&) const = default;
  auto operator<=>(const Posting&) const = default;
};

/// Exact hash buckets probed at the query and its 64 single-bit neighbours.
class HammingIndex {
 public:
  void add(PostIndex post, std::span<const FrameHash> frames);
  std::span<const Posting> bucket(FrameHash h) const;
  std::size_t bucket_count() const { return buckets_.size(); }

 private:
  std::unordered_map<FrameHash, std::vector<Posting>> buckets_;
};

/// Postings of every frame within Hamming distance 1 of h, sorted.
std::vector<Posting> hamming_candidates(const HammingIndex& index, FrameHash h);

}  // namespace coact::layers
