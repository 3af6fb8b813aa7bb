#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "coact/model.hpp"

namespace coact::synthgen {

enum class ReuseType : std::uint8_t { Repost, Reupload, Duet, Stitch };

inline constexpr std::array<ReuseType, 4> kAllReuseTypes = {ReuseType::Repost, ReuseType::Reupload,
                                                            ReuseType::Duet, ReuseType::Stitch};

std::string_view to_string(ReuseType type);

/// Linked: the layer must connect the pair; NotLinked: it must not; Any:
/// not guaranteed either way.
enum class Expect : std::uint8_t { Linked, NotLinked, Any };

std::string_view to_string(Expect e);

struct DetectionRow {
  ReuseType type = ReuseType::Repost;
  /// Reposts are not new posts and never enter layer building.
  bool excluded_from_layers = false;
  std::array<Expect, 7> per_layer{};  // indexed by LayerKind

  Expect at(LayerKind kind) const { return per_layer[static_cast<std::size_t>(kind)]; }
  bool operator==(const DetectionRow&) const = default;
};

/// Reuse semantics per type: which features a reuse keeps, mapped to layers.
/// "Not guaranteed" features become NotLinked because the generator always
/// redraws them; a partially kept video is Any.
DetectionRow reference_row(ReuseType type);

struct ReusePair {
  ReuseType type = ReuseType::Repost;
  PostRecord base;
  PostRecord derived;
  DetectionRow expected;
};

struct ClusterJitter {
  /// > 0: all posts of the cluster fall in one burst of this many seconds.
  std::int64_t time_window = 0;
  double description_mutation_rate = 0.0;
  bool permute_hashtags = false;
};

struct ClusterSpec {
  std::size_t n_users = 2;
  std::size_t posts_per_user = 2;
  PostRecord templ;
  ClusterJitter jitter;
  std::int64_t active_start = 1714521600;  // 2024-05-01
  std::int64_t active_end = 1717977600;    // 2024-06-10
};

struct GroundTruthCluster {
  std::string name;
  std::vector<std::string> user_ids;  // sorted
  std::vector<std::string> post_ids;
};

struct BackgroundOptions {
  std::size_t posts = 1000;
  std::size_t users = 400;
  double transcript_rate = 0.5;
  double frame_rate = 0.5;
  double music_rate = 0.7;
  std::size_t music_pool = 200;
  double url_rate = 0.05;
  std::size_t transcript_length = 200;
  std::size_t frames_per_video = 6;
  std::int64_t start = 1714521600;
  std::int64_t end = 1717977600;
};

/// Seeded generator. Every id, hash, description and hashtag sequence it hands
/// out is unique across the generator's lifetime, and frame hashes are kept at
/// Hamming distance >= 2 from all earlier ones.
class Generator {
 public:
  explicit Generator(std::uint64_t seed);

  std::string post_id();
  std::string user_id();
  std::string music_id();
  /// Convention-following name: female first name + digits.
  std::string cluster_username();
  std::string plain_username();

  /// Space-separated pseudo-words, at least `length` code points.
  std::string transcript(std::size_t length);
  /// Unique description ending in a unique hashtag sequence.
  std::string description(std::size_t hashtags = 3);
  std::vector<FrameHash> frames(std::size_t count);
  /// Frame at distance >= min_bits from `source`, registered as used.
  FrameHash perturb_frame(FrameHash source, int min_bits);
  std::int64_t timestamp(std::int64_t start, std::int64_t end);

  /// Post with transcript, frames, music id and description.
  PostRecord base_post(std::int64_t start = 1714521600, std::int64_t end = 1717977600);

  std::mt19937_64& rng() { return rng_; }

 private:
  FrameHash fresh_frame();
  bool frame_is_free(FrameHash h) const;
  std::string unique_token(std::string_view prefix, std::set<std::string>& used, int digits);
  std::string word();

  std::mt19937_64 rng_;
  std::vector<std::string> vocabulary_;
  std::vector<std::string> hashtag_pool_;
  std::set<std::string> used_posts_;
  std::set<std::string> used_users_;
  std::set<std::string> used_music_;
  std::set<std::string> used_names_;
  std::set<std::string> used_descriptions_;
  std::set<std::string> used_tag_sequences_;
  std::set<std::string> used_tags_;
  std::unordered_set<FrameHash> used_frames_;
};

/// Derived post for `type` by a fresh user. Throws IncompleteBase when the
/// base lacks a transcript or frames.
ReusePair generate_reuse_pair(const PostRecord& base, ReuseType type, Generator& gen);
ReusePair generate_reuse_pair(const PostRecord& base, ReuseType type, std::uint64_t seed);

/// Appends the cluster's posts to corpus and returns its ground truth.
GroundTruthCluster inject_coordinated_cluster(std::vector<PostRecord>& corpus, const ClusterSpec& spec,
                                              Generator& gen);
GroundTruthCluster inject_coordinated_cluster(std::vector<PostRecord>& corpus, const ClusterSpec& spec,
                                              std::uint64_t seed);

std::vector<PostRecord> generate_background(const BackgroundOptions& options, Generator& gen);

struct MatrixRow {
  ReuseType type = ReuseType::Repost;
  std::size_t pairs = 0;
  DetectionRow row;
};

/// One row per reuse type present, in enum order. Throws MatrixMismatch when
/// pairs of one type disagree or contradict reference_row().
std::vector<MatrixRow> expected_detection_matrix(std::span<const ReusePair> pairs);

struct ScenarioConfig {
  BackgroundOptions background{};
  std::size_t reuse_pairs_per_type = 50;
  std::size_t clusters = 10;
  std::size_t cluster_min_users = 5;
  std::size_t cluster_max_users = 20;
  std::size_t cluster_posts_per_user = 2;
  ClusterJitter jitter{};
};

struct Scenario {
  std::vector<PostRecord> posts;
  std::vector<ReusePair> reuse_pairs;
  std::vector<GroundTruthCluster> clusters;
};

/// Background + reuse pairs (reposts excluded from posts) + clusters.
Scenario generate_scenario(const ScenarioConfig& config, std::uint64_t seed);

/// Ground-truth document: clusters with expected edges and reuse pairs with
/// their expected layer linkage.
nlohmann::json ground_truth_json(const Scenario& scenario);

}  // namespace coact::synthgen
