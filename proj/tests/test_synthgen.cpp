#include <doctest.h>

#include <set>

#include "coact/layers.hpp"
#include "coact/similarity.hpp"
#include "coact/synthgen.hpp"

using namespace coact;
using namespace coact::synthgen;

TEST_CASE("reference rows follow the reuse semantics") {
  CHECK(reference_row(ReuseType::Repost).excluded_from_layers);
  const auto reupload = reference_row(ReuseType::Reupload);
  CHECK(reupload.at(LayerKind::SameAudio) == Expect::Linked);
  CHECK(reupload.at(LayerKind::VideoSimilarity) == Expect::Linked);
  CHECK(reupload.at(LayerKind::MusicId) == Expect::NotLinked);
  const auto duet = reference_row(ReuseType::Duet);
  CHECK(duet.at(LayerKind::MusicId) == Expect::Linked);
  CHECK(duet.at(LayerKind::SameAudio) == Expect::Linked);
  const auto stitch = reference_row(ReuseType::Stitch);
  CHECK(stitch.at(LayerKind::PartialAudio) == Expect::Linked);
  CHECK(stitch.at(LayerKind::SameAudio) == Expect::NotLinked);
  CHECK(stitch.at(LayerKind::MusicId) == Expect::NotLinked);
}

TEST_CASE("generated reuse pairs satisfy their rows") {
  Generator gen(11);
  const auto base = gen.base_post();
  const auto reupload = generate_reuse_pair(base, ReuseType::Reupload, gen);
  CHECK(reupload.derived.transcript == base.transcript);
  CHECK(reupload.derived.frame_hashes == base.frame_hashes);
  CHECK(reupload.derived.music_id != base.music_id);
  CHECK(reupload.derived.user_id != base.user_id);

  const auto duet = generate_reuse_pair(base, ReuseType::Duet, gen);
  CHECK(duet.derived.music_id == base.music_id);
  CHECK(duet.expected.at(LayerKind::VideoSimilarity) == Expect::NotLinked);
  for (FrameHash d : *duet.derived.frame_hashes) {
    for (FrameHash b : *base.frame_hashes) CHECK(similarity::hamming_distance(d, b) >= 2);
  }

  const auto stitch = generate_reuse_pair(base, ReuseType::Stitch, gen);
  const auto cls = similarity::classify_audio_pair(*base.transcript, *stitch.derived.transcript);
  CHECK(cls.category == similarity::AudioCategory::Partial);
  CHECK(cls.exact_score < 78);
  CHECK(stitch.derived.frame_hashes->size() > base.frame_hashes->size());
}

TEST_CASE("incomplete bases are rejected") {
  PostRecord p;
  p.post_id = "p";
  p.user_id = "u";
  try {
    generate_reuse_pair(p, ReuseType::Duet, 1);
    FAIL("expected IncompleteBase");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IncompleteBase);
  }
}

TEST_CASE("zero-jitter cluster posts differ only in ids, users and timestamps") {
  Generator gen(5);
  ClusterSpec spec;
  spec.n_users = 4;
  spec.templ = gen.base_post();
  std::vector<PostRecord> corpus;
  const auto truth = inject_coordinated_cluster(corpus, spec, gen);
  CHECK(corpus.size() == 8);
  CHECK(truth.user_ids.size() == 4);
  for (const auto& p : corpus) {
    CHECK(p.description == spec.templ.description);
    CHECK(p.hashtags == spec.templ.hashtags);
    CHECK(p.transcript == spec.templ.transcript);
    CHECK(p.created_at >= spec.active_start);
    CHECK(p.created_at <= spec.active_end);
  }
}

TEST_CASE("two-user cluster yields one VD edge") {
  Generator gen(6);
  ClusterSpec spec;
  spec.n_users = 2;
  spec.posts_per_user = 1;
  spec.templ = gen.base_post();
  std::vector<PostRecord> corpus;
  inject_coordinated_cluster(corpus, spec, gen);
  const auto l = layers::build_exact_layer(layers::Corpus(corpus), LayerKind::VideoDescription);
  CHECK(l.edge_count() == 1);
}

TEST_CASE("seeded generation is repeatable") {
  ScenarioConfig cfg;
  cfg.background.posts = 200;
  cfg.background.users = 50;
  cfg.reuse_pairs_per_type = 3;
  cfg.clusters = 2;
  const auto a = generate_scenario(cfg, 77);
  const auto b = generate_scenario(cfg, 77);
  CHECK(a.posts == b.posts);
  CHECK(ground_truth_json(a) == ground_truth_json(b));
  const auto c = generate_scenario(cfg, 78);
  CHECK_FALSE(a.posts == c.posts);
}

TEST_CASE("detection matrix aggregation") {
  CHECK(expected_detection_matrix({}).empty());
  Generator gen(9);
  std::vector<ReusePair> pairs;
  for (ReuseType t : kAllReuseTypes) pairs.push_back(generate_reuse_pair(gen.base_post(), t, gen));
  const auto m = expected_detection_matrix(pairs);
  REQUIRE(m.size() == 4);
  CHECK(m[0].row.excluded_from_layers);
  pairs[1].expected.per_layer[static_cast<std::size_t>(LayerKind::MusicId)] = Expect::Linked;
  try {
    expected_detection_matrix(pairs);
    FAIL("expected MatrixMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MatrixMismatch);
  }
}

TEST_CASE("cluster usernames follow the naming convention") {
  Generator gen(1);
  for (int i = 0; i < 20; ++i) {
    const auto name = gen.cluster_username();
    REQUIRE_FALSE(name.empty());
    CHECK(std::isdigit(static_cast<unsigned char>(name.back())));
    CHECK(std::isalpha(static_cast<unsigned char>(name.front())) != 0);
  }
}

TEST_CASE("unique pools do not run dry") {
  synthgen::Generator gen(17);
  std::set<std::string> descriptions;
  for (int i = 0; i < 2000; ++i) descriptions.insert(gen.description(1));
  CHECK(descriptions.size() == 2000);
  std::set<std::string> names;
  for (int i = 0; i < 20000; ++i) names.insert(gen.plain_username());
  CHECK(names.size() == 20000);
}
