#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "coact/layers.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace coact;
using namespace coact::layers;
using fixture::post;

namespace {

std::map<std::pair<std::string, std::string>, std::uint64_t> weights(const Layer& l) {
  std::map<std::pair<std::string, std::string>, std::uint64_t> out;
  for (const auto& e : l.edges()) out[{l.user_id(e.user_a), l.user_id(e.user_b)}] = e.weight;
  return out;
}

}  // namespace

TEST_CASE("same hashtag list across three users forms a triangle") {
  const Corpus c({post("p1", "u1", 1, "a #x #y"), post("p2", "u2", 2, "b #x #y"), post("p3", "u3", 3, "c #X #y"),
                  post("p4", "u4", 4, "#y #x")});
  const auto l = build_exact_layer(c, LayerKind::HashtagSequence);
  CHECK(l.node_count() == 3);
  CHECK(l.edge_count() == 3);
  for (const auto& e : l.edges()) CHECK(e.weight == 1);
}

TEST_CASE("empty hashtag lists and descriptions are not keys") {
  const Corpus c({post("p1", "u1", 1, "plain"), post("p2", "u2", 2, "plain"), post("p3", "u3", 3, ""),
                  post("p4", "u4", 4, "")});
  CHECK(build_exact_layer(c, LayerKind::HashtagSequence).edge_count() == 0);
  const auto vd = build_exact_layer(c, LayerKind::VideoDescription);
  CHECK(vd.edge_count() == 1);
}

TEST_CASE("same-user posts never link") {
  const Corpus c({post("p1", "u1", 1, "same words"), post("p2", "u1", 2, "same words")});
  CHECK(build_exact_layer(c, LayerKind::VideoDescription).edge_count() == 0);
}

TEST_CASE("null music ids are skipped; equal ids link") {
  const Corpus c({post("p1", "u1"), post("p2", "u2"), fixture::with_music(post("p3", "u3"), "m1"),
                  fixture::with_music(post("p4", "u4"), "m1")});
  const auto l = build_exact_layer(c, LayerKind::MusicId);
  CHECK(l.edge_count() == 1);
  CHECK(l.user_id(l.edges()[0].user_a) == "u3");
}

TEST_CASE("url layer uses full urls, one key per url") {
  const Corpus c({post("p1", "u1", 1, "http://a.de/x http://a.de/y"), post("p2", "u2", 5, "http://a.de/x and http://a.de/y"),
                  post("p3", "u3", 9, "http://a.de")});
  const auto l = build_exact_layer(c, LayerKind::Url);
  CHECK(l.edge_count() == 1);
  CHECK(l.edges()[0].weight == 1);  // one distinct post pair
  CHECK(l.edges()[0].min_delta_t == 4);
}

TEST_CASE("weights count distinct post pairs and min_delta_t is the closest pair") {
  const Corpus c({post("p1", "u1", 100, "#a"), post("p2", "u1", 200, "#a"), post("p3", "u2", 230, "#a")});
  const auto l = build_exact_layer(c, LayerKind::HashtagSequence);
  REQUIRE(l.edge_count() == 1);
  CHECK(l.edges()[0].weight == 2);
  CHECK(l.edges()[0].min_delta_t == 30);
  CHECK(l.evidence(l.edges()[0]).size() == 2);
}

TEST_CASE("groups above the cap are projected with exact weights and truncated evidence") {
  std::vector<PostRecord> posts;
  std::mt19937_64 rng(3);
  for (int i = 0; i < 40; ++i) {
    posts.push_back(post("p" + std::to_string(100 + i), "u" + std::to_string(rng() % 9), 1000 + static_cast<int>(rng() % 500), "#same"));
  }
  const Corpus c(posts);
  BuildOptions small;
  small.group_cap = 10;
  const auto capped = build_exact_layer(c, LayerKind::HashtagSequence, small);
  const auto full = build_exact_layer(c, LayerKind::HashtagSequence);
  CHECK(weights(capped) == weights(full));
  CHECK_FALSE(capped.evidence_complete());
  CHECK(full.evidence_complete());
  REQUIRE(capped.edge_count() == full.edge_count());
  for (std::size_t i = 0; i < full.edge_count(); ++i) {
    CHECK(capped.edges()[i].min_delta_t == full.edges()[i].min_delta_t);
  }
}

TEST_CASE("project_to_users") {
  const Corpus c({post("a1", "u"), post("a2", "u"), post("b1", "v"), post("b2", "v"), post("c1", "w")});
  const auto& dir = c.directory();
  auto pair = [&](PostIndex a, PostIndex b) {
    return CoActionPair{LayerKind::Url, a, b, c.user_of(a), c.user_of(b), 100, 0};
  };
  const auto two = project_to_users({pair(0, 2), pair(1, 3)}, LayerKind::Url, dir);
  REQUIRE(two.edge_count() == 1);
  CHECK(two.edges()[0].weight == 2);
  const auto star = project_to_users({pair(0, 2), pair(0, 4)}, LayerKind::Url, dir);
  CHECK(star.edge_count() == 2);
  CHECK(project_to_users({}, LayerKind::Url, dir).edge_count() == 0);
  const auto dup = project_to_users({pair(0, 2), pair(0, 2)}, LayerKind::Url, dir);
  CHECK(dup.edges()[0].weight == 1);
}

TEST_CASE("audio layers") {
  const std::string t = "wir stehen zusammen für unsere heimat und unsere zukunft jeden tag";
  const std::string stitch = t + " dazu sage ich nur eines das ist alles gelogen und zwar komplett von vorne bis hinten";
  const Corpus c({fixture::with_transcript(post("p1", "u1"), t), fixture::with_transcript(post("p2", "u2"), t),
                  fixture::with_transcript(post("p3", "u3"), t), fixture::with_transcript(post("p4", "u4"), stitch),
                  fixture::with_transcript(post("p5", "u5"), "etwas ganz anderes über das wetter morgen")});
  const auto audio = build_audio_layers(c);
  CHECK(audio.same.edge_count() == 3);  // triangle u1,u2,u3
  CHECK(audio.partial.edge_count() == 3);  // u4 to each
  for (const auto& e : audio.partial.edges()) CHECK(audio.partial.user_id(e.user_b) == "u4");
  BuildOptions threaded;
  threaded.threads = 3;
  const auto again = build_audio_layers(c, threaded);
  CHECK(weights(again.same) == weights(audio.same));
  CHECK(weights(again.partial) == weights(audio.partial));
}

TEST_CASE("audio layer matches brute-force classification") {
  std::mt19937_64 rng(99);
  const char* words[] = {"ja", "nein", "wahl", "heute", "land", "frei", "volk", "zeit"};
  std::vector<PostRecord> posts;
  std::vector<std::string> texts;
  for (int i = 0; i < 60; ++i) {
    std::string t;
    if (i > 0 && rng() % 3 == 0) {
      t = texts[rng() % texts.size()];
      if (rng() % 2) t += " und noch mehr worte";
    } else {
      for (int w = 0; w < 6; ++w) t += std::string(w ? " " : "") + words[rng() % 8];
    }
    texts.push_back(t);
    posts.push_back(fixture::with_transcript(post("p" + std::to_string(100 + i), "u" + std::to_string(i % 25)), t));
  }
  const Corpus c(posts);
  const auto audio = build_audio_layers(c);
  std::set<std::pair<std::string, std::string>> same_pairs;
  std::set<std::pair<std::string, std::string>> partial_pairs;
  for (PostIndex a = 0; a < c.size(); ++a) {
    for (PostIndex b = a + 1; b < c.size(); ++b) {
      if (c.post(a).user_id == c.post(b).user_id) continue;
      const auto cls = similarity::classify_audio_pair(*c.post(a).transcript, *c.post(b).transcript);
      auto key = canonical_edge_key(c.post(a).user_id, c.post(b).user_id);
      if (cls.category == similarity::AudioCategory::Same) same_pairs.insert(key);
      if (cls.category == similarity::AudioCategory::Partial) partial_pairs.insert(key);
    }
  }
  std::set<std::pair<std::string, std::string>> got_same;
  std::set<std::pair<std::string, std::string>> got_partial;
  for (const auto& [k, w] : weights(audio.same)) got_same.insert(k);
  for (const auto& [k, w] : weights(audio.partial)) got_partial.insert(k);
  CHECK(got_same == same_pairs);
  CHECK(got_partial == partial_pairs);
}

TEST_CASE("video layer") {
  const std::vector<FrameHash> v{0x10, 0x200, 0x4000, 0x80000};
  const std::vector<FrameHash> cut{0x200, 0x4000};
  const std::vector<FrameHash> far{0x10 ^ 0x3, 0x200 ^ 0x3};
  const Corpus c({fixture::with_frames(post("p1", "u1"), v), fixture::with_frames(post("p2", "u2"), v),
                  fixture::with_frames(post("p3", "u3"), cut), fixture::with_frames(post("p4", "u4"), far)});
  const auto l = build_video_layer(c);
  CHECK(l.edge_count() == 3);
  for (const auto& e : l.edges()) {
    CHECK(l.user_id(e.user_a) != "u4");
    CHECK(l.user_id(e.user_b) != "u4");
  }
}

TEST_CASE("hamming_candidates examples and linear-scan agreement") {
  HammingIndex idx;
  const std::vector<FrameHash> zero{0};
  idx.add(0, zero);
  CHECK(hamming_candidates(idx, 1).size() == 1);
  CHECK(hamming_candidates(idx, 3).empty());

  std::mt19937_64 rng(5);
  HammingIndex big;
  std::vector<std::pair<PostIndex, std::vector<FrameHash>>> posts;
  std::vector<FrameHash> all;
  for (PostIndex p = 0; p < 500; ++p) {
    std::vector<FrameHash> f(4);
    for (auto& h : f) {
      h = (rng() % 4 == 0 && !all.empty()) ? all[rng() % all.size()] ^ (FrameHash{1} << (rng() % 64)) : rng();
      all.push_back(h);
    }
    big.add(p, f);
    posts.emplace_back(p, f);
  }
  for (int q = 0; q < 300; ++q) {
    const FrameHash h = q % 2 ? all[rng() % all.size()] ^ (FrameHash{1} << (rng() % 64)) : rng();
    CHECK(hamming_candidates(big, h) == oracle::linear_scan(posts, h));
  }
}

TEST_CASE("build_all_layers returns seven layers in order") {
  const Corpus c({post("p1", "u1", 1, "#x"), post("p2", "u2", 2, "#x")});
  const auto all = build_all_layers(c);
  REQUIRE(all.size() == 7);
  for (std::size_t i = 0; i < 7; ++i) CHECK(all[i].kind() == kAllLayerKinds[i]);
  CHECK(all[0].edge_count() == 1);
}
