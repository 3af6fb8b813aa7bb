#include <doctest.h>

#include "coact/model.hpp"

using namespace coact;

TEST_CASE("canonical_edge_key orders endpoints") {
  CHECK(canonical_edge_key("b", "a") == std::pair<std::string, std::string>{"a", "b"});
  CHECK(canonical_edge_key("a", "b") == std::pair<std::string, std::string>{"a", "b"});
}

TEST_CASE("canonical_edge_key rejects self loops") {
  try {
    canonical_edge_key("x", "x");
    FAIL("expected SelfLoop");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SelfLoop);
  }
}

TEST_CASE("layer kinds round-trip through names and abbreviations") {
  for (LayerKind k : kAllLayerKinds) {
    CHECK(parse_layer_kind(to_string(k)) == k);
    CHECK(parse_layer_kind(abbreviation(k)) == k);
  }
  CHECK(parse_layer_kind("hs") == LayerKind::HashtagSequence);
  CHECK_FALSE(parse_layer_kind("nope").has_value());
}

TEST_CASE("directory requires sorted unique ids") {
  CHECK_THROWS_AS(Directory({"b", "a"}, {"B", "A"}, {}), Error);
  CHECK_THROWS_AS(Directory({"a", "a"}, {"A", "A"}, {}), Error);
  Directory d({"a", "b"}, {"A", "B"}, {"p1"});
  CHECK(d.find_user("b") == 1u);
  CHECK_FALSE(d.find_user("c").has_value());
  CHECK(d.username(0) == "A");
}

TEST_CASE("layer from edge specs: nodes equal union of endpoints, weights equal delta counts") {
  const std::vector<EdgeSpec> specs{{"b", "a", {5, 7}}, {"c", "b", {1}}};
  const Layer l = Layer::from_edge_specs(LayerKind::Url, specs);
  CHECK(l.node_count() == 3);
  REQUIRE(l.edge_count() == 2);
  CHECK(l.user_id(l.edges()[0].user_a) == "a");
  CHECK(l.edges()[0].weight == 2);
  CHECK(l.edges()[0].min_delta_t == 5);
  CHECK(l.evidence(l.edges()[0]).size() == 2);
  CHECK(l.evidence_complete());
}

TEST_CASE("layer rejects self loops and duplicate edges") {
  const std::vector<EdgeSpec> loop{{"a", "a", {0}}};
  CHECK_THROWS_AS(Layer::from_edge_specs(LayerKind::Url, loop), Error);
}

TEST_CASE("without_evidence keeps weights") {
  const std::vector<EdgeSpec> specs{{"a", "b", {1, 2, 3}}};
  const Layer l = Layer::from_edge_specs(LayerKind::Url, specs).without_evidence();
  CHECK(l.edges()[0].weight == 3);
  CHECK(l.pairs().empty());
  CHECK_FALSE(l.evidence_complete());
}

TEST_CASE("filter specs parse and label") {
  CHECK(FilterSpec::parse("frequency:10") == FilterSpec::frequency(10));
  CHECK(FilterSpec::parse("frequency:avg") == FilterSpec::above_average());
  CHECK(FilterSpec::parse("temporal:60") == FilterSpec::temporal(60));
  CHECK(FilterSpec::parse("none") == FilterSpec::none());
  CHECK(FilterSpec::from_variant("frequency_avg", 0) == FilterSpec::above_average());
  CHECK(FilterSpec::temporal(300).label() == "temporal:300");
  CHECK_THROWS_AS(FilterSpec::parse("frequency:0"), Error);
  CHECK_THROWS_AS(FilterSpec::parse("weird"), Error);
  CHECK_THROWS_AS(FilterSpec::from_variant("weird", 3), Error);
}

TEST_CASE("default filters per layer") {
  CHECK(default_filter(LayerKind::HashtagSequence) == FilterSpec::frequency(10));
  CHECK(default_filter(LayerKind::VideoDescription) == FilterSpec::frequency(10));
  CHECK(default_filter(LayerKind::MusicId) == FilterSpec::above_average());
  CHECK(default_filter(LayerKind::Url) == FilterSpec::none());
  CHECK(default_filter(LayerKind::SameAudio) == FilterSpec::none());
  CHECK(default_filter(LayerKind::PartialAudio) == FilterSpec::none());
  CHECK(default_filter(LayerKind::VideoSimilarity) == FilterSpec::none());
  CHECK(canonical_filter_candidates().size() == 6);
}
