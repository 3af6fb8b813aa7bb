#include <doctest.h>

#include <sstream>

#include "coact/metrics.hpp"

using namespace coact;
using namespace coact::metrics;

namespace {

Layer layer_of(std::vector<EdgeSpec> specs, LayerKind kind = LayerKind::HashtagSequence) {
  return Layer::from_edge_specs(kind, specs);
}

Layer triangle() { return layer_of({{"a", "b"}, {"b", "c"}, {"a", "c"}}); }
Layer path5() { return layer_of({{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "e"}}); }
Layer bridged() {
  return layer_of({{"a", "b"}, {"b", "c"}, {"a", "c"}, {"d", "e"}, {"e", "f"}, {"d", "f"}, {"c", "d"}});
}

}  // namespace

TEST_CASE("connected components") {
  const auto l = layer_of({{"a", "b"}, {"b", "c"}, {"a", "c"}, {"x", "y"}});
  const auto comps = connected_components(l);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].size() == 3);
  CHECK(comps[1].size() == 2);
  CHECK(connected_components(Layer(LayerKind::Url)).empty());
  CHECK(connected_components(path5()).size() == 1);
}

TEST_CASE("triangle statistics") {
  const auto s = layer_stats(triangle());
  CHECK(s.node_count == 3);
  CHECK(s.edge_count == 3);
  CHECK(s.component_count == 1);
  CHECK(s.giant_component_pct == doctest::Approx(100.0));
  CHECK(s.diameter == 1);
  CHECK(s.avg_clustering == doctest::Approx(1.0));
  CHECK(s.density == doctest::Approx(1.0));
}

TEST_CASE("path statistics") {
  const auto s = layer_stats(path5());
  CHECK(s.diameter == 4);
  CHECK(s.avg_clustering == doctest::Approx(0.0));
  CHECK(s.density == doctest::Approx(4.0 / 10.0));
}

TEST_CASE("two bridged triangles") {
  const auto s = layer_stats(bridged());
  CHECK(s.node_count == 6);
  CHECK(s.edge_count == 7);
  CHECK(s.diameter == 3);
  CHECK(s.density == doctest::Approx(7.0 / 15.0));
  // Four degree-2 nodes have coefficient 1, the two bridge ends 1/3.
  CHECK(s.avg_clustering == doctest::Approx(7.0 / 9.0));
  // 3 x 2 triangles over the sum of C(degree, 2) = 10 connected triplets.
  CHECK(s.transitivity == doctest::Approx(6.0 / 10.0));
}

TEST_CASE("diameter is taken on the largest component") {
  const auto s = layer_stats(layer_of({{"a", "b"}, {"b", "c"}, {"c", "a"}, {"c", "d"}, {"x", "y"}}));
  CHECK(s.diameter == 2);
  CHECK(s.largest_component_size == 4);
  CHECK(s.giant_component_pct == doctest::Approx(100.0 * 4 / 6));
  const auto t = layer_stats(layer_of({{"a", "b"}, {"p", "q"}, {"q", "r"}, {"r", "s"}, {"s", "t"}}));
  CHECK(t.diameter == 4);
}

TEST_CASE("empty layer statistics are zero") {
  const auto s = layer_stats(Layer(LayerKind::Url));
  CHECK(s == LayerStats{});
}

TEST_CASE("threaded stats equal serial stats") {
  CHECK(layer_stats(bridged(), 4) == layer_stats(bridged(), 1));
}

TEST_CASE("overlap of identical, disjoint and partially shared layers") {
  const auto a = layer_of({{"a", "b"}, {"b", "c"}}, LayerKind::HashtagSequence);
  const auto b = layer_of({{"b", "c"}, {"c", "d"}}, LayerKind::Url);
  {
    const std::vector<Layer> ls{a, b};
    const auto m = cross_layer_overlap(ls);
    CHECK(m.labels == std::vector<std::string>{"HS", "U"});
    CHECK(m.edges(0, 1) == 1);
    CHECK(m.edges(1, 0) == 1);
    CHECK(m.nodes(0, 1) == 2);
    CHECK(m.unique_edges == std::vector<std::size_t>{1, 1});
    CHECK(m.unique_nodes == std::vector<std::size_t>{1, 1});
    CHECK(m.edges(0, 0) == 2);
  }
  {
    const std::vector<Layer> ls{a, a};
    const auto m = cross_layer_overlap(ls);
    CHECK(m.edges(0, 1) == 2);
    CHECK(m.nodes(0, 1) == 3);
    CHECK(m.unique_edges == std::vector<std::size_t>{0, 0});
  }
  {
    const auto c = layer_of({{"x", "y"}});
    const std::vector<Layer> ls{a, c};
    const auto m = cross_layer_overlap(ls);
    CHECK(m.edges(0, 1) == 0);
    CHECK(m.nodes(0, 1) == 0);
  }
}

TEST_CASE("chord csv rows") {
  const auto a = layer_of({{"a", "b"}, {"b", "c"}});
  const auto b = layer_of({{"b", "c"}, {"c", "d"}}, LayerKind::Url);
  const std::vector<Layer> ls{a, b};
  std::ostringstream out;
  write_chord_csv(out, cross_layer_overlap(ls));
  CHECK(out.str() == "source_layer,target_layer,node_overlap,edge_overlap\nHS,HS,1,1\nHS,U,2,1\nU,U,1,1\n");
}

TEST_CASE("top components") {
  const auto two = layer_of({{"a", "b"}, {"b", "c"}, {"x", "y"}});
  CHECK(top_components(two, 3).size() == 2);
  const auto clique = layer_of({{"a", "b"}, {"a", "c"}, {"a", "d"}, {"b", "c"}, {"b", "d"}, {"c", "d", {1, 2}}});
  const auto comps = top_components(clique, 1);
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].internal_edges == 6);
  CHECK(comps[0].internal_weight == 7);
  CHECK(comps[0].evidence_total == 7);
  CHECK(comps[0].user_ids == std::vector<std::string>{"a", "b", "c", "d"});
  CHECK(top_components(clique, 1, 2)[0].evidence.size() == 2);
  CHECK_THROWS_AS(top_components(clique, 0), Error);
}

TEST_CASE("node jaccard") {
  const auto a = layer_of({{"a", "b"}});
  const auto b = layer_of({{"b", "c"}});
  CHECK(node_jaccard(a, b) == doctest::Approx(1.0 / 3.0));
  CHECK(node_jaccard(Layer(LayerKind::Url), Layer(LayerKind::Url)) == 1.0);
}
