#include <doctest.h>

#include <random>
#include <set>

#include "coact/filtering.hpp"

using namespace coact;
using namespace coact::filtering;

namespace {

Layer weighted(std::vector<std::pair<std::pair<std::string, std::string>, std::vector<std::int64_t>>> edges) {
  std::vector<EdgeSpec> specs;
  for (auto& [k, d] : edges) specs.push_back({k.first, k.second, d});
  return Layer::from_edge_specs(LayerKind::HashtagSequence, specs);
}

std::set<std::pair<std::string, std::string>> edge_set(const Layer& l) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& e : l.edges()) out.emplace(l.user_id(e.user_a), l.user_id(e.user_b));
  return out;
}

std::vector<std::int64_t> deltas(std::size_t n, std::int64_t d = 0) { return std::vector<std::int64_t>(n, d); }

Layer clique(std::size_t n, std::size_t weight) {
  std::vector<EdgeSpec> specs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) specs.push_back({"u" + std::to_string(i), "u" + std::to_string(j), deltas(weight)});
  }
  return Layer::from_edge_specs(LayerKind::VideoDescription, specs);
}

}  // namespace

TEST_CASE("frequency filters on weights {1,2,10}") {
  const auto l = weighted({{{"a", "b"}, deltas(1)}, {{"c", "d"}, deltas(2)}, {{"e", "f"}, deltas(10)}});
  const auto f2 = apply_frequency_filter(l, FilterSpec::frequency(2));
  CHECK(edge_set(f2.layer) == std::set<std::pair<std::string, std::string>>{{"c", "d"}, {"e", "f"}});
  CHECK(f2.layer.node_count() == 4);
  const auto avg = apply_frequency_filter(l, FilterSpec::above_average());
  CHECK(edge_set(avg.layer) == std::set<std::pair<std::string, std::string>>{{"e", "f"}});
  const auto f1 = apply_frequency_filter(l, FilterSpec::frequency(1));
  CHECK(edge_set(f1.layer) == edge_set(l));
  CHECK(mean_edge_weight(l) == doctest::Approx(13.0 / 3.0));
}

TEST_CASE("above-average keeps weights equal to the mean") {
  const auto l = weighted({{{"a", "b"}, deltas(2)}, {{"c", "d"}, deltas(2)}});
  CHECK(apply_filter(l, FilterSpec::above_average()).layer.edge_count() == 2);
}

TEST_CASE("temporal filter recounts evidence and is inclusive") {
  const auto l = weighted({{{"a", "b"}, {30}}, {{"c", "d"}, {30, 400}}, {{"e", "f"}, {301}}, {{"g", "h"}, {300}}});
  const auto t60 = apply_temporal_filter(l, FilterSpec::temporal(60));
  CHECK(edge_set(t60.layer) == std::set<std::pair<std::string, std::string>>{{"a", "b"}, {"c", "d"}});
  for (const auto& e : t60.layer.edges()) CHECK(e.weight == 1);
  const auto t300 = apply_temporal_filter(l, FilterSpec::temporal(300));
  CHECK(edge_set(t300.layer).count({"g", "h"}) == 1);
  CHECK(edge_set(t300.layer).count({"e", "f"}) == 0);
}

TEST_CASE("temporal filter needs evidence") {
  const auto l = weighted({{{"a", "b"}, {30}}}).without_evidence();
  try {
    apply_temporal_filter(l, FilterSpec::temporal(60));
    FAIL("expected EvidenceUnavailable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EvidenceUnavailable);
  }
  CHECK(apply_temporal_filter(l, FilterSpec::temporal(60), TemporalMode::AnyPair).layer.edge_count() == 1);
}

TEST_CASE("any-pair mode keeps whole edges") {
  const auto l = weighted({{{"c", "d"}, {30, 400}}});
  const auto s = apply_temporal_filter(l, FilterSpec::temporal(120), TemporalMode::AnyPair);
  REQUIRE(s.layer.edge_count() == 1);
  CHECK(s.layer.edges()[0].weight == 2);
}

TEST_CASE("filter candidates") {
  const auto empty = generate_filter_candidates(Layer(LayerKind::Url));
  CHECK(empty.size() == 6);
  for (const auto& s : empty) CHECK(s.layer.edge_count() == 0);
  const auto heavy = weighted({{{"a", "b"}, deltas(10)}, {{"b", "c"}, deltas(12)}});
  const auto c = generate_filter_candidates(heavy);
  CHECK(edge_set(c[0].layer) == edge_set(c[1].layer));
  CHECK(c[0].snapshot_id != c[1].snapshot_id);
}

TEST_CASE("snapshot ids are content addressed") {
  const auto a = weighted({{{"a", "b"}, deltas(3)}});
  const auto b = weighted({{{"a", "b"}, deltas(3)}});
  const auto c = weighted({{{"a", "b"}, deltas(4)}});
  CHECK(apply_filter(a, FilterSpec::frequency(2)).snapshot_id == apply_filter(b, FilterSpec::frequency(2)).snapshot_id);
  CHECK(apply_filter(a, FilterSpec::frequency(2)).snapshot_id != apply_filter(c, FilterSpec::frequency(2)).snapshot_id);
  CHECK(snapshot_id(a, FilterSpec::none()) == snapshot_id(layer_digest(a), FilterSpec::none()));
  CHECK(snapshot_id(a, FilterSpec::none()).size() == 16);
}

TEST_CASE("prune boundary at eight nodes") {
  const auto eight = apply_filter(clique(8, 1), FilterSpec::none());
  const auto nine = apply_filter(clique(9, 1), FilterSpec::none());
  const auto none = apply_filter(Layer(LayerKind::Url), FilterSpec::none());
  CHECK_FALSE(is_viable(eight));
  CHECK(is_viable(nine));
  CHECK_FALSE(is_viable(none));
  const std::vector<FilteredSnapshot> all{eight, nine, none};
  const auto kept = prune_candidates(all);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].stats.largest_component_size == 9);
}

TEST_CASE("sweep report") {
  const auto empty = sweep_report(Layer(LayerKind::Url));
  CHECK(empty.rows.size() == 6);
  for (const auto& r : empty.rows) CHECK_FALSE(r.viable);
  const auto k10 = sweep_report(clique(10, 10));
  for (const auto& r : k10.rows) {
    if (r.filter.variant != FilterSpec::Variant::Temporal) CHECK(r.viable);
  }
  CHECK(k10.jaccard.size() == 36);
  const auto again = sweep_report(clique(10, 10));
  for (std::size_t i = 0; i < 6; ++i) CHECK(again.rows[i].snapshot_id == k10.rows[i].snapshot_id);
}

TEST_CASE("random layers obey subset chains") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<EdgeSpec> specs;
    std::set<std::pair<int, int>> seen;
    for (int e = 0; e < 40; ++e) {
      int a = static_cast<int>(rng() % 20);
      int b = static_cast<int>(rng() % 20);
      if (a == b || !seen.insert({std::min(a, b), std::max(a, b)}).second) continue;
      std::vector<std::int64_t> d(1 + rng() % 15);
      for (auto& x : d) x = static_cast<std::int64_t>(rng() % 400);
      specs.push_back({"u" + std::to_string(a), "u" + std::to_string(b), d});
    }
    const auto l = Layer::from_edge_specs(LayerKind::HashtagSequence, specs);
    auto sub = [&](const FilterSpec& x, const FilterSpec& y) {
      const auto ex = edge_set(apply_filter(l, x).layer);
      const auto ey = edge_set(apply_filter(l, y).layer);
      return std::includes(ey.begin(), ey.end(), ex.begin(), ex.end());
    };
    CHECK(sub(FilterSpec::frequency(10), FilterSpec::frequency(2)));
    CHECK(sub(FilterSpec::temporal(60), FilterSpec::temporal(120)));
    CHECK(sub(FilterSpec::temporal(120), FilterSpec::temporal(300)));
    for (const auto& s : generate_filter_candidates(l)) {
      const auto base = edge_set(l);
      const auto got = edge_set(s.layer);
      CHECK(std::includes(base.begin(), base.end(), got.begin(), got.end()));
    }
  }
}
