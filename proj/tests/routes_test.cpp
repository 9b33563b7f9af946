#include "rh/routes.hpp"

#include <gtest/gtest.h>

#include "rh/io.hpp"
#include "test_support.hpp"

namespace rh {
namespace {

using test::edges;

class FixtureRoutes : public ::testing::Test {
 protected:
  Instance inst = make_fixture();
  const LabeledGraph& g = inst.graph;
  const RouteSet& d = inst.routes;

  Sequence seq(std::initializer_list<const char*> names) {
    Sequence s;
    for (auto n : names) s.push_back(*g.find_label(n));
    return s;
  }
  RouteSet only(std::initializer_list<RouteId> tids) {
    RouteSet out;
    for (auto t : tids) out.insert(d.at(t));
    return out;
  }
};

TEST_F(FixtureRoutes, InducedSequences) {
  EXPECT_EQ(induced_sequence(d.at(1), g), seq({"PS", "WS", "DB"}));
  EXPECT_EQ(induced_sequence(d.at(7), g), seq({"PS", "MS", "MS", "DB"}));
  EXPECT_EQ(induced_sequence(Route{99, {6, 7}}, g), seq({"PS", "MS"}));
  EXPECT_EQ(induced_sequence(d.at(7), Subroute{7, 1, 3}, g), seq({"MS", "MS", "DB"}));
}

TEST_F(FixtureRoutes, InducedSequenceUnknownVertex) {
  EXPECT_THROW(induced_sequence(Route{1, {1, 42}}, g), InputError);
}

TEST_F(FixtureRoutes, ContainmentIsNonContiguous) {
  auto t7 = seq({"PS", "MS", "MS", "DB"});
  EXPECT_TRUE(contains_pattern(t7, Pattern{seq({"PS", "MS", "DB"})}));
  EXPECT_TRUE(contains_pattern(seq({"PS", "WS", "DB"}), Pattern{seq({"PS", "DB"})}));
  EXPECT_TRUE(contains_pattern(t7, Pattern{t7}));
  EXPECT_FALSE(contains_pattern(t7, Pattern{seq({"PS", "MS", "MS", "DB", "DB"})}));
  EXPECT_FALSE(contains_pattern(t7, Pattern{seq({"DB", "PS"})}));
}

TEST_F(FixtureRoutes, SupportCountsDistinctRoutes) {
  auto ps_ms = test::pat(g, "PS,MS");
  EXPECT_EQ(pattern_support(d, ps_ms, g), 6u);
  std::size_t brute = 0;
  for (RouteId t = 3; t <= 8; ++t) brute += contains_pattern(induced_sequence(d.at(t), g), ps_ms);
  EXPECT_EQ(brute, 6u);
  EXPECT_EQ(pattern_support(d, test::pat(g, "PS,MS,MS,DB,DB"), g), 0u);
  EXPECT_EQ(pattern_support(d, test::pat(g, "WS,DB"), g), 2u);
}

TEST_F(FixtureRoutes, FragmentSupportCountsParentsOnce) {
  std::vector<Subroute> frags{{7, 0, 1}, {7, 0, 2}, {3, 1, 3}};
  EXPECT_EQ(pattern_support(frags, d, test::pat(g, "PS,MS"), g), 1u);
  EXPECT_EQ(pattern_support(frags, d, test::pat(g, "MS,DB"), g), 1u);
}

TEST_F(FixtureRoutes, RouteContainment) {
  auto h = edges({{4, 6}, {4, 7}, {4, 9}, {6, 7}, {7, 9}});
  EXPECT_TRUE(route_contained(d.at(7), h));
  EXPECT_FALSE(route_contained(d.at(3), h));
  EXPECT_TRUE(route_contained(d.at(3), Subroute{3, 1, 3}, h));
  for (const auto& [tid, r] : d) EXPECT_TRUE(route_contained(r, g.edges()));
}

TEST_F(FixtureRoutes, Coverage) {
  auto h = edges({{1, 2}, {2, 5}, {1, 3}, {3, 5}});
  EXPECT_TRUE(covers(d, whole_routes(only({1, 2})), h));
  EXPECT_FALSE(covers(d, whole_routes(only({1})), h));
  EXPECT_TRUE(covers(d, whole_routes(only({1})), {}));
}

TEST_F(FixtureRoutes, CoverageImpliesContainmentButNotConversely) {
  auto h = edges({{1, 2}, {2, 5}, {1, 3}, {3, 5}});
  auto both = whole_routes(only({1, 2}));
  ASSERT_TRUE(covers(d, both, h));
  for (const auto& t : both) EXPECT_TRUE(route_contained(d.at(t.tid), t, h));
  // T1 lies inside h, but cannot cover it alone
  auto one = whole_routes(only({1}));
  EXPECT_TRUE(route_contained(d.at(1), h));
  EXPECT_FALSE(covers(d, one, h));
}

TEST_F(FixtureRoutes, InduceFromRoutes) {
  EXPECT_TRUE(induce_from_routes(RouteSet{}).empty());
  EXPECT_EQ(induce_from_routes(only({5})), edges({{4, 6}}));
  EXPECT_EQ(induce_from_routes(only({1, 2})), edges({{1, 2}, {2, 5}, {1, 3}, {3, 5}}));
  EXPECT_EQ(induce_from_routes(d).size(), 12u);
}

TEST_F(FixtureRoutes, MaximalFragmentsOfT8) {
  auto h = edges({{4, 6}, {4, 7}, {4, 9}, {6, 7}, {7, 9}});
  auto frags = maximal_fragments(d.at(8), h);
  ASSERT_EQ(frags.size(), 1u);
  EXPECT_EQ(frags[0], (Subroute{8, 0, 1}));
  auto whole = maximal_fragments(d.at(7), h);
  ASSERT_EQ(whole.size(), 1u);
  EXPECT_EQ(whole[0], (Subroute{7, 0, 3}));
}

TEST_F(FixtureRoutes, RouteTrussness) {
  auto t = truss_decompose(g);
  EXPECT_EQ(route_trussness(d.at(1), t.edge_trussness), 2u);
  EXPECT_EQ(route_trussness(Route{9, {4, 6}}, t.edge_trussness), t.edge_trussness.at(EdgeKey(4, 6)));
  EXPECT_EQ(route_trussness(d.at(1), {}), 0u);
}

TEST(RouteTrussness, RouteTouchingAFourTruss) {
  // K4 on 1..4 with a tail 4-5-6
  auto es = test::complete(4);
  es.push_back(EdgeKey(4, 5));
  es.push_back(EdgeKey(5, 6));
  auto g = test::graph_of(6, make_edge_set(es));
  auto t = truss_decompose(g);
  EXPECT_GE(route_trussness(Route{1, {6, 5, 4, 3}}, t.edge_trussness), 4u);
  EXPECT_EQ(route_trussness(Route{2, {6, 5, 4}}, t.edge_trussness), 2u);
}

// All slices checked one by one: keep in-set slices not extendable either way.
std::vector<Subroute> quadratic_fragments(const Route& r, const EdgeSet& h) {
  auto inside = [&](std::uint32_t a, std::uint32_t b) {
    for (auto i = a; i < b; ++i) {
      if (!contains_edge(h, r.step(i))) return false;
    }
    return true;
  };
  std::vector<Subroute> out;
  const auto n = static_cast<std::uint32_t>(r.length());
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = a + 1; b <= n; ++b) {
      if (inside(a, b) && !(a > 0 && inside(a - 1, b)) && !(b < n && inside(a, b + 1))) out.push_back({r.tid, a, b});
    }
  }
  return out;
}

TEST(MaximalFragments, RandomRoutesMatchQuadraticScan) {
  test::Rng rng(17);
  for (int round = 0; round < 200; ++round) {
    // walks on a cycle with a random half of the edges in h
    const std::size_t n = 8;
    Route r{1, {static_cast<VertexId>(1 + test::pick(rng, n))}};
    std::size_t len = 1 + test::pick(rng, 12);
    for (std::size_t i = 0; i < len; ++i) {
      VertexId cur = r.walk.back();
      VertexId next = test::pick(rng, 2) ? cur % n + 1 : (cur + n - 2) % n + 1;
      r.walk.push_back(next);
    }
    EdgeSet h;
    for (VertexId v = 1; v <= n; ++v) {
      if (test::pick(rng, 2)) h.push_back(EdgeKey(v, v % n + 1));
    }
    h = make_edge_set(h);
    auto got = maximal_fragments(r, h);
    EXPECT_EQ(got, quadratic_fragments(r, h));
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_TRUE(route_contained(r, got[i], h));
      if (i) {
        EXPECT_LT(got[i - 1].end, got[i].start);
      }
    }
  }
}

TEST(ContainsPattern, SubpatternOfContainedPatternIsContained) {
  test::Rng rng(23);
  for (int round = 0; round < 500; ++round) {
    Sequence s(1 + test::pick(rng, 8));
    for (auto& x : s) x = static_cast<LabelId>(test::pick(rng, 3));
    Pattern p2{Sequence(2 + test::pick(rng, 3))};
    for (auto& x : p2.items) x = static_cast<LabelId>(test::pick(rng, 3));
    // drop one random item to get a subsequence of p2
    Pattern p1 = p2;
    p1.items.erase(p1.items.begin() + static_cast<long>(test::pick(rng, p1.items.size())));
    if (contains_pattern(s, p2)) {
      EXPECT_TRUE(contains_pattern(s, p1));
    }
  }
}

TEST(PatternSupport, AntiMonotoneUnderExtension) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto inst = test::medium_instance(seed);
    const auto& g = inst.graph;
    test::Rng rng(seed);
    for (int round = 0; round < 40; ++round) {
      Pattern p{{static_cast<LabelId>(test::pick(rng, g.label_names().size())),
                 static_cast<LabelId>(test::pick(rng, g.label_names().size()))}};
      auto q = p.extended(static_cast<LabelId>(test::pick(rng, g.label_names().size())));
      EXPECT_GE(pattern_support(inst.routes, p, g), pattern_support(inst.routes, q, g));
    }
  }
}

TEST(RouteSet, RejectsDuplicatesAndShortWalks) {
  RouteSet d;
  d.insert(Route{1, {1, 2}});
  EXPECT_THROW(d.insert(Route{1, {2, 3}}), InputError);
  EXPECT_THROW(d.insert(Route{2, {1}}), InputError);
  EXPECT_THROW(d.erase(5), InputError);
  EXPECT_THROW(d.at(5), InputError);
}

TEST(ValidateRoute, ChecksVerticesAndSteps) {
  auto g = test::graph_of(3, edges({{1, 2}, {2, 3}}));
  EXPECT_NO_THROW(validate_route(g, Route{1, {1, 2, 3, 2}}));
  EXPECT_THROW(validate_route(g, Route{1, {1, 3}}), InputError);
  EXPECT_THROW(validate_route(g, Route{1, {1, 7}}), InputError);
  EXPECT_THROW(validate_route(g, Route{1, {1}}), InputError);
}

}  // namespace
}  // namespace rh
