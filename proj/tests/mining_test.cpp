#include "rh/mining.hpp"

#include <gtest/gtest.h>

#include "rh/io.hpp"
#include "rh/oracle.hpp"
#include "test_support.hpp"

namespace rh {
namespace {

using test::edges;

constexpr Engine kAllEngines[] = {Engine::kGreedy, Engine::kGreedyPatternPrune, Engine::kGreedyHotspotPrune,
                                  Engine::kFast, Engine::kParallelFast};

HotspotCatalog run(const RouteStore& store, std::size_t min_sup, Engine e, unsigned threads = 4) {
  MiningConfig cfg;
  cfg.min_sup = min_sup;
  cfg.engine = e;
  cfg.threads = threads;
  return mine(store, cfg);
}

class FixtureMining : public ::testing::Test {
 protected:
  Instance inst = make_fixture();
  RouteStore store{inst.graph, inst.routes};
  Pattern p(const char* text) { return test::pat(inst.graph, text); }
};

TEST_F(FixtureMining, PsMsAtThree) {
  auto hs = detect_for(store, p("PS,MS"), 3, 3);
  ASSERT_EQ(hs.size(), 1u);
  EXPECT_EQ(hs[0].edges, edges({{4, 6}, {4, 7}, {4, 9}, {6, 7}, {7, 9}}));
  EXPECT_EQ(hs[0].covering, (std::vector<Subroute>{{5, 0, 2}, {6, 0, 2}, {7, 0, 3}, {8, 0, 1}}));
  EXPECT_EQ(hs[0].covering_tids(), (std::vector<RouteId>{5, 6, 7, 8}));
}

TEST_F(FixtureMining, PsMsAtFourIsEmpty) { EXPECT_TRUE(detect_for(store, p("PS,MS"), 4, 3).empty()); }

TEST_F(FixtureMining, PsMsAtTwoSpansItsRoutes) {
  auto hs = detect_for(store, p("PS,MS"), 2, 3);
  ASSERT_EQ(hs.size(), 1u);
  EXPECT_EQ(hs[0].covering_tids(), (std::vector<RouteId>{3, 4, 5, 6, 7, 8}));
  RouteSet dp;
  for (RouteId t = 3; t <= 8; ++t) dp.insert(inst.routes.at(t));
  EXPECT_EQ(hs[0].edges, induce_from_routes(dp));
}

TEST_F(FixtureMining, MsDbAtThree) {
  auto hs = detect_for(store, p("MS,DB"), 3, 3);
  ASSERT_EQ(hs.size(), 1u);
  EXPECT_EQ(hs[0].edges, edges({{4, 7}, {4, 9}, {7, 9}}));
  EXPECT_EQ(hs[0].covering_tids(), (std::vector<RouteId>{3, 6, 7}));
}

TEST_F(FixtureMining, ScannerStopsBeforeFive) {
  PatternScanner scanner(store, p("PS,MS"), 3);
  EXPECT_EQ(scanner.detect(2).size(), 1u);
  EXPECT_EQ(scanner.detect(3).size(), 1u);
  EXPECT_TRUE(scanner.detect(4).empty());
  EXPECT_TRUE(scanner.exhausted());
}

TEST_F(FixtureMining, ExplicitFragmentSet) {
  std::vector<Subroute> dp{{6, 0, 2}, {7, 0, 3}, {8, 0, 1}, {5, 0, 2}};
  auto hs = detect_for(store, p("PS,MS"), 3, dp, 3);
  ASSERT_EQ(hs.size(), 1u);
  EXPECT_EQ(hs[0].edges.size(), 5u);
  EXPECT_THROW(detect_for(store, p("PS,MS"), 3, {{42, 0, 1}}, 1), InputError);
  EXPECT_THROW(detect_for(store, p("PS,MS"), 3, {{7, 2, 9}}, 1), InputError);
}

TEST_F(FixtureMining, NoFrequentWsDbSeed) {
  auto pairs = frequent_pairs(store, 3);
  EXPECT_EQ(std::find(pairs.begin(), pairs.end(), p("WS,DB")), pairs.end());
  auto cat = run(store, 3, Engine::kFast);
  for (const auto& q : cat.patterns()) EXPECT_EQ(std::count(q.items.begin(), q.items.end(), *inst.graph.find_label("WS")), 0);
}

TEST_F(FixtureMining, EnginesAgree) {
  auto ref = run(store, 3, Engine::kGreedy);
  EXPECT_EQ(ref.pattern_count(), 4u);
  EXPECT_EQ(ref.hotspot_count(), 6u);
  for (auto e : kAllEngines) EXPECT_EQ(run(store, 3, e), ref) << engine_name(e);
}

TEST_F(FixtureMining, ExcessiveMinSupGivesEmptyCatalog) {
  for (auto e : kAllEngines) {
    auto c = run(store, 1'000'000'000, e);
    EXPECT_TRUE(c.empty());
    EXPECT_EQ(c.pattern_count(), 0u);
    EXPECT_EQ(c.hotspot_count(), 0u);
  }
}

TEST(DetectFor, PathAtTwo) {
  auto g = test::graph_of(3, edges({{1, 2}, {2, 3}}), {"a", "b", "c"});
  RouteSet d({Route{1, {1, 2, 3}}, Route{2, {1, 2, 3}}, Route{3, {3, 2, 1}}, Route{4, {1, 2}}});
  RouteStore store(g, d);
  auto hs = detect_for(store, Pattern{{0, 2}}, 2, 2);
  ASSERT_EQ(hs.size(), 1u);
  EXPECT_EQ(hs[0].edges, edges({{1, 2}, {2, 3}}));
  EXPECT_EQ(hs[0].covering_tids(), (std::vector<RouteId>{1, 2}));
  EXPECT_TRUE(detect_for(store, Pattern{{0, 2}}, 3, 2).empty());
}

TEST(DetectFor, FragmentsSplitAroundRemovedEdges) {
  // two triangles joined by a bridge 3-4; routes cross the bridge
  auto g = test::graph_of(6, edges({{1, 2}, {2, 3}, {1, 3}, {3, 4}, {4, 5}, {5, 6}, {4, 6}}),
                          {"a", "a", "b", "b", "a", "a"});
  RouteSet d({Route{1, {1, 2, 3, 4, 5, 6}}, Route{2, {2, 1, 3, 4, 6, 5}}, Route{3, {1, 3, 2, 1}}, Route{4, {4, 5, 6, 4}}});
  RouteStore store(g, d);
  auto hs = detect_for(store, Pattern{{0, 0}}, 3, 2);
  // the bridge peels away; each triangle keeps fragments labelled a..a
  ASSERT_EQ(hs.size(), 2u);
  EXPECT_EQ(hs[0].edges, edges({{1, 2}, {2, 3}, {1, 3}}));
  EXPECT_EQ(hs[1].edges, edges({{4, 5}, {5, 6}, {4, 6}}));
  for (const auto& h : hs) EXPECT_TRUE(verify_hotspot(h, g, d, 2).passed());
}

TEST(Precision, Arithmetic) {
  auto inst = make_fixture();
  RouteStore store(inst.graph, inst.routes);
  auto ref = run(store, 3, Engine::kGreedy);
  auto same = precision_score(ref, ref);
  ASSERT_TRUE(same);
  EXPECT_DOUBLE_EQ(same->value(), 1.0);

  // drop one of four hotspots
  HotspotCatalog four, three;
  std::vector<RouteHotspot> all;
  for (const auto& [key, list] : ref.entries()) all.insert(all.end(), list.begin(), list.end());
  all.resize(4);
  four.add(all);
  all.pop_back();
  three.add(all);
  auto ps = precision_score(four, three);
  ASSERT_TRUE(ps);
  EXPECT_DOUBLE_EQ(ps->value(), 0.75);

  EXPECT_FALSE(precision_score(HotspotCatalog{}, four).has_value());
  EXPECT_DOUBLE_EQ(precision_score(HotspotCatalog{}, HotspotCatalog{})->value(), 1.0);
}

TEST(MiningConfig, Validation) {
  MiningConfig cfg;
  cfg.min_sup = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.min_sup = 1;
  cfg.threads = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_EQ(parse_engine("greedy+hotspotprune"), Engine::kGreedyHotspotPrune);
  EXPECT_FALSE(parse_engine("turbo"));
}

TEST(ResourceGuard, TripsOnTinyCap) {
  auto inst = test::medium_instance(3);
  RouteStore store(inst.graph, inst.routes);
  for (auto e : kAllEngines) {
    MiningConfig cfg;
    cfg.min_sup = 2;
    cfg.engine = e;
    cfg.threads = 2;
    cfg.max_patterns = 2;
    EXPECT_THROW(mine(store, cfg), ResourceLimitError) << engine_name(e);
  }
}

// --- properties over random instances ---------------------------------------

class RandomMining : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(RandomMining, EnginesAreSetIdentical) {
  auto inst = test::medium_instance(GetParam());
  RouteStore store(inst.graph, inst.routes);
  for (std::size_t ms : {2, 5}) {
    auto ref = run(store, ms, Engine::kGreedy);
    for (auto e : kAllEngines) {
      auto c = run(store, ms, e);
      EXPECT_EQ(identities(c), identities(ref)) << engine_name(e);
      EXPECT_EQ(c, ref) << engine_name(e);
      EXPECT_DOUBLE_EQ(precision_score(ref, c)->value(), 1.0);
    }
  }
}

TEST_P(RandomMining, AntiMonotonicity) {
  auto inst = test::medium_instance(GetParam());
  RouteStore store(inst.graph, inst.routes);
  auto cat = run(store, 3, Engine::kFast);
  for (const auto& [key, list] : cat.entries()) {
    const auto& [p, k] = key;
    ASSERT_FALSE(list.empty());
    // every length >= 2 subsequence made by deleting one item has a hotspot at k
    if (p.size() > 2) {
      for (std::size_t i = 0; i < p.size(); ++i) {
        Pattern sub = p;
        sub.items.erase(sub.items.begin() + static_cast<long>(i));
        EXPECT_NE(cat.find(sub, k), nullptr);
      }
    }
    if (k > 2) {
      EXPECT_NE(cat.find(p, k - 1), nullptr);
    }
  }
}

TEST_P(RandomMining, HotspotEdgesShrinkWithK) {
  auto inst = test::medium_instance(GetParam());
  RouteStore store(inst.graph, inst.routes);
  auto cat = run(store, 3, Engine::kFast);
  std::map<std::pair<Pattern, std::uint32_t>, EdgeSet> unions;
  for (const auto& [key, list] : cat.entries()) {
    std::vector<EdgeKey> all;
    for (const auto& h : list) all.insert(all.end(), h.edges.begin(), h.edges.end());
    unions[key] = make_edge_set(all);
  }
  for (const auto& [key, u] : unions) {
    auto lower = unions.find({key.first, key.second - 1});
    if (key.second > 2) {
      ASSERT_NE(lower, unions.end());
      EXPECT_TRUE(is_subset(u, lower->second));
    }
  }
}

TEST_P(RandomMining, EveryHotspotMeetsTheDefinition) {
  auto inst = test::medium_instance(GetParam());
  RouteStore store(inst.graph, inst.routes);
  auto cat = run(store, 3, Engine::kFast);
  for (const auto& [key, list] : cat.entries()) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      auto c = verify_hotspot(list[i], inst.graph, inst.routes, 3, 0);
      EXPECT_TRUE(c.passed()) << c.first_failure();
      // at any scale: no hotspot of the same (p, k) contains another
      for (std::size_t j = 0; j < list.size(); ++j) {
        if (i != j) {
          EXPECT_FALSE(is_subset(list[i].edges, list[j].edges));
        }
      }
    }
  }
}

TEST_P(RandomMining, CountsShrinkAsMinSupGrows) {
  auto inst = test::medium_instance(GetParam());
  RouteStore store(inst.graph, inst.routes);
  std::size_t np = SIZE_MAX, nh = SIZE_MAX;
  for (std::size_t ms : {1, 2, 3, 5, 8, 13}) {
    auto c = run(store, ms, Engine::kFast);
    EXPECT_LE(c.pattern_count(), np);
    EXPECT_LE(c.hotspot_count(), nh);
    np = c.pattern_count();
    nh = c.hotspot_count();
  }
}

TEST_P(RandomMining, ParallelIsThreadCountInvariant) {
  auto inst = test::medium_instance(GetParam());
  RouteStore store(inst.graph, inst.routes);
  auto serial = catalog_to_string(run(store, 2, Engine::kFast), inst.graph, 2);
  for (unsigned t : {1u, 2u, 4u, 8u}) {
    EXPECT_EQ(catalog_to_string(run(store, 2, Engine::kParallelFast, t), inst.graph, 2), serial) << t;
  }
}

TEST_P(RandomMining, CapsApplyUniformly) {
  auto inst = test::medium_instance(GetParam());
  RouteStore store(inst.graph, inst.routes);
  MiningConfig cfg;
  cfg.min_sup = 2;
  cfg.max_k = 3;
  cfg.max_pattern_len = 3;
  cfg.threads = 3;
  std::optional<HotspotCatalog> ref;
  for (auto e : kAllEngines) {
    cfg.engine = e;
    auto c = mine(store, cfg);
    for (const auto& [key, list] : c.entries()) {
      EXPECT_LE(key.second, 3u);
      EXPECT_LE(key.first.size(), 3u);
    }
    if (!ref) {
      ref = c;
    } else {
      EXPECT_EQ(c, *ref) << engine_name(e);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomMining, ::testing::Range<std::uint64_t>(1, 9));

}  // namespace
}  // namespace rh
