#include "rh/rh_index.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "rh/io.hpp"
#include "test_support.hpp"

namespace rh {
namespace {

using test::edges;

HotspotCatalog mine_at(const RouteStore& store, std::size_t min_sup) {
  MiningConfig cfg;
  cfg.min_sup = min_sup;
  return mine(store, cfg);
}

RHIndex rebuild(const LabeledGraph& g, const RouteSet& d, std::size_t min_sup) {
  RouteStore store(g, d);
  return RHIndex::build(store, mine_at(store, min_sup), min_sup);
}

class FixtureIndex : public ::testing::Test {
 protected:
  Instance inst = make_fixture();
  RouteStore store{inst.graph, inst.routes};
  HotspotCatalog cat = mine_at(store, 3);
  RHIndex idx = RHIndex::build(store, cat, 3);
  Pattern p(const char* text) { return test::pat(inst.graph, text); }
};

TEST_F(FixtureIndex, PsMsNode) {
  const auto* n = idx.find(p("PS,MS"));
  ASSERT_NE(n, nullptr);
  EXPECT_EQ(n->depth, 2u);
  EXPECT_EQ(n->tids, (std::vector<RouteId>{3, 4, 5, 6, 7, 8}));
  std::vector<EdgeKey> heavy;
  for (const auto& we : n->edges) {
    if (we.weight == 3) heavy.push_back(we.edge);
  }
  EXPECT_EQ(heavy, edges({{4, 6}, {4, 7}, {4, 9}, {6, 7}, {7, 9}}));
}

TEST_F(FixtureIndex, QueryAtThree) {
  auto ans = idx.query(p("PS,MS"), 3);
  ASSERT_EQ(ans.size(), 1u);
  EXPECT_EQ(ans[0], edges({{4, 6}, {4, 7}, {4, 9}, {6, 7}, {7, 9}}));
  EXPECT_TRUE(idx.query(p("PS,MS"), 4).empty());
  EXPECT_TRUE(idx.query(p("WS,DB"), 2).empty());
  EXPECT_THROW(idx.query(p("PS,MS"), 1), std::invalid_argument);
}

TEST_F(FixtureIndex, VerboseQueryRecoversCoveringRoutes) {
  auto v = idx.query_verbose(p("PS,MS"), 3, store);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].covering_tids(), (std::vector<RouteId>{5, 6, 7, 8}));
  EXPECT_EQ(v[0], cat.find(p("PS,MS"), 3)->front());
}

TEST_F(FixtureIndex, Shape) {
  // root, four labels, four patterns
  EXPECT_EQ(idx.node_count(), 9u);
  EXPECT_EQ(idx.pattern_count(), 4u);
  const auto& root = idx.nodes()[0];
  EXPECT_FALSE(root.item.has_value());
  EXPECT_EQ(root.children.size(), inst.graph.label_names().size());
  for (const auto& [l, child] : root.children) {
    EXPECT_TRUE(idx.nodes()[child].edges.empty());
    EXPECT_EQ(idx.nodes()[child].tids.size(), pattern_support(inst.routes, Pattern{{l}}, inst.graph));
  }
}

TEST_F(FixtureIndex, EmptyCatalogKeepsLabelSkeleton) {
  auto empty = RHIndex::build(store, HotspotCatalog{}, 3);
  EXPECT_EQ(empty.node_count(), 1 + inst.graph.label_names().size());
  EXPECT_EQ(empty.pattern_count(), 0u);
  auto nrh = NRHIndex::build(HotspotCatalog{});
  EXPECT_TRUE(nrh.query(p("PS,MS"), 3).empty());
}

TEST_F(FixtureIndex, SaveLoadIsByteStable) {
  auto text = idx.to_string();
  EXPECT_TRUE(text.starts_with("RHIDX v1 min_sup=3\n0\t-1\t\t\t\n"));
  std::istringstream in(text);
  auto back = RHIndex::load(in);
  EXPECT_EQ(back, idx);
  EXPECT_EQ(back.to_string(), text);
}

TEST_F(FixtureIndex, LoadRejectsMalformed) {
  auto bad = [](const std::string& s) {
    std::istringstream in(s);
    return RHIndex::load(in);
  };
  EXPECT_THROW(bad(""), InputError);
  EXPECT_THROW(bad("RHIDX v2 min_sup=3\n"), InputError);
  EXPECT_THROW(bad("RHIDX v1 min_sup=3\n0\t-1\t\t\t\n1\t0\tPS\t1\n"), InputError);
  EXPECT_THROW(bad("RHIDX v1 min_sup=3\n0\t-1\t\t\t\n1\t5\tPS\t\t\n"), InputError);
  EXPECT_THROW(bad("RHIDX v1 min_sup=3\n0\t-1\t\t\t\n1\t0\tPS\t\t\n2\t1\tZZ\t\t1-2:2\n"), InputError);
  EXPECT_THROW(bad("RHIDX v1 min_sup=3\n0\t-1\t\t\t\n1\t0\tPS\t\t1-2\n"), InputError);
}

TEST_F(FixtureIndex, NrhMatches) {
  auto nrh = NRHIndex::build(cat);
  EXPECT_EQ(nrh.rows().size(), cat.hotspot_count());
  for (const auto& [key, list] : cat.entries()) EXPECT_EQ(nrh.query(key.first, key.second), idx.query(key.first, key.second));
}

TEST_F(FixtureIndex, InsertNothing) {
  auto up = insert_routes(idx, RouteSet{}, inst.graph, inst.routes, MiningConfig{});
  EXPECT_EQ(up.index, idx);
  EXPECT_EQ(up.stats.added + up.stats.updated + up.stats.removed, 0u);
}

TEST_F(FixtureIndex, DeleteAllLeavesSkeleton) {
  std::vector<RouteId> all;
  for (const auto& [tid, r] : inst.routes) all.push_back(tid);
  auto up = delete_routes(idx, all, inst.graph, inst.routes, MiningConfig{});
  EXPECT_EQ(up.index.node_count(), 1 + inst.graph.label_names().size());
  EXPECT_EQ(up.stats.removed, 4u);
  EXPECT_TRUE(up.routes.empty());
  for (std::size_t i = 1; i < up.index.node_count(); ++i) EXPECT_TRUE(up.index.nodes()[i].tids.empty());
}

TEST_F(FixtureIndex, DeleteThenReinsertIsIdentity) {
  RouteSet gone;
  gone.insert(inst.routes.at(6));
  gone.insert(inst.routes.at(7));
  auto down = delete_routes(idx, {6, 7}, inst.graph, inst.routes, MiningConfig{});
  EXPECT_EQ(down.index, rebuild(inst.graph, down.routes, 3));
  auto back = insert_routes(down.index, gone, inst.graph, down.routes, MiningConfig{});
  EXPECT_EQ(back.index, idx);
  EXPECT_EQ(back.routes, inst.routes);
}

TEST_F(FixtureIndex, UpdateErrors) {
  RouteSet dup;
  dup.insert(inst.routes.at(1));
  EXPECT_THROW(insert_routes(idx, dup, inst.graph, inst.routes, MiningConfig{}), InputError);
  EXPECT_THROW(delete_routes(idx, {77}, inst.graph, inst.routes, MiningConfig{}), InputError);
  RouteSet bad;
  bad.insert(Route{50, {1, 9}});
  EXPECT_THROW(insert_routes(idx, bad, inst.graph, inst.routes, MiningConfig{}), InputError);
}

TEST(IndexUpdate, DuplicateRouteAtMinSupTwo) {
  auto inst = make_fixture();
  auto idx = rebuild(inst.graph, inst.routes, 2);
  RouteSet copy;
  copy.insert(Route{100, inst.routes.at(1).walk});
  auto up = insert_routes(idx, copy, inst.graph, inst.routes, MiningConfig{});
  EXPECT_EQ(up.index, rebuild(inst.graph, up.routes, 2));
  EXPECT_GT(up.stats.added + up.stats.updated, 0u);
}

class RandomIndex : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(RandomIndex, RoundTripAgainstCatalog) {
  auto inst = test::medium_instance(GetParam());
  RouteStore store(inst.graph, inst.routes);
  auto cat = mine_at(store, 3);
  auto idx = RHIndex::build(store, cat, 3);
  auto nrh = NRHIndex::build(cat);
  EXPECT_EQ(idx.pattern_count(), cat.pattern_count());
  for (const auto& [key, list] : cat.entries()) {
    const auto& [p, k] = key;
    std::vector<EdgeSet> expect;
    for (const auto& h : list) expect.push_back(h.edges);
    auto got = idx.query(p, k);
    std::sort(got.begin(), got.end());
    std::sort(expect.begin(), expect.end());
    EXPECT_EQ(got, expect);
    EXPECT_EQ(idx.query(p, k), nrh.query(p, k));
    EXPECT_EQ(idx.query_verbose(p, k, store), list);
  }
  // weight law and beyond-max queries
  for (std::size_t i = 1; i < idx.node_count(); ++i) {
    const auto& n = idx.nodes()[i];
    if (n.depth < 2) continue;
    std::uint32_t top = 0;
    for (const auto& we : n.edges) top = std::max(top, we.weight);
    EXPECT_GE(top, 2u);
    // the prefix property: parent is a pattern with hotspots or a label node
    EXPECT_TRUE(idx.nodes()[n.parent].depth == 1 || !idx.nodes()[n.parent].edges.empty());
  }
  std::istringstream in(idx.to_string());
  EXPECT_EQ(RHIndex::load(in).to_string(), idx.to_string());
  // one weighted edge per (pattern, edge) versus one row entry per (pattern, k, edge)
  std::size_t weighted = 0, rows = 0;
  for (const auto& n : idx.nodes()) weighted += n.edges.size();
  for (const auto& r : nrh.rows()) rows += r.edges.size();
  EXPECT_LE(weighted, rows);
}

TEST_P(RandomIndex, IncrementalEqualsRebuild) {
  auto inst = test::medium_instance(GetParam());
  test::Rng rng(GetParam() * 7919);
  RouteSet current;
  std::vector<Route> pool;
  for (const auto& [tid, r] : inst.routes) {
    if (test::pick(rng, 2)) {
      current.insert(r);
    } else {
      pool.push_back(r);
    }
  }
  auto idx = rebuild(inst.graph, current, 3);
  for (int step = 0; step < 6; ++step) {
    IndexUpdate up;
    if (test::pick(rng, 2) && !pool.empty()) {
      RouteSet batch;
      std::size_t n = 1 + test::pick(rng, std::min<std::size_t>(pool.size(), 25));
      for (std::size_t i = 0; i < n; ++i) {
        batch.insert(pool.back());
        pool.pop_back();
      }
      up = insert_routes(idx, batch, inst.graph, current, MiningConfig{});
    } else {
      std::vector<RouteId> tids;
      for (const auto& [tid, r] : current) {
        if (test::pick(rng, 8) == 0) tids.push_back(tid);
      }
      for (auto t : tids) pool.push_back(current.at(t));
      up = delete_routes(idx, tids, inst.graph, current, MiningConfig{});
    }
    current = up.routes;
    idx = up.index;
    EXPECT_EQ(idx.to_string(), rebuild(inst.graph, current, 3).to_string()) << "step " << step;
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomIndex, ::testing::Range<std::uint64_t>(1, 7));

// Hotspots that persist over many k are where the table layout pays for
// repeating edge sets; on a complete graph that is nearly every hotspot.
class DenseIndexMemory : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(DenseIndexMemory, TableLargerThanTree) {
  GeneratorConfig c;
  c.seed = GetParam();
  c.vertices = 30;
  c.edges = 435;
  c.alphabet = 5;
  c.routes = 400;
  c.max_route_len = 6;
  auto inst = generate_instance(c);
  RouteStore store(inst.graph, inst.routes);
  for (std::size_t ms : {2, 3}) {
    auto cat = mine_at(store, ms);
    auto idx = RHIndex::build(store, cat, ms);
    EXPECT_GT(NRHIndex::build(cat).memory_bytes(), idx.memory_bytes()) << "min_sup " << ms;
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, DenseIndexMemory, ::testing::Range<std::uint64_t>(1, 5));

}  // namespace
}  // namespace rh
