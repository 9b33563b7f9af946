#pragma once

// Benchmark harness: mine generated instances with several engines and time
// RH-Index against the flat baseline on the resulting catalog.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "rh/io.hpp"
#include "rh/mining.hpp"
#include "rh/rh_index.hpp"

namespace rh {

struct BenchSpec {
  std::vector<GeneratorConfig> instances;
  std::vector<std::size_t> min_sups{3};
  std::vector<Engine> engines{Engine::kFast, Engine::kGreedy};
  unsigned threads = 4;
  std::size_t repeat = 1;
};

struct BenchRow {
  std::size_t instance = 0;
  GeneratorConfig gen;
  std::size_t edges = 0;  // realised edge count
  std::size_t min_sup = 0;
  Engine engine = Engine::kFast;
  std::size_t np = 0;
  std::size_t nh = 0;
  double ps = 0;
  std::size_t index_bytes = 0;      // serialized RH-Index
  std::size_t rh_mem_bytes = 0;     // in-memory estimates
  std::size_t nrh_mem_bytes = 0;
  std::size_t queries = 0;
  // timing columns
  double time_ms = 0;
  double rh_query_us = 0;
  double nrh_query_us = 0;
};

namespace bench_detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Mean latency per call over all keys, best of `repeat` passes. `sink`
// keeps the answers observable so the loop is not optimised away.
template <class Query>
double mean_query_us(const std::vector<HotspotCatalog::Key>& keys, std::size_t repeat, Query&& q) {
  if (keys.empty()) return 0;
  double best = std::numeric_limits<double>::max();
  std::size_t sink = 0;
  for (std::size_t r = 0; r < std::max<std::size_t>(repeat, 1); ++r) {
    auto t0 = std::chrono::steady_clock::now();
    for (const auto& [p, k] : keys) sink += q(p, k).size();
    best = std::min(best, seconds_since(t0));
  }
  volatile std::size_t keep = sink;
  (void)keep;
  return best * 1e6 / static_cast<double>(keys.size());
}

}  // namespace bench_detail

inline std::vector<BenchRow> run_bench(const BenchSpec& spec) {
  std::vector<BenchRow> rows;
  for (std::size_t i = 0; i < spec.instances.size(); ++i) {
    auto inst = generate_instance(spec.instances[i]);
    RouteStore store(inst.graph, inst.routes);
    for (auto min_sup : spec.min_sups) {
      MiningConfig ref_cfg;
      ref_cfg.min_sup = min_sup;
      ref_cfg.engine = Engine::kGreedy;
      auto reference = mine(store, ref_cfg);
      for (auto engine : spec.engines) {
        MiningConfig cfg;
        cfg.min_sup = min_sup;
        cfg.engine = engine;
        cfg.threads = spec.threads;
        BenchRow row;
        row.instance = i;
        row.gen = spec.instances[i];
        row.edges = inst.graph.edge_count();
        row.min_sup = min_sup;
        row.engine = engine;
        HotspotCatalog cat;
        row.time_ms = std::numeric_limits<double>::max();
        for (std::size_t r = 0; r < std::max<std::size_t>(spec.repeat, 1); ++r) {
          auto t0 = std::chrono::steady_clock::now();
          cat = mine(store, cfg);
          row.time_ms = std::min(row.time_ms, bench_detail::seconds_since(t0) * 1e3);
        }
        row.np = cat.pattern_count();
        row.nh = cat.hotspot_count();
        auto ps = precision_score(reference, cat);
        row.ps = ps ? ps->value() : 0.0;

        auto idx = RHIndex::build(store, cat, min_sup);
        auto nrh = NRHIndex::build(cat);
        row.index_bytes = idx.to_string().size();
        row.rh_mem_bytes = idx.memory_bytes();
        row.nrh_mem_bytes = nrh.memory_bytes();
        std::vector<HotspotCatalog::Key> keys;
        for (const auto& [key, list] : cat.entries()) keys.push_back(key);
        row.queries = keys.size();
        row.rh_query_us = bench_detail::mean_query_us(
            keys, spec.repeat, [&](const Pattern& p, std::uint32_t k) { return idx.query(p, k); });
        row.nrh_query_us = bench_detail::mean_query_us(
            keys, spec.repeat, [&](const Pattern& p, std::uint32_t k) { return nrh.query(p, k); });
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

/// Columns after `queries` are timings; everything before is deterministic
/// for a fixed spec.
inline constexpr std::size_t kBenchTimingColumns = 3;

inline std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "instance,seed,vertices,edges,alphabet,routes,min_sup,engine,np,nh,ps,index_bytes,rh_mem_bytes,"
        "nrh_mem_bytes,queries,time_ms,rh_query_us,nrh_query_us\n";
  for (const auto& r : rows) {
    os << r.instance << ',' << r.gen.seed << ',' << r.gen.vertices << ',' << r.edges << ',' << r.gen.alphabet << ','
       << r.gen.routes << ',' << r.min_sup << ',' << engine_name(r.engine) << ',' << r.np << ',' << r.nh << ','
       << std::fixed << std::setprecision(4) << r.ps << ',' << r.index_bytes << ',' << r.rh_mem_bytes << ','
       << r.nrh_mem_bytes << ',' << r.queries << ',' << std::setprecision(3) << r.time_ms << ','
       << r.rh_query_us << ',' << r.nrh_query_us << '\n';
    os.unsetf(std::ios::floatfield);
  }
  return os.str();
}

}  // namespace rh
