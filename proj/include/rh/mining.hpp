#pragma once

// Hotspot enumeration engines and the hotspot catalog.

#include <algorithm>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "rh/detect.hpp"
#include "rh/graph.hpp"
#include "rh/patterns.hpp"
#include "rh/routes.hpp"

namespace rh {

enum class Engine {
  kGreedy,             // every frequent pattern, every k up to k_max
  kGreedyPatternPrune,  // pattern growth gated on hotspots at k=2
  kGreedyHotspotPrune,  // every frequent pattern, stop k at the first empty level
  kFast,               // both prunings with incremental peeling over k
  kParallelFast,
};

inline std::string_view engine_name(Engine e) {
  switch (e) {
    case Engine::kGreedy: return "greedy";
    case Engine::kGreedyPatternPrune: return "greedy+patternprune";
    case Engine::kGreedyHotspotPrune: return "greedy+hotspotprune";
    case Engine::kFast: return "fast";
    case Engine::kParallelFast: return "parallel-fast";
  }
  return "?";
}

inline std::optional<Engine> parse_engine(std::string_view s) {
  for (auto e : {Engine::kGreedy, Engine::kGreedyPatternPrune, Engine::kGreedyHotspotPrune,
                 Engine::kFast, Engine::kParallelFast}) {
    if (engine_name(e) == s) return e;
  }
  return std::nullopt;
}

struct MiningConfig {
  std::size_t min_sup = 1;
  std::optional<std::size_t> max_pattern_len;
  std::optional<std::uint32_t> max_k;
  Engine engine = Engine::kFast;
  unsigned threads = 1;
  // resource guard on the number of patterns an engine may examine
  std::size_t max_patterns = 2'000'000;

  void validate() const {
    if (min_sup < 1) throw std::invalid_argument("min_sup must be >= 1");
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
    if (max_pattern_len && *max_pattern_len < 2) throw std::invalid_argument("max_pattern_len must be >= 2");
    if (max_k && *max_k < 2) throw std::invalid_argument("max_k must be >= 2");
  }
};

/// Hotspots grouped by (pattern, k), iterated pattern-lexicographic then by k.
class HotspotCatalog {
 public:
  using Key = std::pair<Pattern, std::uint32_t>;

  void add(std::vector<RouteHotspot> hotspots) {
    std::set<std::vector<RouteHotspot>*> touched;
    for (auto& h : hotspots) {
      auto& list = entries_[Key{h.pattern, h.k}];
      list.push_back(std::move(h));
      touched.insert(&list);
    }
    for (auto* list : touched) {
      std::sort(list->begin(), list->end(),
                [](const RouteHotspot& a, const RouteHotspot& b) { return a.edges < b.edges; });
    }
  }

  const std::map<Key, std::vector<RouteHotspot>>& entries() const { return entries_; }

  const std::vector<RouteHotspot>* find(const Pattern& p, std::uint32_t k) const {
    auto it = entries_.find(Key{p, k});
    return it == entries_.end() ? nullptr : &it->second;
  }

  /// #NP: patterns that support at least one hotspot.
  std::size_t pattern_count() const {
    std::size_t n = 0;
    const Pattern* last = nullptr;
    for (const auto& [key, list] : entries_) {
      if (!last || *last != key.first) ++n;
      last = &key.first;
    }
    return n;
  }

  /// #NH
  std::size_t hotspot_count() const {
    std::size_t n = 0;
    for (const auto& [key, list] : entries_) n += list.size();
    return n;
  }

  std::vector<Pattern> patterns() const {
    std::vector<Pattern> out;
    for (const auto& [key, list] : entries_) {
      if (out.empty() || out.back() != key.first) out.push_back(key.first);
    }
    return out;
  }

  bool empty() const { return entries_.empty(); }

  friend bool operator==(const HotspotCatalog&, const HotspotCatalog&) = default;

 private:
  std::map<Key, std::vector<RouteHotspot>> entries_;
};

/// Identity used for catalog comparison: (pattern, k, canonical edge set).
using HotspotIdentity = std::tuple<Pattern, std::uint32_t, EdgeSet>;

inline std::set<HotspotIdentity> identities(const HotspotCatalog& c) {
  std::set<HotspotIdentity> out;
  for (const auto& [key, list] : c.entries()) {
    for (const auto& h : list) out.emplace(h.pattern, h.k, h.edges);
  }
  return out;
}

struct Precision {
  std::size_t matched = 0;
  std::size_t reference = 0;
  double value() const { return reference == 0 ? 1.0 : static_cast<double>(matched) / reference; }
};

/// PS = |C ∩ Ĉ| / |C| against reference C. Undefined (nullopt) when the
/// reference is empty but the candidate is not.
inline std::optional<Precision> precision_score(const HotspotCatalog& reference,
                                                const HotspotCatalog& candidate) {
  auto ref = identities(reference);
  auto cand = identities(candidate);
  if (ref.empty()) {
    if (cand.empty()) return Precision{0, 0};
    return std::nullopt;
  }
  Precision p{0, ref.size()};
  for (const auto& id : ref) p.matched += cand.count(id);
  return p;
}

namespace detail {

struct PatternResult {
  std::vector<RouteHotspot> hotspots;
  bool has_k2 = false;
  std::vector<std::uint32_t> routes;  // D_p as store entries
};

inline bool k_allowed(const MiningConfig& cfg, std::uint32_t k) { return !cfg.max_k || k <= *cfg.max_k; }

// Incremental scan over k for one pattern; stops once no edge survives or too
// few routes remain (no hotspot at k implies none at k+1).
inline PatternResult scan_incremental(const RouteStore& store, const Pattern& p, const MiningConfig& cfg) {
  PatternResult res;
  PatternScanner scanner(store, p, cfg.min_sup);
  res.routes = scanner.seed_routes();
  for (std::uint32_t k = 2; !scanner.exhausted() && k_allowed(cfg, k); ++k) {
    auto found = scanner.detect(k);
    if (k == 2) res.has_k2 = !found.empty();
    for (auto& h : found) res.hotspots.push_back(std::move(h));
  }
  return res;
}

// Fresh detection for every k in [2, k_max]; optionally stop at the first
// empty level.
inline PatternResult scan_fresh(const RouteStore& store, const Pattern& p, const MiningConfig& cfg,
                                std::uint32_t k_max, bool stop_on_empty) {
  PatternResult res;
  for (std::uint32_t k = 2; k <= k_max && k_allowed(cfg, k); ++k) {
    PatternScanner scanner(store, p, cfg.min_sup);
    if (k == 2) res.routes = scanner.seed_routes();
    auto found = scanner.detect(k);
    if (k == 2) res.has_k2 = !found.empty();
    bool empty = found.empty();
    for (auto& h : found) res.hotspots.push_back(std::move(h));
    if (empty && stop_on_empty) break;
  }
  return res;
}

inline bool may_grow(const MiningConfig& cfg, const Pattern& p) {
  return !cfg.max_pattern_len || p.size() < *cfg.max_pattern_len;
}

// Pattern-growth driver: seeds are the frequent 2-patterns; a pattern's
// extensions are explored only if it has a hotspot at k=2, which by the two
// anti-monotonicity properties is necessary for any hotspot of any extension.
template <class Scan>
HotspotCatalog grow_patterns(const RouteStore& store, const MiningConfig& cfg, Scan&& scan) {
  HotspotCatalog catalog;
  std::deque<Pattern> queue;
  for (auto& p : frequent_pairs(store, cfg.min_sup)) queue.push_back(std::move(p));
  std::size_t examined = 0;
  while (!queue.empty()) {
    Pattern p = std::move(queue.front());
    queue.pop_front();
    if (++examined > cfg.max_patterns) {
      throw ResourceLimitError("examined pattern count exceeds cap of " + std::to_string(cfg.max_patterns));
    }
    auto res = scan(p);
    catalog.add(std::move(res.hotspots));
    if (res.has_k2 && may_grow(cfg, p)) {
      for (auto& q : grow_candidates(store, p, res.routes, cfg.min_sup)) queue.push_back(std::move(q));
    }
  }
  return catalog;
}

inline std::uint32_t graph_k_max(const LabeledGraph& g) { return truss_decompose(g).k_max; }

}  // namespace detail

inline HotspotCatalog mine_greedy(const RouteStore& store, const MiningConfig& cfg) {
  cfg.validate();
  auto patterns = frequent_patterns(store, cfg.min_sup, cfg.max_pattern_len, cfg.max_patterns);
  const auto k_max = detail::graph_k_max(store.graph());
  HotspotCatalog catalog;
  for (const auto& p : patterns) catalog.add(detail::scan_fresh(store, p, cfg, k_max, false).hotspots);
  return catalog;
}

/// Pruned engines: fast, greedy+patternprune and greedy+hotspotprune.
/// parallel-fast falls through to the serial fast engine here.
inline HotspotCatalog mine_fast(const RouteStore& store, const MiningConfig& cfg) {
  cfg.validate();
  switch (cfg.engine) {
    case Engine::kGreedyHotspotPrune: {
      auto patterns = frequent_patterns(store, cfg.min_sup, cfg.max_pattern_len, cfg.max_patterns);
      const auto k_max = detail::graph_k_max(store.graph());
      HotspotCatalog catalog;
      for (const auto& p : patterns) catalog.add(detail::scan_fresh(store, p, cfg, k_max, true).hotspots);
      return catalog;
    }
    case Engine::kGreedyPatternPrune: {
      const auto k_max = detail::graph_k_max(store.graph());
      return detail::grow_patterns(store, cfg, [&](const Pattern& p) {
        return detail::scan_fresh(store, p, cfg, k_max, false);
      });
    }
    default:
      return detail::grow_patterns(store, cfg,
                                   [&](const Pattern& p) { return detail::scan_incremental(store, p, cfg); });
  }
}

/// The fast engine with patterns as independent work items on cfg.threads workers. A
/// worker that finishes a pattern enqueues its extensions; results are merged
/// into the (ordered) catalog after all workers join.
inline HotspotCatalog mine_parallel(const RouteStore& store, const MiningConfig& cfg) {
  cfg.validate();
  std::mutex mu;
  std::condition_variable cv;
  std::deque<Pattern> queue;
  for (auto& p : frequent_pairs(store, cfg.min_sup)) queue.push_back(std::move(p));
  std::size_t in_flight = 0;
  std::size_t examined = 0;
  bool failed = false;
  std::exception_ptr error;
  std::vector<RouteHotspot> results;

  auto worker = [&] {
    for (;;) {
      Pattern p;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return failed || !queue.empty() || in_flight == 0; });
        if (failed || queue.empty()) return;
        p = std::move(queue.front());
        queue.pop_front();
        ++in_flight;
        if (++examined > cfg.max_patterns) {
          failed = true;
          error = std::make_exception_ptr(
              ResourceLimitError("examined pattern count exceeds cap of " + std::to_string(cfg.max_patterns)));
          cv.notify_all();
          return;
        }
      }
      try {
        auto res = detail::scan_incremental(store, p, cfg);
        std::vector<Pattern> children;
        if (res.has_k2 && detail::may_grow(cfg, p)) children = grow_candidates(store, p, res.routes, cfg.min_sup);
        std::lock_guard lock(mu);
        for (auto& h : res.hotspots) results.push_back(std::move(h));
        for (auto& q : children) queue.push_back(std::move(q));
        --in_flight;
      } catch (...) {
        std::lock_guard lock(mu);
        failed = true;
        if (!error) error = std::current_exception();
      }
      cv.notify_all();
    }
  };

  std::vector<std::thread> pool;
  for (unsigned i = 0; i < cfg.threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  HotspotCatalog catalog;
  catalog.add(std::move(results));
  return catalog;
}

/// Dispatch on cfg.engine.
inline HotspotCatalog mine(const RouteStore& store, const MiningConfig& cfg) {
  switch (cfg.engine) {
    case Engine::kGreedy: return mine_greedy(store, cfg);
    case Engine::kParallelFast: return mine_parallel(store, cfg);
    default: return mine_fast(store, cfg);
  }
}

inline HotspotCatalog mine(const LabeledGraph& g, const RouteSet& d, const MiningConfig& cfg) {
  RouteStore store(g, d);
  return mine(store, cfg);
}

}  // namespace rh
