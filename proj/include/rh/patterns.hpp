#pragma once

// Route store shared by the miners, plus frequent sequential pattern mining
// by prefix projection.

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rh/graph.hpp"
#include "rh/routes.hpp"

namespace rh {

/// Thrown when an exponential enumeration exceeds its configured cap.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Read-only, validated view of a route set over a graph with per-step edge
/// indices and induced label sequences precomputed. Holds references: the
/// graph and route set must outlive it.
class RouteStore {
 public:
  struct Entry {
    const Route* route;
    Sequence labels;                      // one label per walk vertex
    std::vector<std::uint32_t> step_edge;  // global edge index per step
  };

  RouteStore(const LabeledGraph& g, const RouteSet& d) : graph_(&g), routes_(&d) {
    entries_.reserve(d.size());
    for (const auto& [tid, r] : d) {
      validate_route(g, r);
      Entry e{&r, induced_sequence(r, g), {}};
      e.step_edge.reserve(r.length());
      for (std::size_t i = 0; i < r.length(); ++i) e.step_edge.push_back(*g.edge_index(r.step(i)));
      entries_.push_back(std::move(e));
    }
  }

  const LabeledGraph& graph() const { return *graph_; }
  const RouteSet& routes() const { return *routes_; }
  const std::vector<Entry>& entries() const { return entries_; }
  const Entry& entry(std::size_t i) const { return entries_[i]; }
  std::size_t size() const { return entries_.size(); }

  /// Indices of routes whose induced sequence contains `p`.
  std::vector<std::uint32_t> supporting(const Pattern& p) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < entries_.size(); ++i) {
      if (contains_pattern(entries_[i].labels, p)) out.push_back(i);
    }
    return out;
  }

 private:
  const LabeledGraph* graph_;
  const RouteSet* routes_;
  std::vector<Entry> entries_;
};

namespace detail {

// Position just past the leftmost embedding of `p` in `s`, or npos.
inline std::size_t embedding_end(const Sequence& s, const std::vector<LabelId>& p) {
  std::size_t j = 0, i = 0;
  for (; i < s.size() && j < p.size(); ++i) {
    if (s[i] == p[j]) ++j;
  }
  return j == p.size() ? i : std::numeric_limits<std::size_t>::max();
}

// Labels occurring in the projected suffixes of at least min_sup routes.
inline std::vector<LabelId> frequent_extensions(const RouteStore& store,
                                                const std::vector<std::uint32_t>& routes,
                                                const std::vector<std::size_t>& suffix_start,
                                                std::size_t min_sup) {
  const std::size_t alphabet = store.graph().label_names().size();
  std::vector<std::size_t> count(alphabet, 0);
  std::vector<std::uint32_t> last_seen(alphabet, std::numeric_limits<std::uint32_t>::max());
  for (std::size_t r = 0; r < routes.size(); ++r) {
    const Sequence& s = store.entry(routes[r]).labels;
    for (std::size_t i = suffix_start[r]; i < s.size(); ++i) {
      if (last_seen[s[i]] != r) {
        last_seen[s[i]] = static_cast<std::uint32_t>(r);
        ++count[s[i]];
      }
    }
  }
  std::vector<LabelId> out;
  for (LabelId l = 0; l < alphabet; ++l) {
    if (count[l] >= min_sup) out.push_back(l);
  }
  return out;
}

}  // namespace detail

/// p + L for every label L found after the leftmost embedding of `p` in at
/// least min_sup of `routes` (which should be the routes containing `p`).
inline std::vector<Pattern> grow_candidates(const RouteStore& store, const Pattern& p,
                                            const std::vector<std::uint32_t>& routes,
                                            std::size_t min_sup) {
  std::vector<std::uint32_t> live;
  std::vector<std::size_t> starts;
  for (auto r : routes) {
    auto end = detail::embedding_end(store.entry(r).labels, p.items);
    if (end != std::numeric_limits<std::size_t>::max()) {
      live.push_back(r);
      starts.push_back(end);
    }
  }
  std::vector<Pattern> out;
  for (auto l : detail::frequent_extensions(store, live, starts, min_sup)) out.push_back(p.extended(l));
  return out;
}

/// Frequent length-2 patterns (the seeds of pattern growth).
inline std::vector<Pattern> frequent_pairs(const RouteStore& store, std::size_t min_sup) {
  std::vector<Pattern> out;
  for (LabelId l = 0; l < store.graph().label_names().size(); ++l) {
    Pattern single{{l}};
    auto routes = store.supporting(single);
    if (routes.size() < min_sup) continue;
    for (auto& q : grow_candidates(store, single, routes, min_sup)) out.push_back(std::move(q));
  }
  return out;
}

/// Every pattern of length 2..max_len with support >= min_sup, in
/// lexicographic order, mined by depth-first prefix projection.
inline std::vector<Pattern> frequent_patterns(const RouteStore& store, std::size_t min_sup,
                                              std::optional<std::size_t> max_len = std::nullopt,
                                              std::size_t max_count = std::numeric_limits<std::size_t>::max()) {
  std::vector<Pattern> out;
  struct Frame {
    Pattern prefix;
    std::vector<std::uint32_t> routes;
    std::vector<std::size_t> starts;
  };
  auto expand = [&](auto&& self, const Frame& f) -> void {
    if (max_len && f.prefix.size() >= *max_len) return;
    for (auto l : detail::frequent_extensions(store, f.routes, f.starts, min_sup)) {
      Frame child{f.prefix.extended(l), {}, {}};
      for (std::size_t r = 0; r < f.routes.size(); ++r) {
        const Sequence& s = store.entry(f.routes[r]).labels;
        for (std::size_t i = f.starts[r]; i < s.size(); ++i) {
          if (s[i] == l) {
            child.routes.push_back(f.routes[r]);
            child.starts.push_back(i + 1);
            break;
          }
        }
      }
      if (child.prefix.size() >= 2) {
        if (out.size() >= max_count) {
          throw ResourceLimitError("frequent pattern count exceeds cap of " + std::to_string(max_count));
        }
        out.push_back(child.prefix);
      }
      self(self, child);
    }
  };
  Frame root;
  for (std::uint32_t i = 0; i < store.size(); ++i) {
    root.routes.push_back(i);
    root.starts.push_back(0);
  }
  expand(expand, root);
  return out;
}

}  // namespace rh
