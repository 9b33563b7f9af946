#pragma once

// Routes, induced label sequences and the pattern/coverage predicates.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "rh/graph.hpp"

namespace rh {

using RouteId = std::uint64_t;

/// Identified walk over graph edges. walk[i] -> walk[i+1] is step i.
struct Route {
  RouteId tid = 0;
  std::vector<VertexId> walk;

  std::size_t length() const { return walk.empty() ? 0 : walk.size() - 1; }
  EdgeKey step(std::size_t i) const { return EdgeKey(walk[i], walk[i + 1]); }

  friend bool operator==(const Route&, const Route&) = default;
};

/// Consecutive slice walk[start..end] (inclusive vertices) of a parent route,
/// i.e. steps start..end-1.
struct Subroute {
  RouteId tid = 0;
  std::uint32_t start = 0;
  std::uint32_t end = 0;

  std::uint32_t length() const { return end - start; }
  friend auto operator<=>(const Subroute&, const Subroute&) = default;
};

using Sequence = std::vector<LabelId>;

/// Label sequence of length >= 2; items may repeat.
struct Pattern {
  std::vector<LabelId> items;

  std::size_t size() const { return items.size(); }
  Pattern extended(LabelId l) const {
    Pattern p{items};
    p.items.push_back(l);
    return p;
  }
  friend auto operator<=>(const Pattern&, const Pattern&) = default;
};

inline void validate_route(const LabeledGraph& g, const Route& r) {
  if (r.walk.size() < 2) {
    throw InputError("route " + std::to_string(r.tid) + " has fewer than two vertices");
  }
  for (std::size_t i = 0; i < r.walk.size(); ++i) {
    if (!g.has_vertex(r.walk[i])) {
      throw InputError("route " + std::to_string(r.tid) + " visits unknown vertex " +
                       std::to_string(r.walk[i]));
    }
    if (i > 0 && !g.has_edge(r.walk[i - 1], r.walk[i])) {
      throw InputError("route " + std::to_string(r.tid) + " step " + std::to_string(i - 1) +
                       " (" + std::to_string(r.walk[i - 1]) + "," + std::to_string(r.walk[i]) +
                       ") is not an edge");
    }
  }
}

/// Routes keyed by tid, iterated in tid order.
class RouteSet {
 public:
  RouteSet() = default;
  explicit RouteSet(std::vector<Route> routes) {
    for (auto& r : routes) insert(std::move(r));
  }

  void insert(Route r) {
    if (r.walk.size() < 2) {
      throw InputError("route " + std::to_string(r.tid) + " has fewer than two vertices");
    }
    RouteId tid = r.tid;
    if (!routes_.emplace(tid, std::move(r)).second) {
      throw InputError("duplicate route id " + std::to_string(tid));
    }
  }
  void erase(RouteId tid) {
    if (routes_.erase(tid) == 0) throw InputError("unknown route id " + std::to_string(tid));
  }

  bool contains(RouteId tid) const { return routes_.contains(tid); }
  const Route& at(RouteId tid) const {
    auto it = routes_.find(tid);
    if (it == routes_.end()) throw InputError("unknown route id " + std::to_string(tid));
    return it->second;
  }
  std::size_t size() const { return routes_.size(); }
  bool empty() const { return routes_.empty(); }

  auto begin() const { return routes_.begin(); }
  auto end() const { return routes_.end(); }

  friend bool operator==(const RouteSet&, const RouteSet&) = default;

 private:
  std::map<RouteId, Route> routes_;
};

inline Sequence induced_sequence(const Route& r, const LabeledGraph& g) {
  Sequence s;
  s.reserve(r.walk.size());
  for (auto v : r.walk) s.push_back(g.label(v));
  return s;
}

inline Sequence induced_sequence(const Route& r, const Subroute& t, const LabeledGraph& g) {
  Sequence s;
  for (std::uint32_t i = t.start; i <= t.end; ++i) s.push_back(g.label(r.walk[i]));
  return s;
}

/// Order-preserving, not necessarily contiguous, embedding of `p` into `s`.
inline bool contains_pattern(std::span<const LabelId> s, std::span<const LabelId> p) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < s.size() && j < p.size(); ++i) {
    if (s[i] == p[j]) ++j;
  }
  return j == p.size();
}

inline bool contains_pattern(const Sequence& s, const Pattern& p) {
  return contains_pattern(std::span<const LabelId>(s), std::span<const LabelId>(p.items));
}

/// Number of distinct routes whose induced sequence contains `p`.
inline std::size_t pattern_support(const RouteSet& d, const Pattern& p, const LabeledGraph& g) {
  std::size_t n = 0;
  for (const auto& [tid, r] : d) {
    if (contains_pattern(induced_sequence(r, g), p)) ++n;
  }
  return n;
}

/// Distinct routes among a fragment collection that contain `p`.
inline std::size_t pattern_support(const std::vector<Subroute>& fragments, const RouteSet& d,
                                   const Pattern& p, const LabeledGraph& g) {
  std::set<RouteId> tids;
  for (const auto& t : fragments) {
    if (contains_pattern(induced_sequence(d.at(t.tid), t, g), p)) tids.insert(t.tid);
  }
  return tids.size();
}

/// Distinct edges traversed by the routes of `d`.
inline EdgeSet induce_from_routes(const RouteSet& d) {
  std::vector<EdgeKey> edges;
  for (const auto& [tid, r] : d) {
    for (std::size_t i = 0; i < r.length(); ++i) edges.push_back(r.step(i));
  }
  return make_edge_set(std::move(edges));
}

inline EdgeSet edges_of(const Route& r, const Subroute& t) {
  std::vector<EdgeKey> edges;
  for (std::uint32_t i = t.start; i < t.end; ++i) edges.push_back(r.step(i));
  return make_edge_set(std::move(edges));
}

inline bool route_contained(const Route& r, const EdgeSet& h) {
  for (std::size_t i = 0; i < r.length(); ++i) {
    if (!contains_edge(h, r.step(i))) return false;
  }
  return true;
}

inline bool route_contained(const Route& r, const Subroute& t, const EdgeSet& h) {
  for (std::uint32_t i = t.start; i < t.end; ++i) {
    if (!contains_edge(h, r.step(i))) return false;
  }
  return true;
}

/// True iff every edge of `h` is traversed by some member of `d`.
inline bool covers(const RouteSet& routes, const std::vector<Subroute>& d, const EdgeSet& h) {
  std::vector<EdgeKey> seen;
  for (const auto& t : d) {
    const Route& r = routes.at(t.tid);
    for (std::uint32_t i = t.start; i < t.end; ++i) seen.push_back(r.step(i));
  }
  return is_subset(h, make_edge_set(std::move(seen)));
}

inline std::vector<Subroute> whole_routes(const RouteSet& d) {
  std::vector<Subroute> out;
  for (const auto& [tid, r] : d) out.push_back({tid, 0, static_cast<std::uint32_t>(r.length())});
  return out;
}

/// Inclusion-maximal consecutive slices of `r` whose edges all lie in `h`.
inline std::vector<Subroute> maximal_fragments(const Route& r, const EdgeSet& h) {
  std::vector<Subroute> out;
  std::uint32_t i = 0;
  const auto n = static_cast<std::uint32_t>(r.length());
  while (i < n) {
    if (!contains_edge(h, r.step(i))) {
      ++i;
      continue;
    }
    std::uint32_t j = i;
    while (j < n && contains_edge(h, r.step(j))) ++j;
    out.push_back({r.tid, i, j});
    i = j;
  }
  return out;
}

/// Max edge trussness along the route; edges without an entry are ignored
/// and a route with no known edge scores 0.
inline std::uint32_t route_trussness(const Route& r,
                                     const std::map<EdgeKey, std::uint32_t>& trussness) {
  std::uint32_t best = 0;
  for (std::size_t i = 0; i < r.length(); ++i) {
    auto it = trussness.find(r.step(i));
    if (it != trussness.end()) best = std::max(best, it->second);
  }
  return best;
}

}  // namespace rh
