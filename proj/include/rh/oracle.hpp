#pragma once

// Brute-force reference for hotspot mining. Deliberately slow and written
// without the miner's helpers (triangles, fragments, embeddings and
// connectivity are all recomputed naively here) so the two can be compared.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rh/graph.hpp"
#include "rh/mining.hpp"
#include "rh/routes.hpp"

namespace rh {

/// Largest candidate edge count swept exhaustively for maximality.
inline constexpr std::size_t kOracleEdgeBound = 12;
/// Cap on the number of label sequences oracle_patterns may enumerate.
inline constexpr std::size_t kOraclePatternBudget = 1'000'000;

namespace oracle {

using Edges = std::set<EdgeKey>;

// Embedding check by dynamic programming over prefixes.
inline bool embeds(const std::vector<LabelId>& s, const std::vector<LabelId>& p) {
  // ok[j]: p[0..j) embeds into the prefix of s read so far
  std::vector<char> ok(p.size() + 1, 0);
  ok[0] = 1;
  for (auto x : s) {
    for (std::size_t j = p.size(); j > 0; --j) {
      if (ok[j - 1] && p[j - 1] == x) ok[j] = 1;
    }
  }
  return ok[p.size()] != 0;
}

inline std::vector<LabelId> labels_of(const LabeledGraph& g, const Route& r, std::size_t a, std::size_t b) {
  std::vector<LabelId> out;
  for (std::size_t i = a; i <= b; ++i) out.push_back(g.label(r.walk[i]));
  return out;
}

inline bool slice_inside(const Route& r, std::size_t a, std::size_t b, const Edges& s) {
  for (std::size_t i = a; i < b; ++i) {
    if (!s.contains(EdgeKey(r.walk[i], r.walk[i + 1]))) return false;
  }
  return true;
}

// All inclusion-maximal in-set slices, by testing every slice.
inline std::vector<Subroute> max_slices(const Route& r, const Edges& s) {
  const std::size_t h = r.walk.size() - 1;
  std::vector<Subroute> out;
  for (std::size_t a = 0; a < h; ++a) {
    for (std::size_t b = a + 1; b <= h; ++b) {
      if (!slice_inside(r, a, b, s)) continue;
      bool left = a > 0 && slice_inside(r, a - 1, b, s);
      bool right = b < h && slice_inside(r, a, b + 1, s);
      if (!left && !right) out.push_back({r.tid, static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)});
    }
  }
  return out;
}

// Triangles containing e inside s, counted over every third vertex.
inline std::size_t triangles(const Edges& s, EdgeKey e, const std::set<VertexId>& verts) {
  std::size_t n = 0;
  for (auto w : verts) {
    if (w == e.u || w == e.v) continue;
    if (s.contains(EdgeKey(e.u, w)) && s.contains(EdgeKey(e.v, w))) ++n;
  }
  return n;
}

inline std::set<VertexId> vertices_of(const Edges& s) {
  std::set<VertexId> v;
  for (const auto& e : s) {
    v.insert(e.u);
    v.insert(e.v);
  }
  return v;
}

// Largest k for which s is a k-truss (min triangle count + 2).
inline std::uint32_t truss_level(const Edges& s) {
  auto verts = vertices_of(s);
  std::size_t low = std::numeric_limits<std::size_t>::max();
  for (const auto& e : s) low = std::min(low, triangles(s, e, verts));
  return static_cast<std::uint32_t>(low + 2);
}

inline bool connected(const Edges& s) {
  if (s.empty()) return false;
  std::set<VertexId> reached{s.begin()->u};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& e : s) {
      bool a = reached.contains(e.u), b = reached.contains(e.v);
      if (a != b) {
        reached.insert(a ? e.v : e.u);
        grew = true;
      }
    }
  }
  return reached == vertices_of(s);
}

struct Participation {
  std::vector<Subroute> covering;  // p-containing maximal fragments inside s
  std::size_t routes = 0;          // distinct parent routes among them
  bool covered = false;            // their edges span s
};

inline Participation participation(const LabeledGraph& g, const RouteSet& d, const Pattern& p, const Edges& s) {
  Participation out;
  Edges seen;
  for (const auto& [tid, r] : d) {
    bool any = false;
    for (const auto& t : max_slices(r, s)) {
      if (!embeds(labels_of(g, r, t.start, t.end), p.items)) continue;
      out.covering.push_back(t);
      any = true;
      for (auto i = t.start; i < t.end; ++i) seen.insert(EdgeKey(r.walk[i], r.walk[i + 1]));
    }
    if (any) ++out.routes;
  }
  out.covered = seen == s;
  std::sort(out.covering.begin(), out.covering.end());
  return out;
}

// Edges traversed by routes whose whole sequence contains p: no fragment
// can contain p unless its parent does.
inline std::vector<EdgeKey> candidate_edges(const LabeledGraph& g, const RouteSet& d, const Pattern& p) {
  Edges out;
  for (const auto& [tid, r] : d) {
    if (!embeds(labels_of(g, r, 0, r.walk.size() - 1), p.items)) continue;
    for (std::size_t i = 0; i + 1 < r.walk.size(); ++i) out.insert(EdgeKey(r.walk[i], r.walk[i + 1]));
  }
  return {out.begin(), out.end()};
}

inline Edges subset(const std::vector<EdgeKey>& pool, std::uint32_t mask) {
  Edges s;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (mask >> i & 1U) s.insert(pool[i]);
  }
  return s;
}

}  // namespace oracle

/// Every label sequence of length 2..(longest route) with support >=
/// min_sup, found by enumerating all sequences over the alphabet.
inline std::vector<Pattern> oracle_patterns(const RouteSet& d, const LabeledGraph& g, std::size_t min_sup) {
  const std::size_t a = g.label_names().size();
  std::size_t longest = 0;
  for (const auto& [tid, r] : d) longest = std::max(longest, r.walk.size());
  std::size_t budget = 0, power = a;
  for (std::size_t len = 2; len <= longest; ++len) {
    if (power > kOraclePatternBudget) throw ResourceLimitError("oracle pattern enumeration exceeds budget");
    power *= a;
    budget += power;
    if (budget > kOraclePatternBudget) throw ResourceLimitError("oracle pattern enumeration exceeds budget");
  }
  std::vector<std::vector<LabelId>> seqs;
  for (const auto& [tid, r] : d) seqs.push_back(oracle::labels_of(g, r, 0, r.walk.size() - 1));
  std::vector<Pattern> out;
  for (std::size_t len = 2; len <= longest && a > 0; ++len) {
    std::vector<LabelId> cur(len, 0);
    for (;;) {
      std::size_t sup = 0;
      for (const auto& s : seqs) sup += oracle::embeds(s, cur);
      if (sup >= min_sup) out.push_back(Pattern{cur});
      std::size_t i = len;
      while (i > 0 && cur[i - 1] + 1 == a) cur[--i] = 0;
      if (i == 0) break;
      ++cur[i - 1];
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Result of checking one hotspot against the definition. `maximality` is
/// only decided when the pattern's candidate edges fit the exhaustive bound.
struct HotspotChecklist {
  bool k_truss = false;
  bool connected = false;
  bool participation = false;
  bool coverage = false;
  std::optional<bool> maximality;

  bool passed() const {
    return k_truss && connected && participation && coverage && maximality.value_or(true);
  }
  std::string first_failure() const {
    if (!k_truss) return "k_truss";
    if (!connected) return "connected";
    if (!participation) return "participation";
    if (!coverage) return "coverage";
    if (maximality && !*maximality) return "maximality";
    return "";
  }
};

inline HotspotChecklist verify_hotspot(const RouteHotspot& h, const LabeledGraph& g, const RouteSet& d,
                                       std::size_t min_sup, std::size_t size_bound = kOracleEdgeBound) {
  HotspotChecklist c;
  oracle::Edges s(h.edges.begin(), h.edges.end());
  bool known = std::all_of(s.begin(), s.end(), [&](EdgeKey e) { return g.has_edge(e.u, e.v); });
  c.k_truss = known && !s.empty() && h.k >= 2 && oracle::truss_level(s) >= h.k;
  c.connected = oracle::connected(s);
  auto part = oracle::participation(g, d, h.pattern, s);
  auto listed = h.covering;
  std::sort(listed.begin(), listed.end());
  c.participation = part.routes >= min_sup && listed == part.covering;
  c.coverage = part.covered;

  auto pool = oracle::candidate_edges(g, d, h.pattern);
  if (pool.size() <= size_bound) {
    bool maximal = true;
    std::uint32_t own = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (s.contains(pool[i])) own |= 1U << i;
    }
    for (std::uint32_t m = 0; m < (1U << pool.size()) && maximal; ++m) {
      if ((m & own) != own || m == own) continue;
      auto big = oracle::subset(pool, m);
      if (!oracle::connected(big) || oracle::truss_level(big) < h.k) continue;
      auto bp = oracle::participation(g, d, h.pattern, big);
      if (bp.routes >= min_sup && bp.covered) maximal = false;
    }
    c.maximality = maximal;
  }
  return c;
}

/// Definitional catalog: for every frequent pattern, every connected edge
/// subset of its candidate edges is tested against conditions (1)-(3) and
/// only the inclusion-maximal ones are kept per k. Returns nullopt when some
/// pattern has more candidate edges than `size_bound`.
inline std::optional<HotspotCatalog> oracle_hotspots(const LabeledGraph& g, const RouteSet& d, std::size_t min_sup,
                                                     std::size_t size_bound = kOracleEdgeBound) {
  HotspotCatalog cat;
  for (const auto& p : oracle_patterns(d, g, min_sup)) {
    auto pool = oracle::candidate_edges(g, d, p);
    if (pool.size() > size_bound) return std::nullopt;
    struct Valid {
      oracle::Edges edges;
      std::uint32_t level;
      std::vector<Subroute> covering;
    };
    std::vector<Valid> valid;
    for (std::uint32_t m = 1; m < (1U << pool.size()); ++m) {
      auto s = oracle::subset(pool, m);
      if (!oracle::connected(s)) continue;
      auto part = oracle::participation(g, d, p, s);
      if (part.routes < min_sup || !part.covered) continue;
      auto level = oracle::truss_level(s);
      valid.push_back({std::move(s), level, std::move(part.covering)});
    }
    std::uint32_t top = 0;
    for (const auto& v : valid) top = std::max(top, v.level);
    for (std::uint32_t k = 2; k <= top; ++k) {
      std::vector<RouteHotspot> found;
      for (const auto& v : valid) {
        if (v.level < k) continue;
        bool dominated = std::any_of(valid.begin(), valid.end(), [&](const Valid& w) {
          return w.level >= k && w.edges.size() > v.edges.size() &&
                 std::includes(w.edges.begin(), w.edges.end(), v.edges.begin(), v.edges.end());
        });
        if (!dominated) found.push_back({p, k, EdgeSet(v.edges.begin(), v.edges.end()), v.covering});
      }
      cat.add(std::move(found));
    }
  }
  return cat;
}

/// Outcome of checking a candidate catalog: per-hotspot checklists plus,
/// within the size bound, a set comparison against oracle_hotspots.
struct OracleReport {
  struct Row {
    Pattern pattern;
    std::uint32_t k;
    EdgeSet edges;
    HotspotChecklist checks;
  };

  std::uint64_t digest = 0;
  bool exhaustive = false;
  std::optional<HotspotCatalog> catalog;
  std::vector<Row> rows;
  std::vector<std::string> mismatches;

  bool passed() const {
    return mismatches.empty() &&
           std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.checks.passed(); });
  }

  std::string to_csv(const LabeledGraph& g) const {
    auto tri = [](std::optional<bool> b) { return b ? (*b ? "1" : "0") : "na"; };
    std::ostringstream os;
    os << "pattern,k,edges,k_truss,connected,participation,coverage,maximality,result\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.pattern.size(); ++i) os << (i ? "|" : "") << g.label_name(r.pattern.items[i]);
      os << ',' << r.k << ',';
      for (std::size_t i = 0; i < r.edges.size(); ++i) os << (i ? ";" : "") << r.edges[i].u << '-' << r.edges[i].v;
      os << ',' << r.checks.k_truss << ',' << r.checks.connected << ',' << r.checks.participation << ','
         << r.checks.coverage << ',' << tri(r.checks.maximality) << ','
         << (r.checks.passed() ? "pass" : "fail:" + r.checks.first_failure()) << '\n';
    }
    for (const auto& m : mismatches) os << "# mismatch: " << m << '\n';
    os << "# digest=" << std::hex << digest << std::dec << " exhaustive=" << exhaustive
       << " result=" << (passed() ? "pass" : "fail") << '\n';
    return os.str();
  }
};

/// FNV-1a over a canonical text rendering of the instance.
inline std::uint64_t instance_digest(const LabeledGraph& g, const RouteSet& d) {
  std::ostringstream os;
  for (auto v : g.vertices()) os << v << ':' << g.label_name(g.label(v)) << '\n';
  for (const auto& e : g.edges()) os << e.u << '-' << e.v << '\n';
  for (const auto& [tid, r] : d) {
    os << tid << ':';
    for (auto v : r.walk) os << v << ',';
    os << '\n';
  }
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : os.str()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string describe(const LabeledGraph& g, const Pattern& p, std::uint32_t k, const EdgeSet& edges) {
  std::ostringstream os;
  os << '<';
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << g.label_name(p.items[i]);
  os << "> k=" << k << " {";
  for (std::size_t i = 0; i < edges.size(); ++i) os << (i ? " " : "") << edges[i].u << '-' << edges[i].v;
  os << '}';
  return os.str();
}

inline OracleReport run_oracle(const LabeledGraph& g, const RouteSet& d, std::size_t min_sup,
                               const HotspotCatalog& candidate, std::size_t size_bound = kOracleEdgeBound) {
  OracleReport rep;
  rep.digest = instance_digest(g, d);
  for (const auto& [key, list] : candidate.entries()) {
    for (const auto& h : list) rep.rows.push_back({h.pattern, h.k, h.edges, verify_hotspot(h, g, d, min_sup, size_bound)});
  }
  rep.catalog = oracle_hotspots(g, d, min_sup, size_bound);
  rep.exhaustive = rep.catalog.has_value();
  if (rep.catalog) {
    const auto& ref = *rep.catalog;
    for (const auto& [key, list] : ref.entries()) {
      const auto* got = candidate.find(key.first, key.second);
      for (const auto& h : list) {
        bool hit = got && std::find(got->begin(), got->end(), h) != got->end();
        if (!hit) rep.mismatches.push_back("missing " + describe(g, h.pattern, h.k, h.edges));
      }
    }
    for (const auto& [key, list] : candidate.entries()) {
      const auto* want = ref.find(key.first, key.second);
      for (const auto& h : list) {
        bool hit = want && std::find(want->begin(), want->end(), h) != want->end();
        if (!hit) rep.mismatches.push_back("unexpected " + describe(g, h.pattern, h.k, h.edges));
      }
    }
  }
  return rep;
}

}  // namespace rh
