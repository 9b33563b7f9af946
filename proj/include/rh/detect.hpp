#pragma once

// Hotspot detection for one pattern: interleaved truss and route peeling.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "rh/graph.hpp"
#include "rh/patterns.hpp"
#include "rh/routes.hpp"

namespace rh {

/// A connected k-truss covered by the pattern-containing maximal fragments
/// listed in `covering`.
struct RouteHotspot {
  Pattern pattern;
  std::uint32_t k = 2;
  EdgeSet edges;
  std::vector<Subroute> covering;

  std::vector<RouteId> covering_tids() const {
    std::vector<RouteId> tids;
    for (const auto& t : covering) tids.push_back(t.tid);
    tids.erase(std::unique(tids.begin(), tids.end()), tids.end());
    return tids;
  }

  friend bool operator==(const RouteHotspot&, const RouteHotspot&) = default;
};

/// Peeling state for a single pattern over its induced subgraph H_p.
///
/// detect(k) may be called with non-decreasing k; each call continues from
/// the remainder of the previous one, which is sound because the surviving
/// edge set for k+1 is contained in the one for k. Fragments are split when an
/// interior edge disappears and are kept only while they still contain the
/// pattern and reach trussness k on some edge. An edge that no live fragment
/// traverses is removed like an under-supported one.
///
/// min_sup counts distinct parent routes among a component's fragments.
class PatternScanner {
 public:
  /// D_p = all routes of the store that contain `p`.
  PatternScanner(const RouteStore& store, const Pattern& p, std::size_t min_sup)
      : PatternScanner(store, p, whole(store, store.supporting(p)), min_sup) {}

  /// D_p given explicitly as fragments of store entries (entry index, slice).
  struct Seed {
    std::uint32_t entry;
    std::uint32_t start;
    std::uint32_t end;
  };

  PatternScanner(const RouteStore& store, Pattern p, const std::vector<Seed>& seeds,
                 std::size_t min_sup)
      : store_(&store), pattern_(std::move(p)), min_sup_(min_sup) {
    std::vector<EdgeKey> keys;
    const auto& gedges = store.graph().edges();
    for (const auto& s : seeds) {
      const auto& en = store.entry(s.entry);
      if (!contains_pattern(std::span<const LabelId>(en.labels).subspan(s.start, s.end - s.start + 1),
                            std::span<const LabelId>(pattern_.items))) {
        continue;
      }
      seeds_.push_back(s);
      for (auto i = s.start; i < s.end; ++i) keys.push_back(gedges[en.step_edge[i]]);
    }
    sub_ = EdgeSubgraph(make_edge_set(std::move(keys)));
    const std::size_t m = sub_.edge_count();
    support_ = sub_.supports();
    alive_.assign(m, 1);
    queued_.assign(m, 0);
    cover_.assign(m, 0);
    occurrences_.resize(m);
    live_edges_ = m;

    route_live_.assign(store.size(), 0);
    for (std::uint32_t t = 0; t < seeds_.size(); ++t) {
      const auto& s = seeds_[t];
      const auto& en = store.entry(s.entry);
      Track tr;
      tr.entry = s.entry;
      tr.base = s.start;
      tr.step_edge.reserve(s.end - s.start);
      for (auto i = s.start; i < s.end; ++i) {
        auto le = *sub_.local_edge(gedges[en.step_edge[i]]);
        tr.step_edge.push_back(le);
        occurrences_[le].push_back({t, i - s.start});
      }
      tr.step_frag.assign(s.end - s.start, kNone);
      tracks_.push_back(std::move(tr));
    }
    for (std::uint32_t t = 0; t < tracks_.size(); ++t) {
      add_fragment(t, 0, static_cast<std::uint32_t>(tracks_[t].step_edge.size()));
    }
  }

  const Pattern& pattern() const { return pattern_; }
  std::size_t live_edge_count() const { return live_edges_; }
  std::size_t live_route_count() const { return live_routes_; }
  std::size_t initial_route_count() const { return seed_routes().size(); }

  /// Store entries of the routes D_p was built from.
  std::vector<std::uint32_t> seed_routes() const {
    std::vector<std::uint32_t> out;
    for (const auto& s : seeds_) out.push_back(s.entry);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// No further k can produce a hotspot.
  bool exhausted() const { return live_edges_ == 0 || live_routes_ < min_sup_; }

  /// Peels to the fixpoint for `k` and returns the qualifying components,
  /// ordered by smallest edge.
  std::vector<RouteHotspot> detect(std::uint32_t k) {
    if (k < 2) throw std::invalid_argument("detect: k must be >= 2");
    if (k < k_) throw std::logic_error("detect: k must be non-decreasing");
    k_ = k;
    if (k > 2 && tau_.empty() && sub_.edge_count() > 0) tau_ = sub_.trussness();

    if (k > 2) {
      for (std::uint32_t f = 0; f < frags_.size(); ++f) {
        if (frags_[f].live && max_tau(frags_[f]) < k) retire(f);
      }
      touched_.clear();
    }
    for (std::uint32_t e = 0; e < sub_.edge_count(); ++e) {
      if (alive_[e]) consider(e);
    }
    for (std::size_t head = 0; head < queue_.size(); ++head) remove_edge(queue_[head]);
    queue_.clear();
    return components();
  }

 private:
  static constexpr std::uint32_t kNone = 0xffffffffu;

  struct Track {
    std::uint32_t entry;
    std::uint32_t base;                   // route step index of track step 0
    std::vector<std::uint32_t> step_edge;  // local edge per track step
    std::vector<std::uint32_t> step_frag;  // live fragment per step or kNone
  };
  struct Fragment {
    std::uint32_t track;
    std::uint32_t start;  // track step range [start, end)
    std::uint32_t end;
    bool live;
  };
  struct Occurrence {
    std::uint32_t track;
    std::uint32_t step;
  };

  static std::vector<Seed> whole(const RouteStore& store, const std::vector<std::uint32_t>& entries) {
    std::vector<Seed> out;
    for (auto e : entries) {
      out.push_back({e, 0, static_cast<std::uint32_t>(store.entry(e).route->length())});
    }
    return out;
  }

  std::uint32_t max_tau(const Fragment& f) const {
    std::uint32_t best = 0;
    const auto& tr = tracks_[f.track];
    for (auto i = f.start; i < f.end; ++i) best = std::max(best, tau_[tr.step_edge[i]]);
    return best;
  }

  bool fragment_contains_pattern(std::uint32_t track, std::uint32_t start, std::uint32_t end) const {
    const auto& tr = tracks_[track];
    const auto& labels = store_->entry(tr.entry).labels;
    // steps [start, end) visit vertices base+start .. base+end
    return contains_pattern(
        std::span<const LabelId>(labels).subspan(tr.base + start, end - start + 1),
        std::span<const LabelId>(pattern_.items));
  }

  bool qualifies(std::uint32_t track, std::uint32_t start, std::uint32_t end) const {
    if (!fragment_contains_pattern(track, start, end)) return false;
    if (k_ <= 2 || tau_.empty()) return true;
    return max_tau(Fragment{track, start, end, true}) >= k_;
  }

  void add_fragment(std::uint32_t track, std::uint32_t start, std::uint32_t end) {
    if (!qualifies(track, start, end)) return;
    auto id = static_cast<std::uint32_t>(frags_.size());
    frags_.push_back({track, start, end, true});
    auto& tr = tracks_[track];
    for (auto i = start; i < end; ++i) {
      tr.step_frag[i] = id;
      ++cover_[tr.step_edge[i]];
    }
    if (route_live_[tr.entry]++ == 0) ++live_routes_;
  }

  void retire(std::uint32_t f) {
    auto& fr = frags_[f];
    fr.live = false;
    auto& tr = tracks_[fr.track];
    for (auto i = fr.start; i < fr.end; ++i) {
      tr.step_frag[i] = kNone;
      --cover_[tr.step_edge[i]];
      touched_.push_back(tr.step_edge[i]);
    }
    if (--route_live_[tr.entry] == 0) --live_routes_;
  }

  // Replace fragment f by its maximal runs over still-alive edges.
  void split(std::uint32_t f) {
    const Fragment fr = frags_[f];
    retire(f);
    const auto& tr = tracks_[fr.track];
    std::uint32_t i = fr.start;
    while (i < fr.end) {
      if (!alive_[tr.step_edge[i]]) {
        ++i;
        continue;
      }
      std::uint32_t j = i;
      while (j < fr.end && alive_[tr.step_edge[j]]) ++j;
      add_fragment(fr.track, i, j);
      i = j;
    }
  }

  void consider(std::uint32_t e) {
    if (queued_[e] || !alive_[e]) return;
    if (support_[e] + 2 < k_ || cover_[e] == 0) {
      queued_[e] = 1;
      queue_.push_back(e);
    }
  }

  void flush_touched() {
    for (auto e : touched_) consider(e);
    touched_.clear();
  }

  void remove_edge(std::uint32_t e) {
    if (!alive_[e]) return;
    alive_[e] = 0;
    --live_edges_;
    auto is_alive = [&](std::uint32_t x) { return alive_[x] != 0; };
    sub_.for_each_triangle(e, is_alive, [&](std::uint32_t x, std::uint32_t y) {
      --support_[x];
      --support_[y];
      consider(x);
      consider(y);
    });
    support_[e] = 0;
    for (const auto& occ : occurrences_[e]) {
      auto f = tracks_[occ.track].step_frag[occ.step];
      if (f != kNone) split(f);
    }
    flush_touched();
  }

  std::vector<RouteHotspot> components() {
    std::vector<std::uint32_t> parent(sub_.vertex_count());
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::uint32_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::uint32_t e = 0; e < sub_.edge_count(); ++e) {
      if (!alive_[e]) continue;
      auto [a, b] = sub_.ends(e);
      auto ra = find(a), rb = find(b);
      if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
    std::unordered_map<std::uint32_t, std::size_t> slot;
    std::vector<RouteHotspot> found;
    for (std::uint32_t e = 0; e < sub_.edge_count(); ++e) {
      if (!alive_[e]) continue;
      auto r = find(sub_.ends(e).first);
      auto [it, fresh] = slot.emplace(r, found.size());
      if (fresh) found.push_back(RouteHotspot{pattern_, k_, {}, {}});
      found[it->second].edges.push_back(sub_.edge(e));
    }
    for (const auto& fr : frags_) {
      if (!fr.live) continue;
      const auto& tr = tracks_[fr.track];
      auto r = find(sub_.ends(tr.step_edge[fr.start]).first);
      found[slot.at(r)].covering.push_back(
          {store_->entry(tr.entry).route->tid, tr.base + fr.start, tr.base + fr.end});
    }
    std::vector<RouteHotspot> out;
    for (auto& h : found) {
      std::sort(h.covering.begin(), h.covering.end());
      if (h.covering_tids().size() >= min_sup_) out.push_back(std::move(h));
    }
    // edges were appended in sorted order, so components come out ordered by min edge
    return out;
  }

  const RouteStore* store_;
  Pattern pattern_;
  std::size_t min_sup_;
  std::uint32_t k_ = 2;

  std::vector<Seed> seeds_;
  EdgeSubgraph sub_;
  std::vector<std::uint32_t> support_;
  std::vector<std::uint32_t> tau_;
  std::vector<char> alive_;
  std::vector<char> queued_;
  std::vector<std::uint32_t> cover_;
  std::vector<std::vector<Occurrence>> occurrences_;
  std::vector<Track> tracks_;
  std::vector<Fragment> frags_;
  std::vector<std::uint32_t> route_live_;
  std::vector<std::uint32_t> queue_;
  std::vector<std::uint32_t> touched_;
  std::size_t live_edges_ = 0;
  std::size_t live_routes_ = 0;
};

/// Hotspots for a fixed (p, k) from an explicit fragment set D_p.
inline std::vector<RouteHotspot> detect_for(const RouteStore& store, const Pattern& p,
                                            std::uint32_t k, const std::vector<Subroute>& d_p,
                                            std::size_t min_sup) {
  std::unordered_map<RouteId, std::uint32_t> entry_of;
  for (std::uint32_t i = 0; i < store.size(); ++i) entry_of.emplace(store.entry(i).route->tid, i);
  std::vector<PatternScanner::Seed> seeds;
  for (const auto& t : d_p) {
    auto it = entry_of.find(t.tid);
    if (it == entry_of.end()) throw InputError("fragment of unknown route " + std::to_string(t.tid));
    if (t.start >= t.end || t.end > store.entry(it->second).route->length()) {
      throw InputError("fragment slice out of range for route " + std::to_string(t.tid));
    }
    seeds.push_back({it->second, t.start, t.end});
  }
  PatternScanner scanner(store, p, seeds, min_sup);
  return scanner.detect(k);
}

/// Hotspots for a fixed (p, k) with D_p = every route containing p.
inline std::vector<RouteHotspot> detect_for(const RouteStore& store, const Pattern& p,
                                            std::uint32_t k, std::size_t min_sup) {
  PatternScanner scanner(store, p, min_sup);
  return scanner.detect(k);
}

}  // namespace rh
