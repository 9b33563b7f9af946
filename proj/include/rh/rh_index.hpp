#pragma once

// RH-Index: pattern-growth tree over mined hotspots, plus the flat-table
// baseline (NRH-Index) it is measured against.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <deque>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rh/detect.hpp"
#include "rh/graph.hpp"
#include "rh/mining.hpp"
#include "rh/patterns.hpp"
#include "rh/routes.hpp"

namespace rh {

struct WeightedEdge {
  EdgeKey edge;
  std::uint32_t weight;  // largest k of a hotspot containing the edge
  friend auto operator<=>(const WeightedEdge&, const WeightedEdge&) = default;
};

struct UpdateStats {
  std::size_t added = 0;
  std::size_t updated = 0;
  std::size_t removed = 0;
};

class RHIndex {
 public:
  struct Node {
    std::optional<LabelId> item;  // empty for the root
    std::vector<RouteId> tids;
    std::vector<WeightedEdge> edges;
    std::map<LabelId, std::size_t> children;
    std::size_t parent = kNoParent;
    std::size_t depth = 0;

    friend bool operator==(const Node&, const Node&) = default;
  };

  static constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);

  RHIndex() { nodes_.push_back(Node{}); }

  /// Builds the tree from a complete catalog. Every label of the graph gets a
  /// depth-1 node (kept even without hotspots, so later updates have a place
  /// to attach); deeper nodes exist only for patterns with hotspots, with T =
  /// covering routes of the k=2 hotspots and E = edges weighted by the largest
  /// k at which they appear.
  static RHIndex build(const RouteStore& store, const HotspotCatalog& catalog, std::size_t min_sup) {
    std::map<Pattern, NodeData> data = label_nodes(store);
    for (auto& [p, nd] : catalog_nodes(catalog)) data[p] = std::move(nd);
    return from_patterns(store.graph().label_names(), min_sup, data);
  }

  std::size_t min_sup() const { return min_sup_; }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t node_count() const { return nodes_.size(); }
  /// Nodes at depth >= 2, i.e. indexed patterns.
  std::size_t pattern_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.depth >= 2; }));
  }

  std::optional<LabelId> find_label(std::string_view name) const {
    auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), name);
    if (it == alphabet_.end() || *it != name) return std::nullopt;
    return static_cast<LabelId>(it - alphabet_.begin());
  }

  /// Pattern from comma-separated label text; nullopt if a label is unknown.
  std::optional<Pattern> parse_pattern(std::string_view text) const {
    Pattern p;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto comma = text.find(',', pos);
      auto tok = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
      if (tok.empty()) throw InputError("malformed pattern '" + std::string(text) + "'");
      auto l = find_label(tok);
      if (!l) return std::nullopt;
      p.items.push_back(*l);
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    return p;
  }

  /// Walks the tree by the pattern's labels, one level at a time.
  const Node* find(const Pattern& p) const {
    const Node* n = &nodes_[0];
    for (auto l : p.items) {
      auto it = n->children.find(l);
      if (it == n->children.end()) return nullptr;
      n = &nodes_[it->second];
    }
    return n;
  }

  /// Hotspot edge sets for (p, k): the node's edges with weight >= k, split
  /// into connected components. Missing node or no edge -> empty answer.
  std::vector<EdgeSet> query(const Pattern& p, std::uint32_t k) const {
    if (p.size() < 2) throw std::invalid_argument("query: pattern length must be >= 2");
    if (k < 2) throw std::invalid_argument("query: k must be >= 2");
    const Node* n = find(p);
    if (!n) return {};
    EdgeSet kept;
    for (const auto& we : n->edges) {
      if (we.weight >= k) kept.push_back(we.edge);
    }
    return connected_components(kept);
  }

  /// query() plus the covering fragments, recomputed from the node's routes.
  std::vector<RouteHotspot> query_verbose(const Pattern& p, std::uint32_t k, const RouteStore& store) const {
    std::vector<RouteHotspot> out;
    const Node* n = find(p);
    for (auto& edges : query(p, k)) {
      RouteHotspot h{p, k, std::move(edges), {}};
      for (auto tid : n->tids) {
        if (!store.routes().contains(tid)) continue;
        const Route& r = store.routes().at(tid);
        auto labels = induced_sequence(r, store.graph());
        for (const auto& t : maximal_fragments(r, h.edges)) {
          auto slice = std::span<const LabelId>(labels).subspan(t.start, t.end - t.start + 1);
          if (contains_pattern(slice, std::span<const LabelId>(p.items))) h.covering.push_back(t);
        }
      }
      std::sort(h.covering.begin(), h.covering.end());
      out.push_back(std::move(h));
    }
    return out;
  }

  /// Rough resident size of the tree in bytes.
  std::size_t memory_bytes() const {
    std::size_t bytes = sizeof(RHIndex) + alphabet_.size() * sizeof(std::string);
    for (const auto& s : alphabet_) bytes += s.size();
    for (const auto& n : nodes_) {
      bytes += sizeof(Node) + n.tids.size() * sizeof(RouteId) + n.edges.size() * sizeof(WeightedEdge) +
               n.children.size() * (sizeof(LabelId) + sizeof(std::size_t) + 4 * sizeof(void*));
    }
    return bytes;
  }

  // --- persistence: "RHIDX v1 min_sup=<n>" then one line per node ----------

  void save(std::ostream& os) const {
    os << "RHIDX v1 min_sup=" << min_sup_ << '\n';
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const Node& n = nodes_[i];
      os << i << '\t';
      if (n.parent == kNoParent) {
        os << -1;
      } else {
        os << n.parent;
      }
      os << '\t' << (n.item ? alphabet_[*n.item] : std::string()) << '\t';
      for (std::size_t j = 0; j < n.tids.size(); ++j) os << (j ? "," : "") << n.tids[j];
      os << '\t';
      for (std::size_t j = 0; j < n.edges.size(); ++j) {
        const auto& we = n.edges[j];
        os << (j ? ";" : "") << we.edge.u << '-' << we.edge.v << ':' << we.weight;
      }
      os << '\n';
    }
  }

  std::string to_string() const {
    std::ostringstream os;
    save(os);
    return os.str();
  }

  static RHIndex load(std::istream& is) {
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(is, line)) throw InputError("index: empty input");
    strip_cr(line);
    constexpr std::string_view kHeader = "RHIDX v1 min_sup=";
    if (line.rfind(kHeader, 0) != 0) throw InputError("index line 1: bad header");
    RHIndex idx;
    idx.min_sup_ = parse_uint(line.substr(kHeader.size()), lineno);
    idx.nodes_.clear();

    struct Raw {
      long long parent;
      std::string item;
      std::vector<RouteId> tids;
      std::vector<WeightedEdge> edges;
    };
    std::vector<Raw> raw;
    while (std::getline(is, line)) {
      ++lineno;
      strip_cr(line);
      if (line.empty()) continue;
      auto f = split(line, '\t');
      if (f.size() != 5) throw InputError("index line " + std::to_string(lineno) + ": expected 5 fields");
      if (parse_uint(f[0], lineno) != raw.size()) {
        throw InputError("index line " + std::to_string(lineno) + ": node ids must be consecutive");
      }
      Raw r;
      r.parent = f[1] == "-1" ? -1 : static_cast<long long>(parse_uint(f[1], lineno));
      r.item = f[2];
      if (!f[3].empty()) {
        for (auto& t : split(f[3], ',')) r.tids.push_back(parse_uint(t, lineno));
      }
      if (!f[4].empty()) {
        for (auto& tok : split(f[4], ';')) {
          auto dash = tok.find('-');
          auto colon = tok.find(':');
          if (dash == std::string::npos || colon == std::string::npos || colon < dash) {
            throw InputError("index line " + std::to_string(lineno) + ": bad edge '" + tok + "'");
          }
          auto u = static_cast<VertexId>(parse_uint(tok.substr(0, dash), lineno));
          auto v = static_cast<VertexId>(parse_uint(tok.substr(dash + 1, colon - dash - 1), lineno));
          auto w = static_cast<std::uint32_t>(parse_uint(tok.substr(colon + 1), lineno));
          r.edges.push_back({EdgeKey(u, v), w});
        }
      }
      raw.push_back(std::move(r));
    }
    if (raw.empty() || raw[0].parent != -1) throw InputError("index: missing root node");

    for (const auto& r : raw) {
      if (r.parent == 0) idx.alphabet_.push_back(r.item);
    }
    std::sort(idx.alphabet_.begin(), idx.alphabet_.end());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      Node n;
      if (i == 0) {
        idx.nodes_.push_back(n);
        continue;
      }
      const auto& r = raw[i];
      if (r.parent < 0 || static_cast<std::size_t>(r.parent) >= i) {
        throw InputError("index node " + std::to_string(i) + ": parent must precede child");
      }
      n.parent = static_cast<std::size_t>(r.parent);
      n.depth = idx.nodes_[n.parent].depth + 1;
      n.item = idx.find_label(r.item);
      if (!n.item) throw InputError("index node " + std::to_string(i) + ": unknown item '" + r.item + "'");
      n.tids = r.tids;
      n.edges = r.edges;
      if (!idx.nodes_[n.parent].children.emplace(*n.item, i).second) {
        throw InputError("index node " + std::to_string(i) + ": duplicate child item");
      }
      idx.nodes_.push_back(std::move(n));
    }
    return idx;
  }

  friend bool operator==(const RHIndex&, const RHIndex&) = default;

 private:
  struct NodeData {
    std::vector<RouteId> tids;
    std::vector<WeightedEdge> edges;
    friend bool operator==(const NodeData&, const NodeData&) = default;
  };

  friend class IndexMaintainer;

  static void strip_cr(std::string& s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
  }
  static std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    for (;;) {
      auto next = s.find(sep, pos);
      out.push_back(s.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    return out;
  }
  static std::uint64_t parse_uint(std::string_view s, std::size_t lineno) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw InputError("index line " + std::to_string(lineno) + ": bad number '" + std::string(s) + "'");
    }
    return v;
  }

  static std::map<Pattern, NodeData> label_nodes(const RouteStore& store) {
    std::map<Pattern, NodeData> out;
    for (LabelId l = 0; l < store.graph().label_names().size(); ++l) out[Pattern{{l}}] = label_node(store, l);
    return out;
  }

  static NodeData label_node(const RouteStore& store, LabelId l) {
    NodeData nd;
    for (auto e : store.supporting(Pattern{{l}})) nd.tids.push_back(store.entry(e).route->tid);
    return nd;
  }

  static NodeData pattern_node(const std::vector<const RouteHotspot*>& hotspots) {
    NodeData nd;
    std::map<EdgeKey, std::uint32_t> weight;
    std::set<RouteId> tids;
    for (const auto* h : hotspots) {
      for (const auto& e : h->edges) {
        auto& w = weight[e];
        w = std::max(w, h->k);
      }
      if (h->k == 2) {
        for (const auto& t : h->covering) tids.insert(t.tid);
      }
    }
    nd.tids.assign(tids.begin(), tids.end());
    for (const auto& [e, w] : weight) nd.edges.push_back({e, w});
    return nd;
  }

  static std::map<Pattern, NodeData> catalog_nodes(const HotspotCatalog& catalog) {
    std::map<Pattern, std::vector<const RouteHotspot*>> grouped;
    for (const auto& [key, list] : catalog.entries()) {
      for (const auto& h : list) grouped[key.first].push_back(&h);
    }
    std::map<Pattern, NodeData> out;
    for (const auto& [p, hs] : grouped) out.emplace(p, pattern_node(hs));
    return out;
  }

  // Canonical tree: root, then breadth-first with children in label order.
  static RHIndex from_patterns(const std::vector<std::string>& alphabet, std::size_t min_sup,
                               const std::map<Pattern, NodeData>& data) {
    struct Proto {
      std::optional<LabelId> item;
      const NodeData* nd = nullptr;
      std::map<LabelId, std::size_t> kids;
    };
    std::vector<Proto> proto(1);
    std::map<Pattern, std::size_t> at;
    at[Pattern{}] = 0;
    for (const auto& [p, nd] : data) {
      Pattern prefix{std::vector<LabelId>(p.items.begin(), p.items.end() - 1)};
      auto it = at.find(prefix);
      if (it == at.end()) throw InputError("index: pattern without indexed prefix (catalog not prefix-closed)");
      std::size_t id = proto.size();
      proto.push_back(Proto{p.items.back(), &nd, {}});
      proto[it->second].kids.emplace(p.items.back(), id);
      at[p] = id;
    }
    RHIndex idx;
    idx.alphabet_ = alphabet;
    idx.min_sup_ = min_sup;
    idx.nodes_.clear();
    std::deque<std::pair<std::size_t, std::size_t>> queue{{0, kNoParent}};
    while (!queue.empty()) {
      auto [pid, parent] = queue.front();
      queue.pop_front();
      Node n;
      n.item = proto[pid].item;
      n.parent = parent;
      if (proto[pid].nd) {
        n.tids = proto[pid].nd->tids;
        n.edges = proto[pid].nd->edges;
      }
      std::size_t id = idx.nodes_.size();
      if (parent != kNoParent) {
        n.depth = idx.nodes_[parent].depth + 1;
        idx.nodes_[parent].children.emplace(*n.item, id);
      }
      idx.nodes_.push_back(std::move(n));
      for (const auto& [l, kid] : proto[pid].kids) queue.emplace_back(kid, id);
    }
    return idx;
  }

  std::map<Pattern, NodeData> to_patterns() const {
    std::map<Pattern, NodeData> out;
    std::vector<Pattern> path(nodes_.size());
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
      path[i] = path[nodes_[i].parent].extended(*nodes_[i].item);
      out[path[i]] = NodeData{nodes_[i].tids, nodes_[i].edges};
    }
    return out;
  }

  std::vector<std::string> alphabet_;
  std::size_t min_sup_ = 1;
  std::vector<Node> nodes_;
};

/// Result of an incremental update: the new snapshot, the route set it
/// indexes and what changed.
struct IndexUpdate {
  RHIndex index;
  RouteSet routes;
  UpdateStats stats;
};

/// Incremental maintenance. Only patterns contained in a changed route can
/// change (a pattern's hotspots depend on the routes containing it alone), so
/// re-mining starts from the 2-patterns of the changed routes and grows only
/// into extensions that are still contained in some changed route and whose
/// parent keeps a hotspot at k=2.
class IndexMaintainer {
 public:
  static IndexUpdate insert_routes(const RHIndex& idx, const RouteSet& d_new, const LabeledGraph& g,
                                   const RouteSet& d, const MiningConfig& cfg) {
    RouteSet merged = d;
    for (const auto& [tid, r] : d_new) {
      if (merged.contains(tid)) throw InputError("duplicate route id " + std::to_string(tid));
      validate_route(g, r);
      merged.insert(r);
    }
    std::vector<Sequence> changed;
    for (const auto& [tid, r] : d_new) changed.push_back(induced_sequence(r, g));
    return apply(idx, g, std::move(merged), changed, cfg);
  }

  static IndexUpdate delete_routes(const RHIndex& idx, const std::vector<RouteId>& tids,
                                   const LabeledGraph& g, const RouteSet& d, const MiningConfig& cfg) {
    RouteSet remaining = d;
    std::vector<Sequence> changed;
    for (auto tid : tids) {
      if (!remaining.contains(tid)) throw InputError("unknown route id " + std::to_string(tid));
      changed.push_back(induced_sequence(remaining.at(tid), g));
      remaining.erase(tid);
    }
    return apply(idx, g, std::move(remaining), changed, cfg);
  }

 private:
  using NodeData = RHIndex::NodeData;

  static bool touches(const std::vector<Sequence>& changed, const Pattern& p) {
    return std::any_of(changed.begin(), changed.end(),
                       [&](const Sequence& s) { return contains_pattern(s, p); });
  }

  static IndexUpdate apply(const RHIndex& idx, const LabeledGraph& g, RouteSet routes,
                           const std::vector<Sequence>& changed, MiningConfig cfg) {
    if (idx.alphabet() != g.label_names()) throw InputError("index alphabet does not match the graph labels");
    cfg.min_sup = idx.min_sup();
    IndexUpdate out{RHIndex{}, std::move(routes), {}};
    RouteStore store(g, out.routes);
    auto data = idx.to_patterns();

    std::set<LabelId> labels;
    for (const auto& s : changed) labels.insert(s.begin(), s.end());
    for (auto l : labels) {
      auto fresh = RHIndex::label_node(store, l);
      auto& slot = data[Pattern{{l}}];
      if (slot != fresh) {
        slot = std::move(fresh);
        ++out.stats.updated;
      }
    }

    std::set<Pattern> seeds;
    for (const auto& s : changed) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = i + 1; j < s.size(); ++j) seeds.insert(Pattern{{s[i], s[j]}});
      }
    }
    std::deque<Pattern> queue(seeds.begin(), seeds.end());
    while (!queue.empty()) {
      Pattern p = std::move(queue.front());
      queue.pop_front();
      detail::PatternResult res;
      if (store.supporting(p).size() >= cfg.min_sup) res = detail::scan_incremental(store, p, cfg);

      auto it = data.find(p);
      if (res.hotspots.empty()) {
        if (it != data.end()) out.stats.removed += erase_subtree(data, p);
        continue;
      }
      std::vector<const RouteHotspot*> hs;
      for (const auto& h : res.hotspots) hs.push_back(&h);
      auto fresh = RHIndex::pattern_node(hs);
      if (it == data.end()) {
        data.emplace(p, std::move(fresh));
        ++out.stats.added;
      } else if (it->second != fresh) {
        it->second = std::move(fresh);
        ++out.stats.updated;
      }
      if (res.has_k2 && detail::may_grow(cfg, p)) {
        for (LabelId l = 0; l < g.label_names().size(); ++l) {
          Pattern q = p.extended(l);
          if (touches(changed, q)) queue.push_back(std::move(q));
        }
      } else {
        // no hotspot at k=2: no extension can have one
        std::size_t gone = erase_subtree(data, p) - 1;
        out.stats.removed += gone;
        data.emplace(p, RHIndex::pattern_node(hs));
      }
    }
    out.index = RHIndex::from_patterns(g.label_names(), cfg.min_sup, data);
    return out;
  }

  // Erases p and every pattern extending it; returns how many were erased.
  static std::size_t erase_subtree(std::map<Pattern, NodeData>& data, const Pattern& p) {
    std::size_t n = 0;
    auto it = data.lower_bound(p);
    while (it != data.end() && it->first.items.size() >= p.items.size() &&
           std::equal(p.items.begin(), p.items.end(), it->first.items.begin())) {
      it = data.erase(it);
      ++n;
    }
    return n;
  }
};

inline IndexUpdate insert_routes(const RHIndex& idx, const RouteSet& d_new, const LabeledGraph& g,
                                 const RouteSet& d, const MiningConfig& cfg) {
  return IndexMaintainer::insert_routes(idx, d_new, g, d, cfg);
}

inline IndexUpdate delete_routes(const RHIndex& idx, const std::vector<RouteId>& tids, const LabeledGraph& g,
                                 const RouteSet& d, const MiningConfig& cfg) {
  return IndexMaintainer::delete_routes(idx, tids, g, d, cfg);
}

/// Flat table: one row per (pattern, k, hotspot); queries scan every row.
class NRHIndex {
 public:
  struct Row {
    std::size_t id;
    Pattern pattern;
    std::uint32_t k;
    EdgeSet edges;
  };

  static NRHIndex build(const HotspotCatalog& catalog) {
    NRHIndex idx;
    for (const auto& [key, list] : catalog.entries()) {
      for (const auto& h : list) idx.rows_.push_back(Row{idx.rows_.size(), h.pattern, h.k, h.edges});
    }
    return idx;
  }

  std::vector<EdgeSet> query(const Pattern& p, std::uint32_t k) const {
    std::vector<EdgeSet> out;
    for (const auto& r : rows_) {
      if (r.k == k && r.pattern == p) out.push_back(r.edges);
    }
    return out;
  }

  const std::vector<Row>& rows() const { return rows_; }

  std::size_t memory_bytes() const {
    std::size_t bytes = sizeof(NRHIndex);
    for (const auto& r : rows_) {
      bytes += sizeof(Row) + r.pattern.items.size() * sizeof(LabelId) + r.edges.size() * sizeof(EdgeKey);
    }
    return bytes;
  }

 private:
  std::vector<Row> rows_;
};

}  // namespace rh
