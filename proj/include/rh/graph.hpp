#pragma once

// Labeled undirected graphs, triangle supports and truss decomposition.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace rh {

using VertexId = std::uint32_t;
using LabelId = std::uint32_t;

/// Thrown for malformed or referentially inconsistent input.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Canonical identity of an undirected edge; always u < v.
struct EdgeKey {
  VertexId u = 0;
  VertexId v = 0;

  constexpr EdgeKey() = default;
  constexpr EdgeKey(VertexId a, VertexId b) : u(a < b ? a : b), v(a < b ? b : a) {}

  friend constexpr auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

/// Sorted, duplicate-free list of edges.
using EdgeSet = std::vector<EdgeKey>;
using SupportMap = std::map<EdgeKey, std::uint32_t>;

inline EdgeSet make_edge_set(std::vector<EdgeKey> edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

inline bool contains_edge(const EdgeSet& set, EdgeKey e) {
  return std::binary_search(set.begin(), set.end(), e);
}

inline bool is_subset(const EdgeSet& small, const EdgeSet& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

/// Undirected simple graph with exactly one label per vertex.
///
/// Vertices are addressed externally by VertexId and internally by a dense
/// index ordered like the ids, so EdgeKey order agrees with index order.
/// Label ids are assigned in lexicographic order of the label text.
class LabeledGraph {
 public:
  class Builder {
   public:
    Builder& add_vertex(VertexId id, std::string label) {
      if (!vertices_.emplace(id, std::move(label)).second) {
        throw InputError("duplicate vertex " + std::to_string(id));
      }
      return *this;
    }

    Builder& add_edge(VertexId a, VertexId b) {
      if (a == b) throw InputError("self-loop on vertex " + std::to_string(a));
      if (!vertices_.contains(a) || !vertices_.contains(b)) {
        throw InputError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                         ") references an unknown vertex");
      }
      edges_.emplace_back(a, b);
      return *this;
    }

    LabeledGraph build() const {
      LabeledGraph g;
      std::vector<std::string> names;
      for (const auto& [id, label] : vertices_) names.push_back(label);
      std::sort(names.begin(), names.end());
      names.erase(std::unique(names.begin(), names.end()), names.end());
      g.label_names_ = names;

      for (const auto& [id, label] : vertices_) {
        g.ids_.push_back(id);
        auto it = std::lower_bound(names.begin(), names.end(), label);
        g.labels_.push_back(static_cast<LabelId>(it - names.begin()));
      }
      g.edges_ = edges_;
      std::sort(g.edges_.begin(), g.edges_.end());
      if (std::adjacent_find(g.edges_.begin(), g.edges_.end()) != g.edges_.end()) {
        auto dup = *std::adjacent_find(g.edges_.begin(), g.edges_.end());
        throw InputError("duplicate edge (" + std::to_string(dup.u) + "," +
                         std::to_string(dup.v) + ")");
      }
      g.build_adjacency();
      return g;
    }

   private:
    std::map<VertexId, std::string> vertices_;
    std::vector<EdgeKey> edges_;
  };

  struct Neighbor {
    std::uint32_t vertex;  // dense index
    std::uint32_t edge;    // index into edges()
  };

  std::size_t vertex_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const VertexId> vertices() const { return ids_; }
  const EdgeSet& edges() const { return edges_; }

  std::optional<std::uint32_t> vertex_index(VertexId id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) return std::nullopt;
    return static_cast<std::uint32_t>(it - ids_.begin());
  }
  VertexId vertex_id(std::uint32_t index) const { return ids_[index]; }
  bool has_vertex(VertexId id) const { return vertex_index(id).has_value(); }

  std::optional<std::uint32_t> edge_index(EdgeKey e) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e) return std::nullopt;
    return static_cast<std::uint32_t>(it - edges_.begin());
  }
  bool has_edge(VertexId a, VertexId b) const {
    return a != b && edge_index(EdgeKey(a, b)).has_value();
  }

  LabelId label_at(std::uint32_t index) const { return labels_[index]; }
  LabelId label(VertexId id) const {
    auto idx = vertex_index(id);
    if (!idx) throw InputError("unknown vertex " + std::to_string(id));
    return labels_[*idx];
  }

  /// Alphabet in lexicographic order; LabelId indexes this list.
  const std::vector<std::string>& label_names() const { return label_names_; }
  const std::string& label_name(LabelId l) const { return label_names_.at(l); }
  std::optional<LabelId> find_label(std::string_view name) const {
    auto it = std::lower_bound(label_names_.begin(), label_names_.end(), name);
    if (it == label_names_.end() || *it != name) return std::nullopt;
    return static_cast<LabelId>(it - label_names_.begin());
  }

  std::span<const Neighbor> neighbors(std::uint32_t index) const {
    return {adjacency_.data() + offsets_[index], adjacency_.data() + offsets_[index + 1]};
  }
  std::size_t degree(VertexId id) const {
    auto idx = vertex_index(id);
    return idx ? neighbors(*idx).size() : 0;
  }

 private:
  void build_adjacency() {
    std::vector<std::uint32_t> deg(ids_.size() + 1, 0);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> ends;
    ends.reserve(edges_.size());
    for (const auto& e : edges_) {
      auto a = *vertex_index(e.u);
      auto b = *vertex_index(e.v);
      ends.emplace_back(a, b);
      ++deg[a];
      ++deg[b];
    }
    offsets_.assign(ids_.size() + 1, 0);
    for (std::size_t i = 0; i < ids_.size(); ++i) offsets_[i + 1] = offsets_[i] + deg[i];
    adjacency_.resize(offsets_.back());
    std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::uint32_t ei = 0; ei < ends.size(); ++ei) {
      auto [a, b] = ends[ei];
      adjacency_[fill[a]++] = {b, ei};
      adjacency_[fill[b]++] = {a, ei};
    }
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      std::sort(adjacency_.begin() + offsets_[i], adjacency_.begin() + offsets_[i + 1],
                [](const Neighbor& x, const Neighbor& y) { return x.vertex < y.vertex; });
    }
  }

  std::vector<VertexId> ids_;
  std::vector<LabelId> labels_;
  std::vector<std::string> label_names_;
  EdgeSet edges_;
  std::vector<std::uint32_t> offsets_;
  std::vector<Neighbor> adjacency_;
};

/// Compact, locally indexed view of an edge subset of a graph.
///
/// Local vertex and edge ids are dense and ordered like the global ids, and
/// adjacency lists are sorted so triangles are found by list intersection.
class EdgeSubgraph {
 public:
  struct Neighbor {
    std::uint32_t vertex;
    std::uint32_t edge;
  };

  EdgeSubgraph() = default;

  /// `edges` must be sorted and unique.
  explicit EdgeSubgraph(const EdgeSet& edges) : edges_(edges) {
    for (const auto& e : edges_) {
      vertices_.push_back(e.u);
      vertices_.push_back(e.v);
    }
    std::sort(vertices_.begin(), vertices_.end());
    vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());

    std::vector<std::uint32_t> deg(vertices_.size(), 0);
    ends_.reserve(edges_.size());
    for (const auto& e : edges_) {
      auto a = local_vertex(e.u);
      auto b = local_vertex(e.v);
      ends_.emplace_back(a, b);
      ++deg[a];
      ++deg[b];
    }
    offsets_.assign(vertices_.size() + 1, 0);
    for (std::size_t i = 0; i < vertices_.size(); ++i) offsets_[i + 1] = offsets_[i] + deg[i];
    adjacency_.resize(offsets_.back());
    std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::uint32_t ei = 0; ei < ends_.size(); ++ei) {
      auto [a, b] = ends_[ei];
      adjacency_[fill[a]++] = {b, ei};
      adjacency_[fill[b]++] = {a, ei};
    }
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      std::sort(adjacency_.begin() + offsets_[i], adjacency_.begin() + offsets_[i + 1],
                [](const Neighbor& x, const Neighbor& y) { return x.vertex < y.vertex; });
    }
  }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const EdgeSet& edges() const { return edges_; }
  EdgeKey edge(std::uint32_t e) const { return edges_[e]; }
  VertexId vertex(std::uint32_t v) const { return vertices_[v]; }
  std::pair<std::uint32_t, std::uint32_t> ends(std::uint32_t e) const { return ends_[e]; }

  std::uint32_t local_vertex(VertexId id) const {
    return static_cast<std::uint32_t>(
        std::lower_bound(vertices_.begin(), vertices_.end(), id) - vertices_.begin());
  }
  std::optional<std::uint32_t> local_edge(EdgeKey e) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e) return std::nullopt;
    return static_cast<std::uint32_t>(it - edges_.begin());
  }

  std::span<const Neighbor> neighbors(std::uint32_t v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

  /// Calls fn(e1, e2) for every triangle {e, e1, e2} whose other two edges
  /// satisfy `alive`.
  template <class Alive, class Fn>
  void for_each_triangle(std::uint32_t e, Alive&& alive, Fn&& fn) const {
    auto [a, b] = ends_[e];
    auto na = neighbors(a);
    auto nb = neighbors(b);
    std::size_t i = 0, j = 0;
    while (i < na.size() && j < nb.size()) {
      if (na[i].vertex < nb[j].vertex) {
        ++i;
      } else if (nb[j].vertex < na[i].vertex) {
        ++j;
      } else {
        if (alive(na[i].edge) && alive(nb[j].edge)) fn(na[i].edge, nb[j].edge);
        ++i;
        ++j;
      }
    }
  }

  std::vector<std::uint32_t> supports() const {
    std::vector<std::uint32_t> sup(edges_.size(), 0);
    auto all = [](std::uint32_t) { return true; };
    for (std::uint32_t e = 0; e < edges_.size(); ++e) {
      for_each_triangle(e, all, [&](std::uint32_t, std::uint32_t) { ++sup[e]; });
    }
    return sup;
  }

  /// Edge trussness by bucket-ordered minimum-support peeling.
  std::vector<std::uint32_t> trussness() const {
    const std::size_t m = edges_.size();
    std::vector<std::uint32_t> sup = supports();
    std::vector<std::uint32_t> tau(m, 2);
    if (m == 0) return tau;

    std::uint32_t max_sup = *std::max_element(sup.begin(), sup.end());
    std::vector<std::uint32_t> bin(max_sup + 2, 0);
    for (auto s : sup) ++bin[s + 1];
    for (std::size_t s = 1; s < bin.size(); ++s) bin[s] += bin[s - 1];
    // bin[s] = first position of bucket s
    std::vector<std::uint32_t> order(m), pos(m);
    {
      std::vector<std::uint32_t> fill(bin.begin(), bin.end() - 1);
      for (std::uint32_t e = 0; e < m; ++e) {
        pos[e] = fill[sup[e]]++;
        order[pos[e]] = e;
      }
    }
    std::vector<char> done(m, 0);
    auto alive = [&](std::uint32_t x) { return !done[x]; };
    auto lower = [&](std::uint32_t x, std::uint32_t floor) {
      if (sup[x] <= floor) return;
      std::uint32_t s = sup[x];
      std::uint32_t front = bin[s];
      std::uint32_t y = order[front];
      if (y != x) {
        std::swap(order[pos[x]], order[front]);
        std::swap(pos[x], pos[y]);
      }
      ++bin[s];
      --sup[x];
    };
    for (std::uint32_t i = 0; i < m; ++i) {
      std::uint32_t e = order[i];
      tau[e] = sup[e] + 2;
      for_each_triangle(e, alive, [&](std::uint32_t x, std::uint32_t y) {
        lower(x, sup[e]);
        lower(y, sup[e]);
      });
      done[e] = 1;
    }
    return tau;
  }

 private:
  EdgeSet edges_;
  std::vector<VertexId> vertices_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> ends_;
  std::vector<std::uint32_t> offsets_;
  std::vector<Neighbor> adjacency_;
};

struct TrussDecomposition {
  std::map<EdgeKey, std::uint32_t> edge_trussness;
  // 2 when the graph has no edges
  std::uint32_t k_max = 2;
};

namespace detail {

inline void require_edges_in(const LabeledGraph& g, const EdgeSet& h) {
  for (const auto& e : h) {
    if (!g.edge_index(e)) {
      throw InputError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                       ") is not in the graph");
    }
  }
}

}  // namespace detail

/// Number of triangles inside `h` that contain each edge of `h`.
inline SupportMap compute_supports(const LabeledGraph& g, const EdgeSet& h) {
  detail::require_edges_in(g, h);
  EdgeSubgraph sub(h);
  auto sup = sub.supports();
  SupportMap out;
  for (std::uint32_t e = 0; e < sub.edge_count(); ++e) out.emplace_hint(out.end(), sub.edge(e), sup[e]);
  return out;
}

inline TrussDecomposition truss_decompose(const LabeledGraph& g) {
  EdgeSubgraph sub(g.edges());
  auto tau = sub.trussness();
  TrussDecomposition out;
  for (std::uint32_t e = 0; e < sub.edge_count(); ++e) {
    out.edge_trussness.emplace_hint(out.edge_trussness.end(), sub.edge(e), tau[e]);
    out.k_max = std::max(out.k_max, tau[e]);
  }
  return out;
}

/// Maximal subset of `h` in which every edge lies in at least k-2 triangles.
inline EdgeSet k_truss_peel(const EdgeSet& h, std::uint32_t k) {
  if (k < 2) throw std::invalid_argument("k_truss_peel: k must be >= 2");
  if (k == 2) return h;
  EdgeSubgraph sub(h);
  auto sup = sub.supports();
  const std::uint32_t need = k - 2;
  std::vector<char> alive(sub.edge_count(), 1), queued(sub.edge_count(), 0);
  std::vector<std::uint32_t> queue;
  for (std::uint32_t e = 0; e < sub.edge_count(); ++e) {
    if (sup[e] < need) {
      queued[e] = 1;
      queue.push_back(e);
    }
  }
  auto is_alive = [&](std::uint32_t x) { return alive[x] != 0; };
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::uint32_t e = queue[head];
    alive[e] = 0;
    sub.for_each_triangle(e, is_alive, [&](std::uint32_t x, std::uint32_t y) {
      for (auto z : {x, y}) {
        --sup[z];
        if (sup[z] < need && !queued[z]) {
          queued[z] = 1;
          queue.push_back(z);
        }
      }
    });
  }
  EdgeSet out;
  for (std::uint32_t e = 0; e < sub.edge_count(); ++e) {
    if (alive[e]) out.push_back(sub.edge(e));
  }
  return out;
}

/// Edge sets of the connected pieces of `h`, ordered by their smallest edge.
inline std::vector<EdgeSet> connected_components(const EdgeSet& h) {
  EdgeSubgraph sub(h);
  std::vector<std::uint32_t> parent(sub.vertex_count());
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::uint32_t e = 0; e < sub.edge_count(); ++e) {
    auto [a, b] = sub.ends(e);
    auto ra = find(a), rb = find(b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::unordered_map<std::uint32_t, std::size_t> slot;
  std::vector<EdgeSet> out;
  // edges are visited in sorted order, so each component's first edge is its minimum
  for (std::uint32_t e = 0; e < sub.edge_count(); ++e) {
    auto r = find(sub.ends(e).first);
    auto [it, fresh] = slot.emplace(r, out.size());
    if (fresh) out.emplace_back();
    out[it->second].push_back(sub.edge(e));
  }
  return out;
}

}  // namespace rh
