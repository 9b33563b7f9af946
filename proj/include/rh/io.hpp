#pragma once

// Text formats for instances and catalogs, the running-example fixture and a
// seeded synthetic instance generator.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rh/graph.hpp"
#include "rh/mining.hpp"
#include "rh/routes.hpp"

namespace rh {

namespace io_detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) return out;
    pos = next + 1;
  }
}

[[noreturn]] inline void fail(const std::string& source, std::size_t line, const std::string& what) {
  throw InputError(source + ":" + std::to_string(line) + ": " + what);
}

template <class T>
T number(std::string_view s, const std::string& source, std::size_t line) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    fail(source, line, "expected a non-negative integer, got '" + std::string(s) + "'");
  }
  return v;
}

// Calls fn(fields, lineno) for every non-blank, non-comment line.
template <class Fn>
void for_each_record(std::istream& is, Fn&& fn) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    fn(split(line, '\t'), lineno);
  }
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return in;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  return out;
}

inline bool valid_label(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c == ',' || c == ';' || c == ' ' || c == '\t') return false;
  }
  return true;
}

}  // namespace io_detail

// --- instance files ----------------------------------------------------------
//   <prefix>.vertices   id<TAB>label
//   <prefix>.edges      u<TAB>v
//   routes file         tid<TAB>v1,v2,...

inline LabeledGraph read_graph(std::istream& vertices, std::istream& edges, const std::string& vsrc = "vertices",
                               const std::string& esrc = "edges") {
  using namespace io_detail;
  LabeledGraph::Builder b;
  for_each_record(vertices, [&](const auto& f, std::size_t line) {
    if (f.size() != 2) fail(vsrc, line, "expected 'id<TAB>label'");
    if (!valid_label(f[1])) fail(vsrc, line, "label must be non-empty without ',', ';' or spaces");
    try {
      b.add_vertex(number<VertexId>(f[0], vsrc, line), std::string(f[1]));
    } catch (const InputError& e) {
      if (std::string_view(e.what()).starts_with(vsrc + ":")) throw;
      fail(vsrc, line, e.what());
    }
  });
  std::set<EdgeKey> seen;
  for_each_record(edges, [&](const auto& f, std::size_t line) {
    if (f.size() != 2) fail(esrc, line, "expected 'u<TAB>v'");
    auto u = number<VertexId>(f[0], esrc, line);
    auto v = number<VertexId>(f[1], esrc, line);
    if (u != v && !seen.insert(EdgeKey(u, v)).second) {
      fail(esrc, line, "duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    }
    try {
      b.add_edge(u, v);
    } catch (const InputError& e) {
      fail(esrc, line, e.what());
    }
  });
  return b.build();
}

inline LabeledGraph load_graph(const std::string& prefix) {
  auto v = io_detail::open_in(prefix + ".vertices");
  auto e = io_detail::open_in(prefix + ".edges");
  return read_graph(v, e, prefix + ".vertices", prefix + ".edges");
}

/// Parses routes, checking every walk against `g`.
inline RouteSet read_routes(std::istream& is, const LabeledGraph& g, const std::string& src = "routes") {
  using namespace io_detail;
  RouteSet d;
  for_each_record(is, [&](const auto& f, std::size_t line) {
    if (f.size() != 2) fail(src, line, "expected 'tid<TAB>v1,v2,...'");
    Route r{number<RouteId>(f[0], src, line), {}};
    for (auto tok : split(f[1], ',')) r.walk.push_back(number<VertexId>(tok, src, line));
    try {
      validate_route(g, r);
      d.insert(std::move(r));
    } catch (const InputError& e) {
      fail(src, line, e.what());
    }
  });
  return d;
}

inline RouteSet load_routes(const std::string& path, const LabeledGraph& g) {
  auto in = io_detail::open_in(path);
  return read_routes(in, g, path);
}

inline void write_graph(std::ostream& vertices, std::ostream& edges, const LabeledGraph& g) {
  for (auto v : g.vertices()) vertices << v << '\t' << g.label_name(g.label(v)) << '\n';
  for (const auto& e : g.edges()) edges << e.u << '\t' << e.v << '\n';
}

inline void save_graph(const std::string& prefix, const LabeledGraph& g) {
  auto v = io_detail::open_out(prefix + ".vertices");
  auto e = io_detail::open_out(prefix + ".edges");
  write_graph(v, e, g);
}

inline void write_routes(std::ostream& os, const RouteSet& d) {
  for (const auto& [tid, r] : d) {
    os << tid << '\t';
    for (std::size_t i = 0; i < r.walk.size(); ++i) os << (i ? "," : "") << r.walk[i];
    os << '\n';
  }
}

inline void save_routes(const std::string& path, const RouteSet& d) {
  auto out = io_detail::open_out(path);
  write_routes(out, d);
}

/// Comma-separated label text to a pattern over g's alphabet.
inline Pattern parse_pattern(std::string_view text, const LabeledGraph& g) {
  Pattern p;
  for (auto tok : io_detail::split(text, ',')) {
    if (tok.empty()) throw InputError("malformed pattern '" + std::string(text) + "'");
    auto l = g.find_label(tok);
    if (!l) throw InputError("unknown label '" + std::string(tok) + "' in pattern");
    p.items.push_back(*l);
  }
  return p;
}

inline std::string format_pattern(const Pattern& p, const LabeledGraph& g) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ',';
    s += g.label_name(p.items[i]);
  }
  return s;
}

inline std::string format_edges(const EdgeSet& edges) {
  std::string s;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(edges[i].u) + '-' + std::to_string(edges[i].v);
  }
  return s;
}

// --- catalog file ------------------------------------------------------------
//   RHCAT v1 min_sup=<n>
//   pattern<TAB>k<TAB>u-v;u-v;...<TAB>tid@start-end,...

inline void write_catalog(std::ostream& os, const HotspotCatalog& c, const LabeledGraph& g, std::size_t min_sup) {
  os << "RHCAT v1 min_sup=" << min_sup << '\n';
  for (const auto& [key, list] : c.entries()) {
    for (const auto& h : list) {
      os << format_pattern(h.pattern, g) << '\t' << h.k << '\t' << format_edges(h.edges) << '\t';
      for (std::size_t i = 0; i < h.covering.size(); ++i) {
        const auto& t = h.covering[i];
        os << (i ? "," : "") << t.tid << '@' << t.start << '-' << t.end;
      }
      os << '\n';
    }
  }
}

inline std::string catalog_to_string(const HotspotCatalog& c, const LabeledGraph& g, std::size_t min_sup) {
  std::ostringstream os;
  write_catalog(os, c, g, min_sup);
  return os.str();
}

struct LoadedCatalog {
  HotspotCatalog catalog;
  std::size_t min_sup = 1;
};

inline LoadedCatalog read_catalog(std::istream& is, const LabeledGraph& g, const std::string& src = "catalog") {
  using namespace io_detail;
  LoadedCatalog out;
  std::string header;
  if (!std::getline(is, header)) fail(src, 1, "empty catalog");
  if (!header.empty() && header.back() == '\r') header.pop_back();
  constexpr std::string_view kHeader = "RHCAT v1 min_sup=";
  if (!header.starts_with(kHeader)) fail(src, 1, "bad header, expected '" + std::string(kHeader) + "<n>'");
  out.min_sup = number<std::size_t>(std::string_view(header).substr(kHeader.size()), src, 1);
  std::vector<RouteHotspot> all;
  std::size_t offset = 1;  // header already consumed
  for_each_record(is, [&](const auto& f, std::size_t line) {
    line += offset;
    if (f.size() != 4) fail(src, line, "expected 4 tab-separated fields");
    RouteHotspot h;
    try {
      h.pattern = parse_pattern(f[0], g);
    } catch (const InputError& e) {
      fail(src, line, e.what());
    }
    if (h.pattern.size() < 2) fail(src, line, "pattern must have at least two labels");
    h.k = number<std::uint32_t>(f[1], src, line);
    if (h.k < 2) fail(src, line, "k must be >= 2");
    std::vector<EdgeKey> edges;
    for (auto tok : split(f[2], ';')) {
      auto parts = split(tok, '-');
      if (parts.size() != 2) fail(src, line, "bad edge '" + std::string(tok) + "'");
      auto u = number<VertexId>(parts[0], src, line);
      auto v = number<VertexId>(parts[1], src, line);
      if (!g.has_edge(u, v)) fail(src, line, "edge " + std::string(tok) + " is not in the graph");
      edges.emplace_back(u, v);
    }
    h.edges = make_edge_set(std::move(edges));
    if (!f[3].empty()) {
      for (auto tok : split(f[3], ',')) {
        auto at = tok.find('@');
        auto dash = tok.find('-', at == std::string_view::npos ? 0 : at);
        if (at == std::string_view::npos || dash == std::string_view::npos) {
          fail(src, line, "bad covering fragment '" + std::string(tok) + "'");
        }
        Subroute t{number<RouteId>(tok.substr(0, at), src, line),
                   number<std::uint32_t>(tok.substr(at + 1, dash - at - 1), src, line),
                   number<std::uint32_t>(tok.substr(dash + 1), src, line)};
        if (t.start >= t.end) fail(src, line, "empty covering fragment '" + std::string(tok) + "'");
        h.covering.push_back(t);
      }
    }
    all.push_back(std::move(h));
  });
  out.catalog.add(std::move(all));
  return out;
}

inline LoadedCatalog load_catalog(const std::string& path, const LabeledGraph& g) {
  auto in = io_detail::open_in(path);
  return read_catalog(in, g, path);
}

// --- fixture -----------------------------------------------------------------

struct Instance {
  LabeledGraph graph;
  RouteSet routes;
};

/// The running example: 10 labelled vertices, 16 edges, 8 routes.
inline Instance make_fixture() {
  LabeledGraph::Builder b;
  const char* labels[] = {"PS", "WS", "WS", "MS", "DB", "PS", "MS", "WS", "DB", "DB"};
  for (VertexId v = 1; v <= 10; ++v) b.add_vertex(v, labels[v - 1]);
  const std::pair<VertexId, VertexId> edges[] = {
      {1, 2}, {2, 5}, {1, 3}, {3, 5}, {1, 4}, {4, 7}, {7, 9}, {4, 5},
      {4, 6}, {6, 7}, {4, 9}, {7, 10}, {6, 8}, {7, 8}, {8, 9}, {8, 10}};
  for (auto [u, v] : edges) b.add_edge(u, v);
  Instance inst{b.build(), {}};
  const std::vector<std::vector<VertexId>> walks = {
      {1, 2, 5}, {1, 3, 5}, {1, 4, 7, 9}, {1, 4, 5}, {6, 4, 6}, {6, 7, 9}, {6, 7, 4, 9}, {6, 7, 10}};
  for (std::size_t i = 0; i < walks.size(); ++i) {
    Route r{static_cast<RouteId>(i + 1), walks[i]};
    validate_route(inst.graph, r);
    inst.routes.insert(std::move(r));
  }
  return inst;
}

// --- generator ---------------------------------------------------------------

struct GeneratorConfig {
  std::size_t vertices = 60;
  std::size_t edges = 180;
  std::size_t alphabet = 5;
  std::size_t routes = 100;
  std::size_t min_route_len = 2;  // in edges
  std::size_t max_route_len = 5;
  std::uint64_t seed = 1;
  // edges join vertices at most `window` apart on a ring, which keeps the
  // graph locally dense (many triangles); 0 picks a default from the density
  std::size_t window = 0;

  void validate() const {
    if (vertices < 2) throw std::invalid_argument("generator: need at least 2 vertices");
    if (alphabet < 1) throw std::invalid_argument("generator: alphabet must be >= 1");
    if (min_route_len < 1 || max_route_len < min_route_len) {
      throw std::invalid_argument("generator: need 1 <= min_route_len <= max_route_len");
    }
  }
};

namespace io_detail {

// Bounded draw from the raw engine output; std distributions are
// implementation-defined, which would break byte-for-byte reproducibility.
inline std::uint64_t draw(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

}  // namespace io_detail

/// Seeded random instance. Graph structure and labels are drawn first and do
/// not depend on the route count, and routes are drawn in tid order, so
/// instances differing only in `routes` share a graph and a route prefix.
inline Instance generate_instance(const GeneratorConfig& cfg) {
  using io_detail::draw;
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  const std::size_t n = cfg.vertices;
  std::size_t window = cfg.window;
  if (window == 0) window = std::max<std::size_t>(3, (2 * cfg.edges + n - 1) / n);
  window = std::min(window, (n - 1) / 2 == 0 ? std::size_t{1} : (n - 1) / 2);
  const std::size_t possible = n == 2 ? 1 : n * window;
  const std::size_t target = std::min(cfg.edges, possible);

  LabeledGraph::Builder b;
  for (std::size_t v = 0; v < n; ++v) {
    b.add_vertex(static_cast<VertexId>(v + 1), "L" + std::to_string(draw(rng, cfg.alphabet)));
  }
  std::set<EdgeKey> edges;
  for (std::size_t attempts = 0; edges.size() < target && attempts < 50 * target + 100; ++attempts) {
    auto u = draw(rng, n);
    auto v = (u + 1 + draw(rng, window)) % n;
    if (u == v) continue;
    edges.insert(EdgeKey(static_cast<VertexId>(u + 1), static_cast<VertexId>(v + 1)));
  }
  for (const auto& e : edges) b.add_edge(e.u, e.v);
  Instance inst{b.build(), {}};
  const LabeledGraph& g = inst.graph;

  std::vector<std::uint32_t> usable;
  for (std::uint32_t i = 0; i < g.vertex_count(); ++i) {
    if (!g.neighbors(i).empty()) usable.push_back(i);
  }
  if (usable.empty()) return inst;
  for (std::size_t t = 0; t < cfg.routes; ++t) {
    auto len = cfg.min_route_len + draw(rng, cfg.max_route_len - cfg.min_route_len + 1);
    auto cur = usable[draw(rng, usable.size())];
    Route r{static_cast<RouteId>(t + 1), {g.vertex_id(cur)}};
    for (std::size_t s = 0; s < len; ++s) {
      auto nb = g.neighbors(cur);
      cur = nb[draw(rng, nb.size())].vertex;
      r.walk.push_back(g.vertex_id(cur));
    }
    inst.routes.insert(std::move(r));
  }
  return inst;
}

}  // namespace rh
