// rhcli: command-line driver for hotspot mining, indexing and verification.
//
// Exit codes: 0 ok, 1 verification mismatch, 2 bad input or usage,
// 3 resource guard tripped.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rh/bench.hpp"
#include "rh/io.hpp"
#include "rh/mining.hpp"
#include "rh/oracle.hpp"
#include "rh/rh_index.hpp"

namespace {

constexpr int kExitMismatch = 1;
constexpr int kExitInput = 2;
constexpr int kExitResource = 3;

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw rh::InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw rh::InputError("cannot write " + path);
  out << text;
}

rh::Engine engine_arg(const std::string& s) {
  auto e = rh::parse_engine(s);
  if (!e) throw rh::InputError("unknown engine '" + s + "'");
  return *e;
}

rh::RHIndex load_index(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw rh::InputError("cannot open " + path);
  return rh::RHIndex::load(in);
}

struct MineArgs {
  std::string graph, routes;
  std::size_t min_sup = 3;
  std::string engine = "fast";
  unsigned threads = 1;
  std::size_t max_len = 0;
  std::uint32_t max_k = 0;
  std::size_t max_patterns = 2'000'000;

  void add_to(CLI::App* cmd, bool need_instance = true) {
    auto* g = cmd->add_option("--graph", graph, "instance prefix (<prefix>.vertices, <prefix>.edges)");
    auto* r = cmd->add_option("--routes", routes, "routes file");
    if (need_instance) {
      g->required();
      r->required();
    }
    cmd->add_option("--min-sup", min_sup, "support threshold")->check(CLI::PositiveNumber);
    cmd->add_option("--engine", engine, "greedy | greedy+patternprune | greedy+hotspotprune | fast | parallel-fast");
    cmd->add_option("--threads", threads, "worker threads for parallel-fast")->check(CLI::PositiveNumber);
    cmd->add_option("--max-pattern-len", max_len, "cap on pattern length (0 = none)");
    cmd->add_option("--max-k", max_k, "cap on k (0 = none)");
    cmd->add_option("--max-patterns", max_patterns, "resource guard on examined patterns");
  }

  rh::MiningConfig config() const {
    rh::MiningConfig cfg;
    cfg.min_sup = min_sup;
    cfg.engine = engine_arg(engine);
    cfg.threads = threads;
    if (max_len) cfg.max_pattern_len = max_len;
    if (max_k) cfg.max_k = max_k;
    cfg.max_patterns = max_patterns;
    return cfg;
  }
};

rh::GeneratorConfig gen_from_json(const nlohmann::json& j, rh::GeneratorConfig base = {}) {
  base.vertices = j.value("vertices", base.vertices);
  base.edges = j.value("edges", base.edges);
  base.alphabet = j.value("alphabet", base.alphabet);
  base.routes = j.value("routes", base.routes);
  base.min_route_len = j.value("min_route_len", base.min_route_len);
  base.max_route_len = j.value("max_route_len", base.max_route_len);
  base.seed = j.value("seed", base.seed);
  base.window = j.value("window", base.window);
  return base;
}

// Bench config: generator fields at top level, plus optional "seeds",
// "route_counts", "min_sups" lists that expand into a cross product.
rh::BenchSpec bench_spec(const nlohmann::json& j) {
  rh::BenchSpec spec;
  auto base = gen_from_json(j);
  std::vector<std::uint64_t> seeds{base.seed};
  std::vector<std::size_t> counts{base.routes};
  if (j.contains("seeds")) seeds = j["seeds"].get<std::vector<std::uint64_t>>();
  if (j.contains("route_counts")) counts = j["route_counts"].get<std::vector<std::size_t>>();
  if (j.contains("min_sups")) spec.min_sups = j["min_sups"].get<std::vector<std::size_t>>();
  if (j.contains("min_sup")) spec.min_sups = {j["min_sup"].get<std::size_t>()};
  for (auto s : seeds) {
    for (auto c : counts) {
      auto g = base;
      g.seed = s;
      g.routes = c;
      spec.instances.push_back(g);
    }
  }
  return spec;
}

std::vector<rh::RouteId> tid_list(const std::string& s) {
  std::vector<rh::RouteId> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw rh::InputError("bad route id '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Route hotspot mining and RH-Index tools"};
  app.require_subcommand(1);

  // fixture
  auto* fixture = app.add_subcommand("fixture", "write the running-example instance");
  std::string fixture_prefix;
  fixture->add_option("--out", fixture_prefix, "output prefix")->required();

  // gen
  auto* gen = app.add_subcommand("gen", "write a seeded synthetic instance");
  rh::GeneratorConfig gcfg;
  std::string gen_prefix, gen_config;
  gen->add_option("--out", gen_prefix, "output prefix")->required();
  gen->add_option("--config", gen_config, "JSON generator config (fields override defaults)");
  gen->add_option("--vertices", gcfg.vertices);
  gen->add_option("--edges", gcfg.edges);
  gen->add_option("--alphabet", gcfg.alphabet);
  gen->add_option("--routes", gcfg.routes);
  gen->add_option("--min-route-len", gcfg.min_route_len);
  gen->add_option("--max-route-len", gcfg.max_route_len);
  gen->add_option("--seed", gcfg.seed);
  gen->add_option("--window", gcfg.window);

  // mine
  auto* mine = app.add_subcommand("mine", "mine all route hotspots");
  MineArgs mine_args;
  std::string mine_out;
  mine_args.add_to(mine);
  mine->add_option("--out", mine_out, "catalog file");

  // index
  auto* index = app.add_subcommand("index", "build an RH-Index");
  MineArgs index_args;
  std::string index_catalog, index_out;
  index_args.add_to(index);
  index->add_option("--catalog", index_catalog, "catalog file (mined on the fly if absent)");
  index->add_option("--out", index_out, "index file")->required();

  // query
  auto* query = app.add_subcommand("query", "query an RH-Index");
  std::string query_index, query_pattern, query_graph, query_routes;
  std::uint32_t query_k = 0;
  bool query_verbose = false;
  query->add_option("--index", query_index)->required();
  query->add_option("--pattern", query_pattern, "comma-separated labels, e.g. PS,MS")->required();
  query->add_option("--k", query_k)->required();
  query->add_flag("--verbose", query_verbose, "also list covering fragments (needs --graph/--routes)");
  query->add_option("--graph", query_graph);
  query->add_option("--routes", query_routes);

  // update
  auto* update = app.add_subcommand("update", "insert or delete routes incrementally");
  std::string up_index, up_insert, up_delete, up_graph, up_routes, up_out, up_routes_out;
  update->add_option("--index", up_index)->required();
  auto* ins = update->add_option("--insert", up_insert, "routes file to insert");
  auto* del = update->add_option("--delete", up_delete, "comma-separated route ids to delete");
  ins->excludes(del);
  update->add_option("--graph", up_graph)->required();
  update->add_option("--routes", up_routes, "current routes file")->required();
  update->add_option("--out", up_out, "updated index file (default: overwrite --index)");
  update->add_option("--routes-out", up_routes_out, "write the updated route set here");

  // bench
  auto* bench = app.add_subcommand("bench", "benchmark engines and index queries");
  std::string bench_config, bench_engines = "fast,greedy", bench_csv_path;
  std::size_t bench_repeat = 1;
  unsigned bench_threads = 4;
  bench->add_option("--gen-config", bench_config, "JSON generator/bench config")->required();
  bench->add_option("--repeat", bench_repeat)->check(CLI::PositiveNumber);
  bench->add_option("--engines", bench_engines, "comma-separated engine names");
  bench->add_option("--threads", bench_threads)->check(CLI::PositiveNumber);
  bench->add_option("--csv", bench_csv_path, "CSV output (stdout if absent)");

  // verify
  auto* verify = app.add_subcommand("verify", "check a catalog against the brute-force oracle");
  std::string ver_graph, ver_routes, ver_catalog, ver_report;
  std::size_t ver_min_sup = 3, ver_bound = rh::kOracleEdgeBound;
  verify->add_option("--graph", ver_graph)->required();
  verify->add_option("--routes", ver_routes)->required();
  verify->add_option("--min-sup", ver_min_sup)->check(CLI::PositiveNumber);
  verify->add_option("--catalog", ver_catalog, "catalog to verify (mined with fast if absent)");
  verify->add_option("--size-bound", ver_bound, "edge bound for exhaustive checks");
  verify->add_option("--report", ver_report, "CSV report path (stdout if absent)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fixture) {
      auto inst = rh::make_fixture();
      rh::save_graph(fixture_prefix, inst.graph);
      rh::save_routes(fixture_prefix + ".routes", inst.routes);
      std::cout << "wrote " << fixture_prefix << ".{vertices,edges,routes}\n";
    } else if (*gen) {
      if (!gen_config.empty()) gcfg = gen_from_json(nlohmann::json::parse(read_file(gen_config)), gcfg);
      auto inst = rh::generate_instance(gcfg);
      rh::save_graph(gen_prefix, inst.graph);
      rh::save_routes(gen_prefix + ".routes", inst.routes);
      std::cout << "vertices=" << inst.graph.vertex_count() << " edges=" << inst.graph.edge_count()
                << " routes=" << inst.routes.size() << '\n';
    } else if (*mine) {
      auto g = rh::load_graph(mine_args.graph);
      auto d = rh::load_routes(mine_args.routes, g);
      auto cfg = mine_args.config();
      auto t0 = Clock::now();
      auto cat = rh::mine(g, d, cfg);
      double ms = ms_since(t0);
      if (!mine_out.empty()) write_file(mine_out, rh::catalog_to_string(cat, g, cfg.min_sup));
      std::cout << "#NP=" << cat.pattern_count() << " #NH=" << cat.hotspot_count() << " time_ms=" << ms << '\n';
    } else if (*index) {
      auto g = rh::load_graph(index_args.graph);
      auto d = rh::load_routes(index_args.routes, g);
      rh::RouteStore store(g, d);
      rh::HotspotCatalog cat;
      std::size_t min_sup = index_args.min_sup;
      if (!index_catalog.empty()) {
        auto loaded = rh::load_catalog(index_catalog, g);
        cat = std::move(loaded.catalog);
        min_sup = loaded.min_sup;
      } else {
        cat = rh::mine(store, index_args.config());
      }
      auto t0 = Clock::now();
      auto idx = rh::RHIndex::build(store, cat, min_sup);
      double ms = ms_since(t0);
      auto text = idx.to_string();
      write_file(index_out, text);
      std::cout << "nodes=" << idx.node_count() << " patterns=" << idx.pattern_count() << " bytes=" << text.size()
                << " time_ms=" << ms << '\n';
    } else if (*query) {
      if (query_k < 2) throw rh::InputError("k must be >= 2");
      auto idx = load_index(query_index);
      auto p = idx.parse_pattern(query_pattern);
      if (p && p->size() < 2) throw rh::InputError("pattern must have at least two labels");
      if (!p) {
        // a label outside the alphabet: no node can match
        std::cout << "# components=0\n";
        return 0;
      }
      std::optional<rh::LabeledGraph> g;
      std::optional<rh::RouteSet> d;
      if (query_verbose) {
        if (query_graph.empty() || query_routes.empty()) throw rh::InputError("--verbose needs --graph and --routes");
        g = rh::load_graph(query_graph);
        d = rh::load_routes(query_routes, *g);
      }
      auto t0 = Clock::now();
      auto comps = idx.query(*p, query_k);
      double us = ms_since(t0) * 1e3;
      std::vector<rh::RouteHotspot> detail;
      if (query_verbose) {
        rh::RouteStore store(*g, *d);
        detail = idx.query_verbose(*p, query_k, store);
      }
      for (std::size_t i = 0; i < comps.size(); ++i) {
        std::cout << "component " << (i + 1) << " edges=" << comps[i].size() << '\n' << rh::format_edges(comps[i]) << '\n';
        if (query_verbose) {
          std::cout << "covering ";
          const auto& cov = detail[i].covering;
          for (std::size_t j = 0; j < cov.size(); ++j) {
            std::cout << (j ? "," : "") << cov[j].tid << '@' << cov[j].start << '-' << cov[j].end;
          }
          std::cout << '\n';
        }
        std::cout << '\n';
      }
      std::cout << "# components=" << comps.size() << " time_us=" << us << '\n';
    } else if (*update) {
      auto g = rh::load_graph(up_graph);
      auto d = rh::load_routes(up_routes, g);
      auto idx = load_index(up_index);
      rh::MiningConfig cfg;
      cfg.min_sup = idx.min_sup();
      auto t0 = Clock::now();
      rh::IndexUpdate res;
      if (!up_insert.empty()) {
        auto fresh = rh::load_routes(up_insert, g);
        res = rh::insert_routes(idx, fresh, g, d, cfg);
      } else if (!up_delete.empty()) {
        res = rh::delete_routes(idx, tid_list(up_delete), g, d, cfg);
      } else {
        throw rh::InputError("update needs --insert or --delete");
      }
      double ms = ms_since(t0);
      write_file(up_out.empty() ? up_index : up_out, res.index.to_string());
      if (!up_routes_out.empty()) rh::save_routes(up_routes_out, res.routes);
      std::cout << "added=" << res.stats.added << " updated=" << res.stats.updated
                << " removed=" << res.stats.removed << " time_ms=" << ms << '\n';
    } else if (*bench) {
      auto spec = bench_spec(nlohmann::json::parse(read_file(bench_config)));
      spec.repeat = bench_repeat;
      spec.threads = bench_threads;
      spec.engines.clear();
      std::stringstream ss(bench_engines);
      std::string tok;
      while (std::getline(ss, tok, ',')) spec.engines.push_back(engine_arg(tok));
      auto csv = rh::bench_csv(rh::run_bench(spec));
      if (bench_csv_path.empty()) {
        std::cout << csv;
      } else {
        write_file(bench_csv_path, csv);
      }
    } else if (*verify) {
      auto g = rh::load_graph(ver_graph);
      auto d = rh::load_routes(ver_routes, g);
      std::size_t min_sup = ver_min_sup;
      rh::HotspotCatalog cat;
      if (!ver_catalog.empty()) {
        auto loaded = rh::load_catalog(ver_catalog, g);
        cat = std::move(loaded.catalog);
        min_sup = loaded.min_sup;
      } else {
        rh::MiningConfig cfg;
        cfg.min_sup = min_sup;
        cat = rh::mine(g, d, cfg);
      }
      auto rep = rh::run_oracle(g, d, min_sup, cat, ver_bound);
      auto csv = rep.to_csv(g);
      if (ver_report.empty()) {
        std::cout << csv;
      } else {
        write_file(ver_report, csv);
      }
      if (!rep.exhaustive) std::cerr << "note: instance exceeds the exhaustive bound; maximality and set comparison skipped\n";
      for (const auto& row : rep.rows) {
        if (!row.checks.passed()) std::cerr << "FAIL " << rh::describe(g, row.pattern, row.k, row.edges) << ": " << row.checks.first_failure() << '\n';
      }
      for (const auto& m : rep.mismatches) std::cerr << "FAIL " << m << '\n';
      std::cout << (rep.passed() ? "verify: pass" : "verify: FAIL") << '\n';
      return rep.passed() ? 0 : kExitMismatch;
    }
  } catch (const rh::ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kExitResource;
  } catch (const rh::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}
