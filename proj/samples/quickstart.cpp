// Mine the built-in fixture, index the result and run one query.

#include <iostream>

#include "rh/io.hpp"
#include "rh/mining.hpp"
#include "rh/rh_index.hpp"

int main() {
  auto inst = rh::make_fixture();
  rh::RouteStore store(inst.graph, inst.routes);

  rh::MiningConfig cfg;
  cfg.min_sup = 3;
  auto catalog = rh::mine(store, cfg);
  std::cout << catalog.pattern_count() << " patterns, " << catalog.hotspot_count() << " hotspots\n";
  rh::write_catalog(std::cout, catalog, inst.graph, cfg.min_sup);

  auto index = rh::RHIndex::build(store, catalog, cfg.min_sup);
  auto p = rh::parse_pattern("PS,MS", inst.graph);
  for (const auto& edges : index.query(p, 3)) std::cout << "PS,MS at k=3: " << rh::format_edges(edges) << '\n';
}
