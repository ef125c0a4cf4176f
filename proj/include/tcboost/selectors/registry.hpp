#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tcboost/boost/boost.hpp"
#include "tcboost/core/error.hpp"
#include "tcboost/core/graph.hpp"
#include "tcboost/selectors/greedy.hpp"
#include "tcboost/selectors/heuristics.hpp"
#include "tcboost/selectors/independent_paths_boost.hpp"
#include "tcboost/selectors/selection.hpp"
#include "tcboost/selectors/tree_boost.hpp"

namespace tcboost {

// Everything a selector may need; each selector reads only its own fields.
struct SelectorContext {
  const DirectedGraph* graph = nullptr;
  SeedSet seeds;
  TimeUnits horizon = 15;
  std::size_t k = 5;
  std::size_t runs = 10000;  // R for simulation-based selectors
  std::size_t lambda = 2;
  BoostSpec spec;
  std::uint64_t rng_seed = 0;
  std::size_t workers = default_workers();
};

inline const std::vector<std::string>& selector_names() {
  static const std::vector<std::string> names{
      "greedy",   "greedy_batch", "moboo",    "moboo_rebuild", "tmoboo",    "fast_tmoboo", "miips",
      "fast_tmiips", "tmiips",    "spt_d",    "spp_d",         "sph_d",     "spt_mit",     "spp_mit",
      "sph_mit",  "spt_mtcit",    "spp_mtcit", "sph_mtcit",    "last_node", "random",      "top_degree"};
  return names;
}

inline bool is_known_selector(std::string_view name) {
  const auto& names = selector_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

namespace detail {

inline BoostSelection dispatch_selector(std::string_view name, const SelectorContext& c) {
  const DirectedGraph& g = *c.graph;
  if (name == "greedy") return select_greedy(g, c.seeds, c.horizon, c.k, c.runs, c.spec, c.rng_seed, c.workers);
  if (name == "greedy_batch") return select_greedy_batch(g, c.seeds, c.horizon, c.k, c.runs, c.spec, c.rng_seed, c.workers);
  if (name == "moboo") return select_moboo(g, c.seeds, c.horizon, c.k, c.spec, false);
  if (name == "moboo_rebuild") return select_moboo(g, c.seeds, c.horizon, c.k, c.spec, true);
  if (name == "tmoboo") return select_tmoboo(g, c.seeds, c.horizon, c.k, c.spec, true);
  if (name == "fast_tmoboo") return select_tmoboo(g, c.seeds, c.horizon, c.k, c.spec, false);
  if (name == "miips") return select_miips(g, c.seeds, c.horizon, c.k, c.lambda, c.spec, RankKind::PP, c.workers);
  if (name == "fast_tmiips") return select_miips(g, c.seeds, c.horizon, c.k, c.lambda, c.spec, RankKind::APT_FAST, c.workers);
  if (name == "tmiips") return select_miips(g, c.seeds, c.horizon, c.k, c.lambda, c.spec, RankKind::APT_EXACT, c.workers);
  if (name == "last_node") return select_last_node(g, c.seeds, c.horizon, c.k, c.runs, c.rng_seed);
  if (name == "random") return select_baseline(g, c.seeds, c.horizon, c.k, BaselineKind::RANDOM, c.rng_seed);
  if (name == "top_degree") return select_baseline(g, c.seeds, c.horizon, c.k, BaselineKind::TOP_DEGREE, c.rng_seed);
  if (name.size() > 4 && name.substr(0, 2) == "sp") {
    DistanceMetric metric;
    switch (name[2]) {
      case 't': metric = DistanceMetric::TIME; break;
      case 'p': metric = DistanceMetric::PROB; break;
      case 'h': metric = DistanceMetric::HOPS; break;
      default: throw ConfigError("unknown selector '" + std::string(name) + "'");
    }
    const std::string_view suffix = name.substr(3);
    DistanceBasis basis;
    if (suffix == "_d")
      basis = DistanceBasis::SIMULATION;
    else if (suffix == "_mit")
      basis = DistanceBasis::MIT;
    else if (suffix == "_mtcit")
      basis = DistanceBasis::MTCIT;
    else
      throw ConfigError("unknown selector '" + std::string(name) + "'");
    return select_distance(g, c.seeds, c.horizon, c.k, basis, metric, c.runs, c.rng_seed);
  }
  throw ConfigError("unknown selector '" + std::string(name) + "'");
}

}  // namespace detail

// Runs the named selector and records its wall time. k = 0 yields an empty
// selection without running anything.
inline BoostSelection run_selector(std::string_view name, const SelectorContext& context) {
  if (!is_known_selector(name)) throw ConfigError("unknown selector '" + std::string(name) + "'");
  if (!context.graph) throw ArgumentError("selector context has no graph");
  if (context.k == 0) {
    BoostSelection empty;
    empty.selector_name = std::string(name);
    return empty;
  }
  const auto start = std::chrono::steady_clock::now();
  BoostSelection sel = detail::dispatch_selector(name, context);
  const auto stop = std::chrono::steady_clock::now();
  sel.selector_name = std::string(name);
  sel.elapsed_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  return sel;
}

}  // namespace tcboost
