#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tcboost/boost/boost.hpp"
#include "tcboost/core/graph.hpp"
#include "tcboost/core/rng.hpp"
#include "tcboost/paths/influence_tree.hpp"
#include "tcboost/selectors/selection.hpp"
#include "tcboost/sim/simulate.hpp"

namespace tcboost {

enum class DistanceBasis { SIMULATION, MIT, MTCIT };
enum class DistanceMetric { TIME, PROB, HOPS };

inline std::string distance_selector_name(DistanceBasis basis, DistanceMetric metric) {
  std::string name = metric == DistanceMetric::TIME ? "spt" : metric == DistanceMetric::PROB ? "spp" : "sph";
  name += basis == DistanceBasis::SIMULATION ? "_d" : basis == DistanceBasis::MIT ? "_mit" : "_mtcit";
  return name;
}

// Proximity-to-seed heuristics. Simulation basis: average realized distance
// over the runs that reach a node (unreached runs are left out). Tree basis:
// distance along the node's MIT / MTCIT path. Smaller time and hop distances
// and larger probabilities rank first.
inline BoostSelection select_distance(const DirectedGraph& g, const SeedSet& seeds, TimeUnits horizon, std::size_t k,
                                      DistanceBasis basis, DistanceMetric metric, std::size_t runs,
                                      std::uint64_t rng_seed) {
  if (k < 1) throw ConfigError("boost set size k must be >= 1");
  seeds.validate_for(g);
  if (basis == DistanceBasis::MIT && metric == DistanceMetric::PROB) {
    // Probability ranking equals settle order; only k nodes are needed.
    const auto first = settle_first_mit(BoostedGraphView(g, BoostSpec{}), seeds, horizon, k);
    std::vector<NodeId> nodes;
    for (const auto& entry : first) nodes.push_back(entry.first);
    auto sel = top_k(g, nodes, k, [&](NodeId u) {
      return std::find_if(first.begin(), first.end(), [u](const auto& e) { return e.first == u; })->second;
    });
    sel.selector_name = distance_selector_name(basis, metric);
    return sel;
  }
  const std::size_t n = g.node_count();
  std::vector<double> score(n, 0.0);
  std::vector<NodeId> rankable;

  if (basis == DistanceBasis::SIMULATION) {
    if (runs < 1) throw ConfigError("number of simulations must be >= 1");
    const BoostedGraphView view(g, BoostSpec{});
    std::vector<std::int64_t> int_sum(n, 0);
    std::vector<double> prob_sum(n, 0.0);
    std::vector<std::uint32_t> reached(n, 0);
    std::vector<std::int32_t> hops(n, 0);
    std::vector<double> prob(n, 1.0);
    Simulator sim(n);
    for (std::size_t j = 0; j < runs; ++j) {
      sim.run(view, seeds.nodes(), horizon, derive_stream(rng_seed, j));
      for (NodeId u : sim.activated()) {
        const NodeId par = sim.parent(u);
        hops[u] = par == kNoNode ? 0 : hops[par] + 1;
        prob[u] = par == kNoNode ? 1.0 : prob[par] * g.prob(sim.parent_edge(u));
        ++reached[u];
        switch (metric) {
          case DistanceMetric::TIME: int_sum[u] += sim.time(u); break;
          case DistanceMetric::HOPS: int_sum[u] += hops[u]; break;
          case DistanceMetric::PROB: prob_sum[u] += prob[u]; break;
        }
      }
    }
    for (NodeId u = 0; u < n; ++u) {
      if (reached[u] == 0) continue;
      rankable.push_back(u);
      const double r = reached[u];
      score[u] = metric == DistanceMetric::PROB ? prob_sum[u] / r : -static_cast<double>(int_sum[u]) / r;
    }
  } else {
    const BoostedGraphView view(g, BoostSpec{});
    const RankKind rank = basis == DistanceBasis::MIT ? RankKind::PP : RankKind::APT_EXACT;
    TreeOptions options;
    if (metric == DistanceMetric::PROB) options.max_settled = k;
    const InfluenceTree tree = build_tree(view, seeds, horizon, rank, options);
    std::vector<double> time(tree.parent.size(), 0.0);
    for (NodeId u : tree.order) {
      rankable.push_back(u);
      const NodeId par = tree.parent[u];
      switch (metric) {
        case DistanceMetric::PROB: score[u] = tree.ap[u]; break;
        case DistanceMetric::HOPS: score[u] = -static_cast<double>(tree.depth[u] - 1); break;
        case DistanceMetric::TIME:
          if (par != tree.root)
            time[u] = time[par] + g.delay(par).conditional_mean(horizon).value_or(std::numeric_limits<double>::infinity());
          score[u] = -time[u];
          break;
      }
    }
  }
  auto sel = top_k(g, rankable, k, [&](NodeId u) { return score[u]; });
  sel.selector_name = distance_selector_name(basis, metric);
  return sel;
}

// Per-node count of runs in which the node activated within the horizon
// without activating anyone new.
inline std::vector<std::uint64_t> terminal_counts(const DirectedGraph& g, const SeedSet& seeds, TimeUnits horizon,
                                                  std::size_t runs, std::uint64_t rng_seed) {
  seeds.validate_for(g);
  const BoostedGraphView view(g, BoostSpec{});
  std::vector<std::uint64_t> terminal(g.node_count(), 0);
  Simulator sim(g.node_count());
  for (std::size_t j = 0; j < runs; ++j) {
    sim.run(view, seeds.nodes(), horizon, derive_stream(rng_seed, j));
    for (NodeId u : sim.activated())
      if (sim.spawned(u) == 0) ++terminal[u];
  }
  return terminal;
}

// Nodes at which simulated cascades most often stop.
inline BoostSelection select_last_node(const DirectedGraph& g, const SeedSet& seeds, TimeUnits horizon, std::size_t k,
                                       std::size_t runs, std::uint64_t rng_seed) {
  if (k < 1) throw ConfigError("boost set size k must be >= 1");
  if (runs < 1) throw ConfigError("number of simulations must be >= 1");
  const auto terminal = terminal_counts(g, seeds, horizon, runs, rng_seed);
  std::vector<NodeId> rankable;
  for (NodeId u = 0; u < g.node_count(); ++u)
    if (terminal[u] > 0) rankable.push_back(u);
  auto sel = top_k(g, rankable, k, [&](NodeId u) { return static_cast<double>(terminal[u]); });
  sel.selector_name = "last_node";
  return sel;
}

enum class BaselineKind { RANDOM, TOP_DEGREE };

inline BoostSelection select_baseline(const DirectedGraph& g, const SeedSet& seeds, TimeUnits horizon, std::size_t k,
                                      BaselineKind kind, std::uint64_t rng_seed) {
  std::vector<NodeId> pool = candidate_set(g, seeds, horizon);
  BoostSelection sel;
  if (kind == BaselineKind::TOP_DEGREE) {
    sel = top_k(g, pool, k, [&](NodeId u) { return static_cast<double>(g.out_degree(u)); });
    sel.selector_name = "top_degree";
    sel.warning.clear();
    return sel;
  }
  // Partial Fisher-Yates on the candidate list.
  SplitMix64 rng(rng_seed);
  const std::size_t take = std::min(k, pool.size());
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
    sel.push(pool[i], 0.0);
  }
  sel.selector_name = "random";
  return sel;
}

}  // namespace tcboost
