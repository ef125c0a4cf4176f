#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "tcboost/boost/boost.hpp"
#include "tcboost/core/graph.hpp"
#include "tcboost/core/rng.hpp"
#include "tcboost/selectors/selection.hpp"
#include "tcboost/sim/exact.hpp"
#include "tcboost/sim/simulate.hpp"

namespace tcboost {

// Marginal gains of boosting each candidate on top of `boosted`, indexed by
// node id (entries for non-candidates are ignored).
using GainOracle = std::function<std::vector<double>(std::span<const NodeId> boosted, std::span<const NodeId> candidates,
                                                     std::size_t round)>;

// Generic greedy over a gain oracle. `batch` evaluates a single round against
// the empty boost set and keeps the top k.
inline BoostSelection greedy_loop(const DirectedGraph& g, std::span<const NodeId> candidates, std::size_t k, bool batch,
                                  const GainOracle& oracle) {
  if (k < 1) throw ConfigError("boost set size k must be >= 1");
  if (candidates.empty()) {
    BoostSelection sel;
    sel.warning = "candidate set is empty";
    return sel;
  }
  if (batch) {
    const std::vector<double> gain = oracle({}, candidates, 0);
    return top_k(g, candidates, k, [&](NodeId u) { return gain[u]; });
  }
  BoostSelection sel;
  std::vector<char> in_set(g.node_count(), 0);
  for (std::size_t round = 0; round < k; ++round) {
    std::vector<NodeId> remaining;
    for (NodeId u : candidates)
      if (!in_set[u]) remaining.push_back(u);
    if (remaining.empty()) break;
    const std::vector<double> gain = oracle(sel.nodes, remaining, round);
    const NodeId u = best_candidate(g, remaining, [&](NodeId x) { return gain[x]; }, [](NodeId) { return false; });
    in_set[u] = 1;
    sel.push(u, gain[u]);
  }
  if (sel.nodes.size() < k)
    sel.warning = "only " + std::to_string(sel.nodes.size()) + " of " + std::to_string(k) + " nodes could be selected";
  return sel;
}

// Monte Carlo gain oracle with common random numbers: in round r every
// candidate is evaluated on the same R worlds (stream derive_stream(seed_r, j)).
// Boosting u only changes draws on u's out-edges, so in a world where u is not
// active under the current boost set its gain is exactly zero; only the active
// candidates of each world are re-simulated.
inline GainOracle monte_carlo_gain_oracle(const DirectedGraph& g, const SeedSet& seeds, TimeUnits horizon,
                                          std::size_t runs, BoostSpec spec, std::uint64_t rng_seed,
                                          std::size_t workers = default_workers()) {
  if (runs < 1) throw ConfigError("number of simulations must be >= 1");
  auto cache = std::make_shared<BoostedDelayCache>(g, spec);
  return [&g, seeds, horizon, runs, spec, rng_seed, workers, cache](std::span<const NodeId> boosted,
                                                                    std::span<const NodeId> candidates,
                                                                    std::size_t round) {
    const std::size_t n = g.node_count();
    BoostedGraphView view(g, boosted, spec);
    std::vector<char> is_candidate(n, 0);
    for (NodeId u : candidates) is_candidate[u] = 1;
    cache->prepare(candidates);
    const std::uint64_t round_seed = derive_stream(rng_seed, 0x9000 + round);

    const std::size_t chunks = std::max<std::size_t>(1, std::min(workers, runs));
    std::vector<std::vector<std::int64_t>> partial(chunks, std::vector<std::int64_t>(n, 0));
    parallel_chunks(runs, chunks, [&](std::size_t w, std::size_t begin, std::size_t end) {
      Simulator base(n), alt(n);
      std::vector<NodeId> active;
      auto& acc = partial[w];
      for (std::size_t j = begin; j < end; ++j) {
        const std::uint64_t key = derive_stream(round_seed, j);
        const auto count = static_cast<std::int64_t>(base.run(view, seeds.nodes(), horizon, key));
        active.assign(base.activated().begin(), base.activated().end());
        for (NodeId u : active) {
          if (!is_candidate[u]) continue;
          const ExtraBoostView<BoostedGraphView> with_u(view, u, cache->at(u));
          acc[u] += static_cast<std::int64_t>(alt.run(with_u, seeds.nodes(), horizon, key)) - count;
        }
      }
    });
    std::vector<double> gain(n, 0.0);
    for (NodeId u : candidates) {
      std::int64_t total = 0;
      for (const auto& p : partial) total += p[u];
      gain[u] = static_cast<double>(total) / static_cast<double>(runs);
    }
    return gain;
  };
}

// Gain oracle backed by exact enumeration; only for tiny graphs.
inline GainOracle exact_gain_oracle(const DirectedGraph& g, const SeedSet& seeds, TimeUnits horizon, BoostSpec spec) {
  return [&g, seeds, horizon, spec](std::span<const NodeId> boosted, std::span<const NodeId> candidates, std::size_t) {
    BoostedGraphView view(g, boosted, spec);
    const double base = exact_spread(view, seeds, horizon).mean;
    std::vector<double> gain(g.node_count(), 0.0);
    for (NodeId u : candidates) {
      BoostedGraphView with_u = view;
      with_u.add(u);
      gain[u] = exact_spread(with_u, seeds, horizon).mean - base;
    }
    return gain;
  };
}

// Simulation-based greedy restricted to the candidate set V^c.
inline BoostSelection select_greedy(const DirectedGraph& g, const SeedSet& seeds, TimeUnits horizon, std::size_t k,
                                    std::size_t runs, BoostSpec spec, std::uint64_t rng_seed,
                                    std::size_t workers = default_workers()) {
  const auto candidates = candidate_set(g, seeds, horizon);
  auto sel = greedy_loop(g, candidates, k, false, monte_carlo_gain_oracle(g, seeds, horizon, runs, spec, rng_seed, workers));
  sel.selector_name = "greedy";
  return sel;
}

inline BoostSelection select_greedy_batch(const DirectedGraph& g, const SeedSet& seeds, TimeUnits horizon,
                                          std::size_t k, std::size_t runs, BoostSpec spec, std::uint64_t rng_seed,
                                          std::size_t workers = default_workers()) {
  const auto candidates = candidate_set(g, seeds, horizon);
  auto sel = greedy_loop(g, candidates, k, true, monte_carlo_gain_oracle(g, seeds, horizon, runs, spec, rng_seed, workers));
  sel.selector_name = "greedy_batch";
  return sel;
}

}  // namespace tcboost
