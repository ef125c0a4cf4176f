#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "tcboost/boost/boost.hpp"
#include "tcboost/core/graph.hpp"
#include "tcboost/paths/independent_paths.hpp"
#include "tcboost/selectors/selection.hpp"

namespace tcboost {

// g(u) = sum over targets w of ap'(w) - ap(w), where ap' re-ranks every path of
// w that passes through u (u not the target) with u boosted.
inline std::vector<double> independent_path_gains(const IndependentPathSet& set, const BoostedGraphView& view,
                                                  BoostedDelayCache& boosted_delay) {
  std::vector<double> gain(view.node_count(), 0.0);
  std::vector<NodeId> through;
  for (NodeId w = 0; w < set.paths.size(); ++w) {
    const auto& paths = set.paths[w];
    if (paths.empty()) continue;
    const double base = ap_from_paths(paths);
    through.clear();
    for (const auto& path : paths)
      for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i)
        if (!view.is_boosted(path.nodes[i])) through.push_back(path.nodes[i]);
    std::sort(through.begin(), through.end());
    through.erase(std::unique(through.begin(), through.end()), through.end());
    for (NodeId u : through) {
      const ExtraBoostView<BoostedGraphView> with_u(view, u, boosted_delay.get(u));
      double miss = 1.0;
      for (const auto& path : paths) {
        const bool uses_u = std::find(path.nodes.begin(), path.nodes.end() - 1, u) != path.nodes.end() - 1;
        const double rank = uses_u ? rank_path(with_u, path, set.rm_kind, set.horizon) : path.rank;
        miss *= 1.0 - rank;
      }
      gain[u] += (1.0 - miss) - base;
    }
  }
  return gain;
}

// Re-ranks every stored path under `view`; path node sequences are kept.
inline void rerank_paths(IndependentPathSet& set, const BoostedGraphView& view) {
  for (auto& paths : set.paths)
    for (auto& path : paths) path.rank = rank_path(view, path, set.rm_kind, set.horizon);
}

inline const char* independent_paths_selector_name(RankKind rm) {
  switch (rm) {
    case RankKind::PP: return "miips";
    case RankKind::APT_FAST: return "fast_tmiips";
    case RankKind::APT_EXACT: return "tmiips";
  }
  return "miips";
}

inline BoostSelection select_miips(const DirectedGraph& g, const SeedSet& seeds, TimeUnits horizon, std::size_t k,
                                   std::size_t lambda, BoostSpec spec, RankKind rm,
                                   std::size_t workers = default_workers()) {
  if (k < 1) throw ConfigError("boost set size k must be >= 1");
  BoostedGraphView view(g, spec);
  BoostedDelayCache boosted_delay(g, spec);
  IndependentPathSet set = build_independent_paths(view, seeds, lambda, rm, horizon, workers);
  rerank_paths(set, view);
  std::vector<NodeId> on_paths;
  for (NodeId w = 0; w < set.paths.size(); ++w)
    if (!set.paths[w].empty()) on_paths.push_back(w);

  BoostSelection sel;
  sel.selector_name = independent_paths_selector_name(rm);
  for (std::size_t round = 0; round < k; ++round) {
    const std::vector<double> gain = independent_path_gains(set, view, boosted_delay);
    const NodeId u = best_candidate(g, on_paths, [&](NodeId x) { return gain[x]; },
                                    [&](NodeId x) { return view.is_boosted(x); });
    if (u == kNoNode) break;
    sel.push(u, gain[u]);
    view.add(u);
    rerank_paths(set, view);
  }
  if (sel.nodes.size() < k)
    sel.warning = "only " + std::to_string(sel.nodes.size()) + " of " + std::to_string(k) + " nodes could be selected";
  return sel;
}

}  // namespace tcboost
