#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

#include "tcboost/core/graph.hpp"
#include "tcboost/paths/convolution.hpp"
#include "tcboost/paths/influence_tree.hpp"
#include "tcboost/sim/simulate.hpp"

namespace tcboost {

// A path from a seed to its target; the virtual root is implicit.
struct RankedPath {
  std::vector<NodeId> nodes;  // seed first, target last
  std::vector<EdgeId> edges;  // edges[i] joins nodes[i] -> nodes[i+1]
  double rank = 0.0;
};

// Up to `lambda` interior-disjoint paths per target node, in the order found.
struct IndependentPathSet {
  std::size_t lambda = 0;
  RankKind rm_kind = RankKind::PP;
  TimeUnits horizon = 0;
  std::vector<std::vector<RankedPath>> paths;  // indexed by target node

  std::span<const RankedPath> of(NodeId w) const noexcept { return paths[w]; }
};

// Rank of a fixed node sequence under `view`.
template <typename View>
double rank_path(const View& view, const RankedPath& path, RankKind rm, TimeUnits horizon) {
  const std::size_t len = path.nodes.size();
  double pp = 1.0;
  for (std::size_t i = 0; i + 1 < len; ++i) pp = pp * view.prob(path.nodes[i], path.edges[i]);
  if (len == 1) return horizon >= 0 ? 1.0 : 0.0;
  switch (rm) {
    case RankKind::PP: {
      TimeUnits t_min = 0;
      for (std::size_t i = 0; i + 1 < len; ++i) {
        const auto m = view.delay(path.nodes[i]).min_support();
        if (!m) return 0.0;
        t_min += *m;
      }
      return t_min <= horizon ? pp : 0.0;
    }
    case RankKind::APT_EXACT: {
      if (horizon < 0) return 0.0;
      TimeDistribution dist = point_mass_at_zero(horizon);
      for (std::size_t i = 0; i + 1 < len; ++i) dist = convolve_truncated(dist, view.delay(path.nodes[i]));
      return pp * total_mass(dist);
    }
    case RankKind::APT_FAST: return pp * fast_path_time_prob(view.delay(path.nodes[len - 2]), len, horizon);
  }
  return 0.0;
}

inline RankedPath extract_path(const InfluenceTree& tree, NodeId w) {
  RankedPath path;
  path.nodes = tree.path_to(w);
  for (std::size_t i = 1; i < path.nodes.size(); ++i) path.edges.push_back(tree.parent_edge[path.nodes[i]]);
  path.rank = tree.ap[w];
  return path;
}

// For every node reachable under the ranking, finds up to `lambda` best
// paths from the seeds, each avoiding the interior nodes of the earlier ones.
// Seeds get the single trivial path of rank 1.
template <typename View>
IndependentPathSet build_independent_paths(const View& view, const SeedSet& seeds, std::size_t lambda, RankKind rm,
                                           TimeUnits horizon, std::size_t workers = default_workers()) {
  if (lambda < 1) throw ConfigError("number of independent paths must be >= 1");
  const std::size_t n = view.node_count();
  IndependentPathSet set;
  set.lambda = lambda;
  set.rm_kind = rm;
  set.horizon = horizon;
  set.paths.assign(n, {});

  const InfluenceTree first = build_tree(view, seeds, horizon, rm);
  std::vector<NodeId> targets;
  for (NodeId w : first.order) {
    set.paths[w].push_back(extract_path(first, w));
    if (!seeds.contains(w)) targets.push_back(w);
  }
  if (lambda == 1) return set;

  parallel_chunks(targets.size(), workers, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<char> removed(n, 0);
    std::vector<char> removed_edges(view.edge_count(), 0);
    for (std::size_t i = begin; i < end; ++i) {
      const NodeId w = targets[i];
      auto& found = set.paths[w];
      while (found.size() < lambda) {
        const RankedPath& last = found.back();
        for (NodeId x : last.nodes)
          if (x != w && !seeds.contains(x)) removed[x] = 1;
        // A direct seed edge has no interior to remove.
        if (last.edges.size() == 1) removed_edges[last.edges.front()] = 1;
        TreeOptions options;
        options.removed = &removed;
        options.removed_edges = &removed_edges;
        options.stop_at = w;
        const InfluenceTree tree = build_tree(view, seeds, horizon, rm, options);
        if (!tree.contains(w)) break;
        found.push_back(extract_path(tree, w));
      }
      for (const auto& path : found) {
        for (NodeId x : path.nodes) removed[x] = 0;
        if (path.edges.size() == 1) removed_edges[path.edges.front()] = 0;
      }
    }
  });
  return set;
}

// 1 - prod(1 - rank) over the paths of `w`; 0 with no paths.
inline double ap_from_paths(std::span<const RankedPath> paths) {
  double miss = 1.0;
  for (const auto& p : paths) miss *= 1.0 - p.rank;
  return paths.empty() ? 0.0 : 1.0 - miss;
}

inline double ap_from_paths(const IndependentPathSet& set, NodeId w) { return ap_from_paths(set.of(w)); }

}  // namespace tcboost
