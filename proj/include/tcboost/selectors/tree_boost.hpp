#pragma once

#include <span>
#include <vector>

#include "tcboost/boost/boost.hpp"
#include "tcboost/core/graph.hpp"
#include "tcboost/paths/convolution.hpp"
#include "tcboost/paths/influence_tree.hpp"
#include "tcboost/selectors/selection.hpp"

namespace tcboost {

// Sum of ap over the subtree of every node (the node itself included).
inline std::vector<double> subtree_ap_sums(const InfluenceTree& tree) {
  std::vector<double> sum(tree.parent.size(), 0.0);
  for (auto it = tree.order.rbegin(); it != tree.order.rend(); ++it) {
    const NodeId u = *it;
    sum[u] += tree.ap[u];
    sum[tree.parent[u]] += sum[u];
  }
  return sum;
}

// Gain of boosting each tree node under the single-path model, in one
// bottom-up pass:
//   g(u) = sum over children v of (p'_uv / p_uv - 1) * (ap of v's subtree).
// Entries for the root and nodes outside the tree are 0.
inline std::vector<double> mit_gains(const InfluenceTree& tree, double b) {
  const std::vector<double> sums = subtree_ap_sums(tree);
  std::vector<double> gain(tree.parent.size(), 0.0);
  for (NodeId v : tree.order) {
    const NodeId u = tree.parent[v];
    if (u == tree.root) continue;
    const double p = tree.edge_prob[v];
    gain[u] += (boost_edge_prob(p, b) / p - 1.0) * sums[v];
  }
  gain[tree.root] = 0.0;
  return gain;
}

// Multiplies the ap of u's subtree by the boost ratio of each child edge and
// records the boosted edge probabilities; the tree shape is kept.
inline void rescale_boosted_subtree(InfluenceTree& tree, NodeId u, double b) {
  std::vector<NodeId> stack;
  for (NodeId c : tree.children(u)) {
    const double p = tree.edge_prob[c];
    const double ratio = boost_edge_prob(p, b) / p;
    tree.edge_prob[c] = boost_edge_prob(p, b);
    stack.assign(1, c);
    while (!stack.empty()) {
      const NodeId x = stack.back();
      stack.pop_back();
      tree.pp[x] *= ratio;
      tree.ap[x] *= ratio;
      for (NodeId y : tree.children(x)) stack.push_back(y);
    }
  }
}

inline BoostSelection select_moboo(const DirectedGraph& g, const SeedSet& seeds, TimeUnits horizon, std::size_t k,
                                   BoostSpec spec, bool rebuild = false) {
  if (k < 1) throw ConfigError("boost set size k must be >= 1");
  BoostedGraphView view(g, spec);
  InfluenceTree tree = build_mit(view, seeds, horizon);
  BoostSelection sel;
  sel.selector_name = rebuild ? "moboo_rebuild" : "moboo";
  std::vector<char> in_set(g.node_count(), 0);
  for (std::size_t round = 0; round < k; ++round) {
    const std::vector<double> gain = mit_gains(tree, spec.b);
    const NodeId u = best_candidate(g, tree.order, [&](NodeId x) { return gain[x]; }, [&](NodeId x) { return in_set[x] != 0; });
    if (u == kNoNode) break;
    in_set[u] = 1;
    sel.push(u, gain[u]);
    view.add(u);
    if (rebuild)
      tree = build_mit(view, seeds, horizon);
    else
      rescale_boosted_subtree(tree, u, spec.b);
  }
  if (sel.nodes.size() < k)
    sel.warning = "only " + std::to_string(sel.nodes.size()) + " of " + std::to_string(k) + " nodes could be selected";
  return sel;
}

// Per-node time factor of the tree's ap under the chosen p_T evaluation:
// exact mass of time_dist, or the single-variable approximation.
template <typename View>
double tree_time_factor(const InfluenceTree& tree, const View& view, NodeId w, bool exact_pT) {
  if (exact_pT) return total_mass(tree.time_dist[w]);
  if (tree.depth[w] <= 1) return 1.0;
  return fast_path_time_prob(view.delay(tree.parent[w]), static_cast<std::size_t>(tree.depth[w]), tree.horizon);
}

// Time-aware gains on an MTCIT: for every node w and every proper ancestor u
// on its root path, g(u) += ap'_T(P_w) - ap_T(P_w), where ap' lifts u's edge on
// the path and uses u's boosted delay pmf. Exact mode splits the path time at
// u: prefix arrival at u (stored), u's delay, and the suffix of delays between
// u and w accumulated while walking up.
template <typename View>
std::vector<double> mtcit_gains(const InfluenceTree& tree, const View& view, BoostedDelayCache& boosted_delay,
                                bool exact_pT) {
  const std::size_t slots = tree.parent.size();
  const TimeUnits horizon = tree.horizon;
  const double b = view.spec().b;
  std::vector<double> gain(slots, 0.0);

  std::vector<TimeDistribution> boosted_arrival;
  if (exact_pT) {
    boosted_arrival.assign(slots, {});
    for (NodeId u : tree.order)
      if (!view.is_boosted(u)) boosted_arrival[u] = convolve_truncated(tree.time_dist[u], boosted_delay.get(u));
  }

  std::vector<double> suffix_cdf(static_cast<std::size_t>(horizon) + 1);
  for (NodeId w : tree.order) {
    if (tree.depth[w] <= 1) continue;
    const double base_factor = tree_time_factor(tree, view, w, exact_pT);
    const double base = tree.pp[w] * base_factor;
    TimeDistribution suffix = point_mass_at_zero(horizon);
    NodeId child = w;
    for (NodeId u = tree.parent[w]; u != tree.root; child = u, u = tree.parent[u]) {
      if (!view.is_boosted(u)) {
        const double p = tree.edge_prob[child];
        const double pp_boosted = tree.pp[w] * (boost_edge_prob(p, b) / p);
        double factor = base_factor;
        if (exact_pT) {
          double acc = 0.0;
          for (std::size_t t = 0; t < suffix.size(); ++t) acc += suffix[t], suffix_cdf[t] = acc;
          const auto& arrival = boosted_arrival[u];
          factor = 0.0;
          for (std::size_t a = 0; a < arrival.size(); ++a) factor += arrival[a] * suffix_cdf[suffix.size() - 1 - a];
        } else if (u == tree.parent[w]) {
          factor = fast_path_time_prob(boosted_delay.get(u), static_cast<std::size_t>(tree.depth[w]), horizon);
        }
        gain[u] += pp_boosted * factor - base;
      }
      if (exact_pT) suffix = convolve_truncated(suffix, view.delay(u));
    }
  }
  gain[tree.root] = 0.0;
  return gain;
}

// Recomputes pp, time_dist and ap below a freshly boosted node `u`, keeping
// the tree shape. `view` must already include u.
template <typename View>
void refresh_boosted_subtree(InfluenceTree& tree, const View& view, NodeId u) {
  const double b = view.spec().b;
  for (NodeId c : tree.children(u)) tree.edge_prob[c] = boost_edge_prob(tree.edge_prob[c], b);
  std::vector<NodeId> stack(tree.children(u).begin(), tree.children(u).end());
  while (!stack.empty()) {
    const NodeId x = stack.back();
    stack.pop_back();
    const NodeId par = tree.parent[x];
    tree.pp[x] = tree.pp[par] * tree.edge_prob[x];
    tree.time_dist[x] = convolve_truncated(tree.time_dist[par], view.delay(par));
    tree.ap[x] = tree.pp[x] * total_mass(tree.time_dist[x]);
    for (NodeId y : tree.children(x)) stack.push_back(y);
  }
}

inline BoostSelection select_tmoboo(const DirectedGraph& g, const SeedSet& seeds, TimeUnits horizon, std::size_t k,
                                    BoostSpec spec, bool exact_pT = true) {
  if (k < 1) throw ConfigError("boost set size k must be >= 1");
  BoostedGraphView view(g, spec);
  BoostedDelayCache boosted_delay(g, spec);
  InfluenceTree tree = build_mtcit(view, seeds, horizon);
  BoostSelection sel;
  sel.selector_name = exact_pT ? "tmoboo" : "fast_tmoboo";
  for (std::size_t round = 0; round < k; ++round) {
    const std::vector<double> gain = mtcit_gains(tree, view, boosted_delay, exact_pT);
    const NodeId u = best_candidate(g, tree.order, [&](NodeId x) { return gain[x]; },
                                    [&](NodeId x) { return view.is_boosted(x); });
    if (u == kNoNode) break;
    sel.push(u, gain[u]);
    view.add(u);
    refresh_boosted_subtree(tree, view, u);
  }
  if (sel.nodes.size() < k)
    sel.warning = "only " + std::to_string(sel.nodes.size()) + " of " + std::to_string(k) + " nodes could be selected";
  return sel;
}

}  // namespace tcboost
