#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tcboost/core/delay.hpp"
#include "tcboost/core/graph.hpp"
#include "tcboost/paths/convolution.hpp"

namespace tcboost {

inline constexpr EdgeId kNoEdge = static_cast<EdgeId>(-1);

// Path ranking used when growing trees and independent paths.
enum class RankKind {
  PP,         // propagation probability, paths with t_min > T rejected
  APT_EXACT,  // pp * P(path time <= T), by truncated convolution
  APT_FAST,   // pp * single-variable approximation of P(path time <= T)
};

enum class TreeKind { MIT, MTCIT };

inline std::string_view to_string(RankKind r) {
  switch (r) {
    case RankKind::PP: return "pp";
    case RankKind::APT_EXACT: return "apt_exact";
    case RankKind::APT_FAST: return "apt_fast";
  }
  return "?";
}

// Most-probable-path tree rooted at the virtual seed. The virtual seed is the
// extra index node_count of the underlying graph; it has probability-1,
// zero-delay edges to every seed.
struct InfluenceTree {
  TreeKind kind = TreeKind::MIT;
  RankKind rank = RankKind::PP;
  NodeId root = kNoNode;
  TimeUnits horizon = 0;
  std::vector<NodeId> parent;      // kNoNode for root and for nodes outside the tree
  std::vector<EdgeId> parent_edge;  // kNoEdge for seeds (virtual edge) and root
  std::vector<double> edge_prob;    // effective probability of the parent edge
  std::vector<double> pp;           // product of edge probabilities from the root
  std::vector<double> ap;           // activation probability
  std::vector<TimeUnits> depth;     // root 0, seeds 1
  std::vector<TimeUnits> t_min;     // minimum accumulated delay along the root path
  std::vector<TimeDistribution> time_dist;  // MTCIT: arrival-time distribution, truncated at horizon
  std::vector<NodeId> order;        // settle order, root excluded

  std::vector<std::uint32_t> child_offsets;
  std::vector<NodeId> child_nodes;

  bool contains(NodeId u) const noexcept { return u == root || (u < parent.size() && parent[u] != kNoNode); }
  std::size_t size() const noexcept { return order.size(); }

  // Tree height: maximum root distance in hops.
  TimeUnits height() const noexcept {
    TimeUnits h = 0;
    for (NodeId u : order) h = std::max(h, depth[u]);
    return h;
  }

  // Sum of activation probabilities over real nodes.
  double spread() const noexcept {
    double s = 0.0;
    for (NodeId u : order) s += ap[u];
    return s;
  }

  std::span<const NodeId> children(NodeId u) const noexcept {
    return {child_nodes.data() + child_offsets[u], child_offsets[u + 1] - child_offsets[u]};
  }

  // Root path of `w` as a node sequence starting with the first seed node
  // (the virtual root omitted).
  std::vector<NodeId> path_to(NodeId w) const {
    std::vector<NodeId> path;
    for (NodeId x = w; x != root && x != kNoNode; x = parent[x]) path.push_back(x);
    std::reverse(path.begin(), path.end());
    return path;
  }

  void build_children() {
    const std::size_t slots = parent.size();
    child_offsets.assign(slots + 1, 0);
    for (NodeId u : order) ++child_offsets[parent[u] + 1];
    for (std::size_t i = 0; i < slots; ++i) child_offsets[i + 1] += child_offsets[i];
    child_nodes.assign(order.size(), kNoNode);
    std::vector<std::uint32_t> cursor(child_offsets.begin(), child_offsets.end() - 1);
    for (NodeId u : order) child_nodes[cursor[parent[u]]++] = u;
  }
};

struct TreeOptions {
  // Stop after this many real nodes have settled.
  std::size_t max_settled = std::numeric_limits<std::size_t>::max();
  // Nodes that may not enter the tree (seeds are never excluded).
  const std::vector<char>* removed = nullptr;
  // Edges that may not be relaxed, indexed by EdgeId.
  const std::vector<char>* removed_edges = nullptr;
  // Stop as soon as this node settles.
  NodeId stop_at = kNoNode;
};

namespace detail {

struct HeapEntry {
  double key;
  std::size_t out_degree;
  NodeId node;

  // Max-heap order: larger key, then larger out-degree, then smaller id.
  friend bool operator<(const HeapEntry& a, const HeapEntry& b) noexcept {
    return std::tie(a.key, a.out_degree, b.node) < std::tie(b.key, b.out_degree, a.node);
  }
};

}  // namespace detail

// Best-first growth of a tree from the virtual seed. A node settles with the
// tentative path of largest rank; its children are then offered paths through
// it. With PP and APT_EXACT the rank never increases along an extension, so
// settled paths are prefix-optimal.
template <typename View>
InfluenceTree build_tree(const View& view, const SeedSet& seeds, TimeUnits horizon, RankKind rank,
                         const TreeOptions& options = {}) {
  seeds.validate_for(view.graph());
  const std::size_t n = view.node_count();
  const auto root = static_cast<NodeId>(n);

  InfluenceTree tree;
  tree.kind = rank == RankKind::APT_EXACT ? TreeKind::MTCIT : TreeKind::MIT;
  tree.rank = rank;
  tree.root = root;
  tree.horizon = horizon;
  tree.parent.assign(n + 1, kNoNode);
  tree.parent_edge.assign(n + 1, kNoEdge);
  tree.edge_prob.assign(n + 1, 0.0);
  tree.pp.assign(n + 1, 0.0);
  tree.ap.assign(n + 1, 0.0);
  tree.depth.assign(n + 1, 0);
  tree.t_min.assign(n + 1, 0);
  if (rank == RankKind::APT_EXACT) tree.time_dist.assign(n + 1, {});
  tree.pp[root] = tree.ap[root] = 1.0;

  std::vector<double> best(n, 0.0);
  std::vector<char> settled(n, 0);
  std::vector<NodeId> tentative_parent(n, kNoNode);
  std::vector<EdgeId> tentative_edge(n, kNoEdge);
  // Arrival-time distribution of the children of each settled node (MTCIT).
  std::vector<TimeDistribution> arrival;
  if (rank == RankKind::APT_EXACT) arrival.assign(n + 1, {});
  std::priority_queue<detail::HeapEntry> heap;

  auto removed = [&](NodeId v) { return options.removed && (*options.removed)[v] && !seeds.contains(v); };

  for (NodeId s : seeds) {
    best[s] = 1.0;
    tentative_parent[s] = root;
    heap.push({1.0, view.out_degree(s), s});
  }
  if (rank == RankKind::APT_EXACT) arrival[root] = point_mass_at_zero(std::max<TimeUnits>(horizon, 0));

  std::size_t settled_count = 0;
  while (!heap.empty() && settled_count < options.max_settled) {
    const auto top = heap.top();
    heap.pop();
    const NodeId u = top.node;
    if (settled[u] || top.key != best[u]) continue;
    settled[u] = 1;
    ++settled_count;

    const NodeId par = tentative_parent[u];
    tree.parent[u] = par;
    tree.parent_edge[u] = tentative_edge[u];
    tree.edge_prob[u] = par == root ? 1.0 : view.prob(par, tentative_edge[u]);
    tree.pp[u] = tree.pp[par] * tree.edge_prob[u];
    tree.depth[u] = tree.depth[par] + 1;
    tree.t_min[u] = par == root ? 0 : tree.t_min[par] + view.delay(par).min_support().value_or(0);
    tree.ap[u] = top.key;
    if (rank == RankKind::APT_EXACT) tree.time_dist[u] = arrival[par];
    tree.order.push_back(u);
    if (u == options.stop_at) break;

    const DelayPmf& pmf = view.delay(u);
    const auto min_delay = pmf.min_support();
    if (!min_delay || tree.t_min[u] + *min_delay > horizon) continue;

    double time_factor = 1.0;
    if (rank == RankKind::APT_EXACT) {
      arrival[u] = convolve_truncated(tree.time_dist[u], pmf);
      time_factor = total_mass(arrival[u]);
    } else if (rank == RankKind::APT_FAST) {
      // Children sit at depth(u)+1, i.e. on a path of depth(u)+1 real nodes.
      time_factor = fast_path_time_prob(pmf, static_cast<std::size_t>(tree.depth[u]) + 1, horizon);
    }
    if (time_factor <= 0.0) continue;

    for (EdgeId e = view.edges_begin(u); e < view.edges_end(u); ++e) {
      const NodeId v = view.target(e);
      if (settled[v] || removed(v)) continue;
      if (options.removed_edges && (*options.removed_edges)[e]) continue;
      const double p = view.prob(u, e);
      if (p <= 0.0) continue;
      const double key = tree.pp[u] * p * time_factor;
      if (key > best[v]) {
        best[v] = key;
        tentative_parent[v] = u;
        tentative_edge[v] = e;
        heap.push({key, view.out_degree(v), v});
      }
    }
  }
  tree.build_children();
  return tree;
}

// Maximum influence tree: most probable paths with t_min <= horizon.
template <typename View>
InfluenceTree build_mit(const View& view, const SeedSet& seeds, TimeUnits horizon, const TreeOptions& options = {}) {
  return build_tree(view, seeds, horizon, RankKind::PP, options);
}

// First `count` nodes a PP build_tree would settle, with their ap, in settle
// order. State is kept sparse so the cost does not grow with the graph.
template <typename View>
std::vector<std::pair<NodeId, double>> settle_first_mit(const View& view, const SeedSet& seeds, TimeUnits horizon,
                                                         std::size_t count) {
  seeds.validate_for(view.graph());
  struct State {
    double best = 0.0;
    TimeUnits t_min = 0;
    bool settled = false;
  };
  std::unordered_map<NodeId, State> state;
  std::priority_queue<detail::HeapEntry> heap;
  for (NodeId s : seeds) {
    state[s].best = 1.0;
    heap.push({1.0, view.out_degree(s), s});
  }
  std::vector<std::pair<NodeId, double>> out;
  while (!heap.empty() && out.size() < count) {
    const auto top = heap.top();
    heap.pop();
    State& su = state[top.node];
    if (su.settled || top.key != su.best) continue;
    su.settled = true;
    out.emplace_back(top.node, top.key);

    const auto min_delay = view.delay(top.node).min_support();
    if (!min_delay || su.t_min + *min_delay > horizon) continue;
    const TimeUnits child_t_min = su.t_min + *min_delay;
    const double pp = su.best;
    for (EdgeId e = view.edges_begin(top.node); e < view.edges_end(top.node); ++e) {
      const NodeId v = view.target(e);
      const double p = view.prob(top.node, e);
      if (p <= 0.0) continue;
      State& sv = state[v];
      if (sv.settled) continue;
      const double key = pp * p;
      if (key > sv.best) {
        sv.best = key;
        sv.t_min = child_t_min;
        heap.push({key, view.out_degree(v), v});
      }
    }
  }
  return out;
}

// Maximum time-constrained influence tree: paths ranked by pp * p_T.
template <typename View>
InfluenceTree build_mtcit(const View& view, const SeedSet& seeds, TimeUnits horizon, const TreeOptions& options = {}) {
  return build_tree(view, seeds, horizon, RankKind::APT_EXACT, options);
}

}  // namespace tcboost
