#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <vector>

#include "tcboost/boost/boost.hpp"
#include "tcboost/core/graph.hpp"

namespace tcboost {

// Ordered boost set with the estimated gain of each step.
struct BoostSelection {
  std::vector<NodeId> nodes;
  std::vector<double> step_gain;
  std::string selector_name;
  double elapsed_ms = 0.0;
  std::string warning;  // nonempty when fewer than k nodes could be chosen

  void push(NodeId u, double gain) {
    nodes.push_back(u);
    step_gain.push_back(gain);
  }
  bool contains(NodeId u) const noexcept { return std::find(nodes.begin(), nodes.end(), u) != nodes.end(); }
};

// Scores closer than this (relative to their magnitude) are ties.
inline constexpr double kScoreTieTolerance = 1e-12;

// Total preference order: higher score, then larger out-degree, then
// smaller id.
inline bool preferred(double score_a, std::size_t degree_a, NodeId a, double score_b, std::size_t degree_b, NodeId b) {
  const double scale = std::max({1.0, std::abs(score_a), std::abs(score_b)});
  if (std::abs(score_a - score_b) > kScoreTieTolerance * scale) return score_a > score_b;
  if (degree_a != degree_b) return degree_a > degree_b;
  return a < b;
}

// Best node of `candidates` under `score`, skipping `excluded`; kNoNode if
// none is eligible.
template <typename ScoreFn, typename ExcludedFn>
NodeId best_candidate(const DirectedGraph& g, std::span<const NodeId> candidates, ScoreFn&& score,
                      ExcludedFn&& excluded) {
  NodeId best = kNoNode;
  double best_score = 0.0;
  for (NodeId u : candidates) {
    if (excluded(u)) continue;
    const double s = score(u);
    if (best == kNoNode || preferred(s, g.out_degree(u), u, best_score, g.out_degree(best), best)) {
      best = u;
      best_score = s;
    }
  }
  return best;
}

// Top `k` of `candidates` under `score` by repeated best-candidate scans, so
// the tie rule applies identically to single picks and batches.
template <typename ScoreFn>
BoostSelection top_k(const DirectedGraph& g, std::span<const NodeId> candidates, std::size_t k, ScoreFn&& score) {
  BoostSelection sel;
  for (std::size_t i = 0; i < k; ++i) {
    const NodeId u = best_candidate(g, candidates, score, [&](NodeId x) { return sel.contains(x); });
    if (u == kNoNode) break;
    sel.push(u, score(u));
  }
  if (sel.nodes.size() < k)
    sel.warning = "only " + std::to_string(sel.nodes.size()) + " of " + std::to_string(k) + " nodes could be selected";
  return sel;
}

// Boosted delay pmfs computed on first use.
class BoostedDelayCache {
 public:
  BoostedDelayCache(const DirectedGraph& g, BoostSpec spec) : graph_(&g), spec_(spec), slot_(g.node_count(), -1) {}

  const DelayPmf& get(NodeId u) {
    if (slot_[u] < 0) {
      slot_[u] = static_cast<std::int32_t>(store_.size());
      store_.push_back(boost_delay(graph_->delay(u), spec_.b, spec_.policy));
    }
    return store_[static_cast<std::size_t>(slot_[u])];
  }

  // Fill entries for `nodes` up front so concurrent readers never insert.
  void prepare(std::span<const NodeId> nodes) {
    for (NodeId u : nodes) get(u);
  }

  const DelayPmf& at(NodeId u) const { return store_[static_cast<std::size_t>(slot_[u])]; }

 private:
  const DirectedGraph* graph_;
  BoostSpec spec_;
  std::vector<std::int32_t> slot_;
  std::deque<DelayPmf> store_;
};

}  // namespace tcboost
