#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "tcboost/core/error.hpp"
#include "tcboost/core/graph.hpp"
#include "tcboost/core/rng.hpp"

namespace tcboost::bench {

// Directed Chung-Lu graph with power-law expected in- and out-degrees.
// Node weights are (i + 1)^(-1 / (exponent - 1)); in-weights use an
// independent permutation so hubs in and out differ. Deterministic in `seed`.
inline DirectedGraph synthetic_power_law(std::size_t nodes, std::size_t edges, double exponent, std::uint64_t seed) {
  if (nodes < 2) throw ConfigError("synthetic graph needs at least 2 nodes");
  if (!(exponent > 1.0)) throw ConfigError("synthetic_exponent must be > 1");
  if (edges > nodes * (nodes - 1) / 4) throw ConfigError("synthetic_edges too large for the node count");

  SplitMix64 rng(seed);
  std::vector<double> out_cum(nodes), in_cum(nodes);
  std::vector<NodeId> perm(nodes);
  std::iota(perm.begin(), perm.end(), NodeId{0});
  for (std::size_t i = nodes - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
  const double power = -1.0 / (exponent - 1.0);
  double out_acc = 0.0, in_acc = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    out_acc += std::pow(static_cast<double>(i + 1), power);
    in_acc += std::pow(static_cast<double>(perm[i] + 1), power);
    out_cum[i] = out_acc;
    in_cum[i] = in_acc;
  }
  auto draw = [&](const std::vector<double>& cum) {
    const double x = rng.uniform() * cum.back();
    const auto it = std::upper_bound(cum.begin(), cum.end(), x);
    return static_cast<NodeId>(std::min<std::size_t>(it - cum.begin(), nodes - 1));
  };

  GraphBuilder builder(nodes);
  std::size_t added = 0;
  while (added < edges) {
    const NodeId u = draw(out_cum), v = draw(in_cum);
    if (builder.add_edge(u, v)) ++added;
  }
  return builder.build(false);
}

}  // namespace tcboost::bench
