#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tcboost/core/delay.hpp"
#include "tcboost/core/error.hpp"
#include "tcboost/core/graph.hpp"
#include "tcboost/core/rng.hpp"

namespace tcboost {

// Weighted cascade: p_uv = 1 / in_degree(v).
inline DirectedGraph assign_wc(const DirectedGraph& g) {
  std::vector<double> probs(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) probs[e] = 1.0 / static_cast<double>(g.in_degree(g.target(e)));
  return g.with_probabilities(std::move(probs));
}

inline const std::vector<double>& trivalency_default() {
  static const std::vector<double> values{0.1, 0.01, 0.001};
  return values;
}
inline const std::vector<double>& trivalency_tr005() {
  static const std::vector<double> values{0.05, 0.005, 0.0005};
  return values;
}
inline const std::vector<double>& trivalency_tr015() {
  static const std::vector<double> values{0.15, 0.015, 0.0015};
  return values;
}

// Each edge independently draws a value uniformly from `values`.
inline DirectedGraph assign_trivalency(const DirectedGraph& g, const std::vector<double>& values, std::uint64_t rng_seed) {
  if (values.empty()) throw ConfigError("trivalency value set is empty");
  for (double v : values)
    if (!(v > 0.0 && v <= 1.0)) throw ConfigError("trivalency value outside (0, 1]");
  SplitMix64 rng(rng_seed);
  std::vector<double> probs(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) probs[e] = values[rng.below(values.size())];
  return g.with_probabilities(std::move(probs));
}

// Exponential delays for every node. With no fixed alpha, each node draws its
// rate uniformly from (0, 1]; zero draws are rejected.
inline DirectedGraph assign_exponential_delays(const DirectedGraph& g, TimeUnits horizon, std::uint64_t rng_seed,
                                               std::optional<double> fixed_alpha = std::nullopt) {
  std::vector<DelayPmf> delays;
  delays.reserve(g.node_count());
  SplitMix64 rng(rng_seed);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    double alpha = 0.0;
    if (fixed_alpha) {
      alpha = *fixed_alpha;
    } else {
      // 1 - U lies in (0, 1]; the loop only guards against a literal 0.
      do alpha = 1.0 - rng.uniform(); while (alpha <= 0.0);
    }
    delays.push_back(exponential_delay(alpha, horizon));
  }
  return g.with_delays(std::move(delays));
}

}  // namespace tcboost
