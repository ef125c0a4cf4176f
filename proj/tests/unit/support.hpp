#pragma once

// Test fixtures and brute-force oracles. The oracles share no code with the
// library beyond the graph container: they enumerate live-edge worlds,
// simple paths and joint delay values directly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "tcboost/boost/boost.hpp"
#include "tcboost/core/delay.hpp"
#include "tcboost/core/graph.hpp"

namespace tcboost::testing {

struct EdgeSpec {
  NodeId u, v;
  double p;
};

inline DirectedGraph make_graph(std::size_t n, const std::vector<EdgeSpec>& edges, const std::vector<DelayPmf>& delays) {
  GraphBuilder b(n);
  for (const auto& e : edges) {
    if (e.p == 0.0)
      b.add_latent_edge(e.u, e.v);
    else
      b.add_edge(e.u, e.v, e.p);
  }
  return b.build().with_delays(delays);
}

inline DelayPmf unit_delay(TimeUnits horizon = 1) { return DelayPmf::deterministic(1, horizon); }

inline std::vector<DelayPmf> uniform_delays(std::size_t n, const DelayPmf& pmf) { return std::vector<DelayPmf>(n, pmf); }

// Random pmf over t = 1..support with random overflow share.
inline DelayPmf random_pmf(std::mt19937_64& rng, TimeUnits support, bool with_overflow) {
  std::uniform_real_distribution<double> U(0.05, 1.0);
  std::vector<double> w(static_cast<std::size_t>(support) + (with_overflow ? 1 : 0));
  double total = 0.0;
  for (double& x : w) total += (x = U(rng));
  std::vector<double> mass(static_cast<std::size_t>(support) + 1, 0.0);
  for (TimeUnits t = 1; t <= support; ++t) mass[static_cast<std::size_t>(t)] = w[static_cast<std::size_t>(t) - 1] / total;
  double sum = 0.0;
  for (double m : mass) sum += m;
  return DelayPmf(std::move(mass), std::max(0.0, 1.0 - sum));
}

// Random digraph without self-loops or duplicates; probabilities drawn from
// a small grid so ties occur.
inline DirectedGraph random_graph(std::mt19937_64& rng, std::size_t n, std::size_t max_edges, TimeUnits delay_support,
                                  bool with_overflow = false) {
  std::vector<EdgeSpec> edges;
  std::uniform_int_distribution<std::size_t> node(0, n - 1);
  const double grid[] = {0.2, 0.3, 0.5, 0.7, 1.0};
  std::uniform_int_distribution<int> pick(0, 4);
  std::vector<std::vector<char>> used(n, std::vector<char>(n, 0));
  for (std::size_t tries = 0; edges.size() < max_edges && tries < 10 * max_edges; ++tries) {
    const auto u = static_cast<NodeId>(node(rng)), v = static_cast<NodeId>(node(rng));
    if (u == v || used[u][v]) continue;
    used[u][v] = 1;
    edges.push_back({u, v, grid[pick(rng)]});
  }
  std::vector<DelayPmf> delays;
  for (std::size_t i = 0; i < n; ++i) delays.push_back(random_pmf(rng, delay_support, with_overflow));
  return make_graph(n, edges, delays);
}

// Random out-tree rooted at node 0 (node i > 0 has a parent < i).
inline DirectedGraph random_tree(std::mt19937_64& rng, std::size_t n, const DelayPmf& delay) {
  std::vector<EdgeSpec> edges;
  std::uniform_real_distribution<double> P(0.05, 1.0);
  for (NodeId v = 1; v < n; ++v) {
    std::uniform_int_distribution<NodeId> par(0, v - 1);
    edges.push_back({par(rng), v, P(rng)});
  }
  return make_graph(n, edges, uniform_delays(n, delay));
}

// Proportional tail shift written independently of the library.
inline DelayPmf oracle_boost_delay(const DelayPmf& pmf, double b, DelayPolicy policy) {
  if (policy == DelayPolicy::PropProbOnly) return pmf;
  const TimeUnits slot = policy == DelayPolicy::FirstTU ? 1 : 2;
  if (slot > pmf.horizon()) return pmf;
  std::vector<double> mass(pmf.masses().begin(), pmf.masses().end());
  double head = 0.0;
  for (TimeUnits t = 0; t <= slot; ++t) head += mass[static_cast<std::size_t>(t)];
  const double tail = 1.0 - head;
  if (tail <= 0.0) return pmf;
  const double delta = std::min(b, tail);
  mass[static_cast<std::size_t>(slot)] += delta;
  const double keep = (tail - delta) / tail;
  for (std::size_t t = static_cast<std::size_t>(slot) + 1; t < mass.size(); ++t) mass[t] *= keep;
  return DelayPmf(std::move(mass), pmf.overflow() * keep);
}

// Exact expected spread by enumerating every edge outcome: failure, or
// success with a fixed delay value (overflow = never lands). Arrival times
// are then earliest-arrival shortest paths over live edges.
inline double oracle_spread(const DirectedGraph& g, const std::vector<NodeId>& boosted, BoostSpec spec,
                            const std::vector<NodeId>& seeds, TimeUnits horizon) {
  const std::size_t n = g.node_count(), m = g.edge_count();
  std::vector<char> is_boosted(n, 0);
  for (NodeId u : boosted) is_boosted[u] = 1;
  std::vector<DelayPmf> pmf;
  for (NodeId u = 0; u < n; ++u)
    pmf.push_back(is_boosted[u] ? oracle_boost_delay(g.delay(u), spec.b, spec.policy) : g.delay(u));

  struct Outcome {
    TimeUnits delay;  // -1: edge does not deliver
    double prob;
  };
  std::vector<std::vector<Outcome>> outcomes(m);
  std::vector<NodeId> src(m);
  for (NodeId u = 0; u < n; ++u)
    for (EdgeId e = g.edges_begin(u); e < g.edges_end(u); ++e) {
      src[e] = u;
      const double p = is_boosted[u] ? std::min(g.prob(e) + spec.b, 1.0) : g.prob(e);
      double fail = 1.0 - p + p * pmf[u].overflow();
      for (TimeUnits t = 0; t <= pmf[u].horizon(); ++t)
        if (pmf[u].mass(t) > 0.0) {
          if (t > horizon) fail += p * pmf[u].mass(t);
          else outcomes[e].push_back({t, p * pmf[u].mass(t)});
        }
      if (fail > 0.0) outcomes[e].push_back({-1, fail});
    }

  constexpr TimeUnits kInf = std::numeric_limits<TimeUnits>::max() / 2;
  std::vector<TimeUnits> chosen(m);
  double expected = 0.0;
  std::function<void(std::size_t, double)> rec = [&](std::size_t e, double w) {
    if (e == m) {
      std::vector<TimeUnits> arr(n, kInf);
      for (NodeId s : seeds) arr[s] = 0;
      // Bellman-Ford: delays are nonnegative and n is tiny.
      for (std::size_t it = 0; it < n; ++it)
        for (EdgeId f = 0; f < m; ++f)
          if (chosen[f] >= 0 && arr[src[f]] < kInf)
            arr[g.target(f)] = std::min(arr[g.target(f)], arr[src[f]] + chosen[f]);
      std::size_t count = 0;
      for (TimeUnits a : arr) count += a <= horizon;
      expected += w * static_cast<double>(count);
      return;
    }
    for (const auto& o : outcomes[e]) {
      chosen[e] = o.delay;
      rec(e + 1, w * o.prob);
    }
  };
  rec(0, 1.0);
  return expected;
}

// Maximum over simple seed-to-w paths of the probability product subject to
// the summed minimum delays (all but the last node) being <= horizon.
// Returns 0 when no admissible path exists; seeds map to 1.
inline std::vector<double> oracle_max_path_prob(const DirectedGraph& g, const std::vector<NodeId>& seeds,
                                                TimeUnits horizon) {
  const std::size_t n = g.node_count();
  std::vector<double> best(n, 0.0);
  std::vector<char> on_path(n, 0);
  std::function<void(NodeId, double, TimeUnits)> dfs = [&](NodeId u, double prob, TimeUnits t_min) {
    best[u] = std::max(best[u], prob);
    on_path[u] = 1;
    TimeUnits step = 0;
    for (TimeUnits t = 0; t <= g.delay(u).horizon(); ++t)
      if (g.delay(u).mass(t) > 0.0) {
        step = t;
        break;
      }
    for (EdgeId e = g.edges_begin(u); e < g.edges_end(u); ++e) {
      const NodeId v = g.target(e);
      if (on_path[v] || t_min + step > horizon) continue;
      dfs(v, prob * g.prob(e), t_min + step);
    }
    on_path[u] = 0;
  };
  for (NodeId s : seeds) dfs(s, 1.0, 0);
  return best;
}

// P(sum of independent delays <= horizon) by enumerating joint values.
inline double oracle_path_time_prob(const std::vector<DelayPmf>& delays, TimeUnits horizon) {
  double total = 0.0;
  std::function<void(std::size_t, TimeUnits, double)> rec = [&](std::size_t i, TimeUnits sum, double w) {
    if (i == delays.size()) {
      if (sum <= horizon) total += w;
      return;
    }
    for (TimeUnits t = 0; t <= delays[i].horizon(); ++t)
      if (delays[i].mass(t) > 0.0) rec(i + 1, sum + t, w * delays[i].mass(t));
  };
  rec(0, 0, 1.0);
  return total;
}

}  // namespace tcboost::testing
