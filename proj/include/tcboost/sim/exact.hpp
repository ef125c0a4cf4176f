#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <sstream>
#include <vector>

#include "tcboost/boost/boost.hpp"
#include "tcboost/core/error.hpp"
#include "tcboost/core/graph.hpp"
#include "tcboost/sim/simulate.hpp"

namespace tcboost {

inline constexpr double kExactEnumerationLimit = 1e7;

// Size of the joint (edge success x delay value) space an exact computation
// may touch: product over edges leaving seed-reachable nodes of
// 2 * (number of in-horizon delay values of the source).
template <typename View>
double exact_enumeration_size(const View& view, const SeedSet& seeds, TimeUnits horizon) {
  const std::size_t n = view.node_count();
  std::vector<char> seen(n, 0);
  std::deque<NodeId> queue;
  for (NodeId s : seeds) {
    seen[s] = 1;
    queue.push_back(s);
  }
  double log_size = 0.0;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    const auto support = std::max<std::size_t>(1, view.delay(u).support_size(horizon));
    for (EdgeId e = view.edges_begin(u); e < view.edges_end(u); ++e) {
      log_size += std::log(2.0 * static_cast<double>(support));
      const NodeId v = view.target(e);
      if (!seen[v]) {
        seen[v] = 1;
        queue.push_back(v);
      }
    }
  }
  return std::exp(log_size);
}

namespace detail {

// Depth-first enumeration of diffusion worlds in activation-time order. Only
// draws that can change the outcome are branched on: edges into nodes that are
// already settled, and outcomes that cannot improve a tentative time, collapse
// into a single no-change branch.
template <typename View>
class ExactEnumerator {
 public:
  static constexpr TimeUnits kUnreached = std::numeric_limits<TimeUnits>::max();

  ExactEnumerator(const View& view, TimeUnits horizon)
      : view_(view), horizon_(horizon), tentative_(view.node_count(), kUnreached), settled_(view.node_count(), 0) {}

  double run(const SeedSet& seeds) {
    for (NodeId s : seeds) tentative_[s] = 0;
    total_ = 0.0;
    explore(1.0);
    return total_;
  }

 private:
  void explore(double weight) {
    NodeId next = kNoNode;
    TimeUnits best = kUnreached;
    for (NodeId u = 0; u < tentative_.size(); ++u)
      if (!settled_[u] && tentative_[u] <= horizon_ && tentative_[u] < best) {
        best = tentative_[u];
        next = u;
      }
    if (next == kNoNode) {
      total_ += weight * static_cast<double>(settled_count_);
      return;
    }
    settled_[next] = 1;
    ++settled_count_;
    std::vector<EdgeId> edges;
    for (EdgeId e = view_.edges_begin(next); e < view_.edges_end(next); ++e)
      if (!settled_[view_.target(e)]) edges.push_back(e);
    branch(next, edges, 0, weight);
    --settled_count_;
    settled_[next] = 0;
  }

  void branch(NodeId u, const std::vector<EdgeId>& edges, std::size_t i, double weight) {
    if (weight == 0.0) return;
    if (i == edges.size()) {
      explore(weight);
      return;
    }
    const EdgeId e = edges[i];
    const NodeId v = view_.target(e);
    const double p = view_.prob(u, e);
    const DelayPmf& pmf = view_.delay(u);
    const TimeUnits t_u = tentative_[u];
    const TimeUnits previous = tentative_[v];
    double improving = 0.0;
    if (p > 0.0) {
      for (TimeUnits d = 0; d <= pmf.horizon() && t_u + d <= horizon_; ++d) {
        const double m = pmf.mass(d);
        if (m <= 0.0 || t_u + d >= previous) continue;
        improving += m;
        tentative_[v] = t_u + d;
        branch(u, edges, i + 1, weight * p * m);
        tentative_[v] = previous;
      }
    }
    const double stay = (1.0 - p) + p * (1.0 - improving);
    branch(u, edges, i + 1, weight * stay);
  }

  const View& view_;
  TimeUnits horizon_;
  std::vector<TimeUnits> tentative_;
  std::vector<char> settled_;
  std::size_t settled_count_ = 0;
  double total_ = 0.0;
};

}  // namespace detail

// Exact expected number of nodes active by `horizon`, by enumerating every
// joint outcome of edge successes and delay draws under the same
// earliest-arrival semantics as the simulator.
template <typename View>
SpreadEstimate exact_spread(const View& view, const SeedSet& seeds, TimeUnits horizon,
                            double limit = kExactEnumerationLimit) {
  seeds.validate_for(view.graph());
  if (horizon < 0) throw ConfigError("time horizon must be >= 0");
  const double size = exact_enumeration_size(view, seeds, horizon);
  if (size > limit) {
    std::ostringstream msg;
    msg << "exact enumeration size " << size << " (product over reachable edges of 2 x delay support) exceeds "
        << limit;
    throw SizeError(msg.str());
  }
  detail::ExactEnumerator<View> enumerator(view, horizon);
  SpreadEstimate est;
  est.mean = enumerator.run(seeds);
  est.exact = true;
  est.runs = 0;
  return est;
}

}  // namespace tcboost
