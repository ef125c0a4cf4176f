#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tcboost/core/delay.hpp"
#include "tcboost/core/error.hpp"
#include "tcboost/core/graph.hpp"

namespace tcboost {

// How boosting a node reshapes its delay distribution.
enum class DelayPolicy {
  PropProbOnly,  // probabilities only, delays untouched
  FirstTU,       // raise P(delay = 1) by up to b
  SecondTU,      // raise P(delay = 2) by up to b
};

inline std::string_view to_string(DelayPolicy p) {
  switch (p) {
    case DelayPolicy::PropProbOnly: return "prop_prob_only";
    case DelayPolicy::FirstTU: return "first_tu";
    case DelayPolicy::SecondTU: return "second_tu";
  }
  return "?";
}

inline DelayPolicy parse_delay_policy(std::string_view name) {
  if (name == "prop_prob_only" || name == "none") return DelayPolicy::PropProbOnly;
  if (name == "first_tu" || name == "1st-tu") return DelayPolicy::FirstTU;
  if (name == "second_tu" || name == "2nd-tu") return DelayPolicy::SecondTU;
  throw ConfigError("unknown boost delay policy '" + std::string(name) + "'");
}

struct BoostSpec {
  double b = 0.1;
  DelayPolicy policy = DelayPolicy::FirstTU;

  void validate() const {
    if (!(b > 0.0 && b <= 1.0)) throw ConfigError("boost amount b must lie in (0, 1]");
  }
};

inline double boost_edge_prob(double p, double b) noexcept { return std::min(p + b, 1.0); }

// Moves up to b of probability mass onto delay `slot` (1 or 2), taking it
// proportionally from every later value and from the overflow. The result
// first-order dominates the input: cdf'(t) >= cdf(t) for all t.
inline DelayPmf shift_delay_mass(const DelayPmf& pmf, double b, TimeUnits slot) {
  if (slot > pmf.horizon()) return pmf;
  const double head = pmf.cdf(slot);
  const double tail = 1.0 - head;
  if (tail <= 0.0) return pmf;
  const double delta = std::min(b, tail);
  const double scale = (tail - delta) / tail;
  std::vector<double> mass(pmf.masses().begin(), pmf.masses().end());
  mass[static_cast<std::size_t>(slot)] += delta;
  for (std::size_t t = static_cast<std::size_t>(slot) + 1; t < mass.size(); ++t) mass[t] *= scale;
  DelayPmf out(std::move(mass), pmf.overflow() * scale);
  if (pmf.alpha()) out.set_alpha(*pmf.alpha());
  return out;
}

inline DelayPmf boost_delay(const DelayPmf& pmf, double b, DelayPolicy policy) {
  switch (policy) {
    case DelayPolicy::PropProbOnly: return pmf;
    case DelayPolicy::FirstTU: return shift_delay_mass(pmf, b, 1);
    case DelayPolicy::SecondTU: return shift_delay_mass(pmf, b, 2);
  }
  return pmf;
}

// A graph with a set of boosted nodes overlaid. The base graph is never
// modified; effective probabilities are computed per query and boosted delay
// distributions are materialized once per boosted node.
class BoostedGraphView {
 public:
  BoostedGraphView(const DirectedGraph& base, BoostSpec spec) : base_(&base), spec_(spec), slot_(base.node_count(), -1) {
    spec_.validate();
    if (base.node_count() > 0 && (!base.has_delays() || !base.has_probabilities()))
      throw ConfigError("graph needs edge probabilities and node delays before diffusion");
  }

  BoostedGraphView(const DirectedGraph& base, std::span<const NodeId> boosted, BoostSpec spec)
      : BoostedGraphView(base, spec) {
    for (NodeId u : boosted) add(u);
  }

  const DirectedGraph& graph() const noexcept { return *base_; }
  const BoostSpec& spec() const noexcept { return spec_; }
  std::size_t node_count() const noexcept { return base_->node_count(); }
  std::size_t edge_count() const noexcept { return base_->edge_count(); }

  EdgeId edges_begin(NodeId u) const noexcept { return base_->edges_begin(u); }
  EdgeId edges_end(NodeId u) const noexcept { return base_->edges_end(u); }
  NodeId target(EdgeId e) const noexcept { return base_->target(e); }
  std::size_t out_degree(NodeId u) const noexcept { return base_->out_degree(u); }

  bool is_boosted(NodeId u) const noexcept { return slot_[u] >= 0; }

  double prob(NodeId u, EdgeId e) const noexcept {
    return is_boosted(u) ? boost_edge_prob(base_->prob(e), spec_.b) : base_->prob(e);
  }

  const DelayPmf& delay(NodeId u) const noexcept {
    return is_boosted(u) ? boosted_delays_[static_cast<std::size_t>(slot_[u])] : base_->delay(u);
  }

  // Boosts `u`; no-op if already boosted.
  void add(NodeId u) {
    base_->check_node(u);
    if (is_boosted(u)) return;
    slot_[u] = static_cast<std::int32_t>(boosted_delays_.size());
    boosted_delays_.push_back(boost_delay(base_->delay(u), spec_.b, spec_.policy));
    boosted_.push_back(u);
  }

  std::span<const NodeId> boosted() const noexcept { return boosted_; }

 private:
  const DirectedGraph* base_;
  BoostSpec spec_;
  std::vector<std::int32_t> slot_;
  std::vector<DelayPmf> boosted_delays_;
  std::vector<NodeId> boosted_;
};

// A view plus one extra boosted node, without copying the underlying view.
// `extra_delay` must be the boosted delay of `extra` under the view's spec.
template <typename View>
class ExtraBoostView {
 public:
  ExtraBoostView(const View& base, NodeId extra, const DelayPmf& extra_delay)
      : base_(&base), extra_(extra), extra_delay_(&extra_delay) {}

  const DirectedGraph& graph() const noexcept { return base_->graph(); }
  const BoostSpec& spec() const noexcept { return base_->spec(); }
  std::size_t node_count() const noexcept { return base_->node_count(); }
  std::size_t edge_count() const noexcept { return base_->edge_count(); }
  EdgeId edges_begin(NodeId u) const noexcept { return base_->edges_begin(u); }
  EdgeId edges_end(NodeId u) const noexcept { return base_->edges_end(u); }
  NodeId target(EdgeId e) const noexcept { return base_->target(e); }
  std::size_t out_degree(NodeId u) const noexcept { return base_->out_degree(u); }

  bool is_boosted(NodeId u) const noexcept { return u == extra_ || base_->is_boosted(u); }

  double prob(NodeId u, EdgeId e) const noexcept {
    if (u == extra_ && !base_->is_boosted(u)) return boost_edge_prob(base_->graph().prob(e), spec().b);
    return base_->prob(u, e);
  }

  const DelayPmf& delay(NodeId u) const noexcept {
    if (u == extra_ && !base_->is_boosted(u)) return *extra_delay_;
    return base_->delay(u);
  }

 private:
  const View* base_;
  NodeId extra_;
  const DelayPmf* extra_delay_;
};

inline BoostedGraphView apply_boost(const DirectedGraph& g, std::span<const NodeId> boosted, BoostSpec spec) {
  return BoostedGraphView(g, boosted, spec);
}

}  // namespace tcboost
