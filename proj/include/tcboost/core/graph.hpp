#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <deque>
#include <istream>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tcboost/core/delay.hpp"
#include "tcboost/core/error.hpp"

namespace tcboost {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

class GraphBuilder;

// Immutable directed graph in CSR form. Out-edges of a node are contiguous and
// keep their insertion order; edge ids index the CSR arrays.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return targets_.size(); }

  // Half-open range of edge ids leaving `u`.
  EdgeId edges_begin(NodeId u) const noexcept { return offsets_[u]; }
  EdgeId edges_end(NodeId u) const noexcept { return offsets_[u + 1]; }
  std::span<const NodeId> out_neighbors(NodeId u) const noexcept {
    return {targets_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
  }

  NodeId target(EdgeId e) const noexcept { return targets_[e]; }
  NodeId source(EdgeId e) const noexcept {
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), e);
    return static_cast<NodeId>(it - offsets_.begin() - 1);
  }
  double prob(EdgeId e) const noexcept { return probs_[e]; }
  std::span<const double> probs() const noexcept { return probs_; }

  std::size_t out_degree(NodeId u) const noexcept { return offsets_[u + 1] - offsets_[u]; }
  std::size_t in_degree(NodeId v) const noexcept { return in_degree_[v]; }

  bool has_probabilities() const noexcept { return has_probs_; }
  bool has_delays() const noexcept { return !delays_.empty(); }
  // True when some edge carries probability 0 (test-only witness graphs).
  bool has_latent_edges() const noexcept { return has_latent_; }

  const DelayPmf& delay(NodeId u) const noexcept { return delays_[u]; }
  std::span<const DelayPmf> delays() const noexcept { return delays_; }

  // Edge id of (u, v), or nullopt.
  std::optional<EdgeId> find_edge(NodeId u, NodeId v) const noexcept {
    for (EdgeId e = offsets_[u]; e < offsets_[u + 1]; ++e)
      if (targets_[e] == v) return e;
    return std::nullopt;
  }

  // Edge ids in the order edges were first added.
  std::span<const EdgeId> insertion_order() const noexcept { return insertion_order_; }

  // Copy with every edge probability replaced; values must be in (0, 1].
  DirectedGraph with_probabilities(std::vector<double> probs) const {
    if (probs.size() != edge_count()) throw ArgumentError("probability vector size does not match edge count");
    for (double p : probs)
      if (!(p > 0.0 && p <= 1.0)) throw ConfigError("edge probability outside (0, 1]");
    DirectedGraph g = *this;
    g.probs_ = std::move(probs);
    g.has_probs_ = true;
    g.has_latent_ = false;
    return g;
  }

  // Copy with per-node delay distributions replaced.
  DirectedGraph with_delays(std::vector<DelayPmf> delays) const {
    if (delays.size() != node_count()) throw ArgumentError("delay vector size does not match node count");
    DirectedGraph g = *this;
    g.delays_ = std::move(delays);
    return g;
  }

  void check_node(NodeId u) const {
    if (u >= node_count())
      throw ArgumentError("node id " + std::to_string(u) + " out of range (n=" + std::to_string(node_count()) + ")");
  }

 private:
  friend class GraphBuilder;

  std::vector<EdgeId> offsets_;
  std::vector<NodeId> targets_;
  std::vector<double> probs_;
  std::vector<std::uint32_t> in_degree_;
  std::vector<DelayPmf> delays_;
  std::vector<EdgeId> insertion_order_;
  bool has_probs_ = false;
  bool has_latent_ = false;
};

// Accumulates edges over a fixed node range. Self-loops and repeated (u, v)
// pairs are dropped; the first occurrence of a pair wins.
class GraphBuilder {
 public:
  explicit GraphBuilder(std::size_t node_count) : node_count_(node_count) {}

  // Returns false if the edge was dropped.
  bool add_edge(NodeId u, NodeId v, double prob = 1.0) {
    if (u >= node_count_ || v >= node_count_) throw ArgumentError("edge endpoint out of range");
    if (u == v) {
      ++self_loops_;
      return false;
    }
    const auto key = (static_cast<std::uint64_t>(u) << 32) | v;
    if (!seen_.insert(key).second) {
      ++duplicates_;
      return false;
    }
    edges_.push_back({u, v, prob});
    return true;
  }

  // Edge with probability 0 that only a boost can materialize. Used to build
  // witness instances in tests; production graphs never contain one.
  bool add_latent_edge(NodeId u, NodeId v) {
    if (!add_edge(u, v, 1.0)) return false;
    edges_.back().prob = 0.0;
    latent_ = true;
    return true;
  }

  std::size_t dropped_self_loops() const noexcept { return self_loops_; }
  std::size_t dropped_duplicates() const noexcept { return duplicates_; }

  // `assigned` marks the stored probabilities as meaningful.
  DirectedGraph build(bool assigned = true) const {
    DirectedGraph g;
    const std::size_t n = node_count_, m = edges_.size();
    g.offsets_.assign(n + 1, 0);
    g.in_degree_.assign(n, 0);
    for (const auto& e : edges_) {
      ++g.offsets_[e.u + 1];
      ++g.in_degree_[e.v];
    }
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
    g.targets_.resize(m);
    g.probs_.resize(m);
    g.insertion_order_.resize(m);
    std::vector<EdgeId> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (std::size_t i = 0; i < m; ++i) {
      const auto& e = edges_[i];
      const EdgeId slot = cursor[e.u]++;
      g.targets_[slot] = e.v;
      g.probs_[slot] = e.prob;
      g.insertion_order_[i] = slot;
    }
    g.has_probs_ = assigned;
    g.has_latent_ = latent_;
    return g;
  }

 private:
  struct PendingEdge {
    NodeId u, v;
    double prob;
  };

  std::size_t node_count_;
  std::vector<PendingEdge> edges_;
  std::unordered_set<std::uint64_t> seen_;
  std::size_t self_loops_ = 0;
  std::size_t duplicates_ = 0;
  bool latent_ = false;
};

struct EdgeListLoad {
  DirectedGraph graph;
  std::vector<std::uint64_t> original_ids;  // compact id -> id in the file
  std::size_t dropped_self_loops = 0;
  std::size_t dropped_duplicates = 0;
  std::size_t comment_lines = 0;
};

namespace detail {

inline bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_blank(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_blank(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline std::uint64_t parse_id(std::string_view token, std::size_t line_no) {
  std::uint64_t value = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw ParseError("not a nonnegative integer node id: '" + std::string(token) + "'", line_no);
  return value;
}

}  // namespace detail

// Reads a SNAP-style edge list: one "u v" pair per line (tab or space
// separated), '#' comment lines. Ids are compacted to 0..n-1 in first-seen
// order. Probabilities and delays are left unassigned.
inline EdgeListLoad load_edge_list(std::istream& in) {
  std::unordered_map<std::uint64_t, NodeId> index;
  std::vector<std::uint64_t> original;
  std::vector<std::pair<NodeId, NodeId>> raw;
  EdgeListLoad result;

  auto intern = [&](std::uint64_t id) {
    auto [it, inserted] = index.try_emplace(id, static_cast<NodeId>(original.size()));
    if (inserted) original.push_back(id);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    std::size_t first = 0;
    while (first < view.size() && detail::is_blank(view[first])) ++first;
    if (first == view.size()) continue;
    if (view[first] == '#') {
      ++result.comment_lines;
      continue;
    }
    const auto tokens = detail::split_ws(view);
    if (tokens.size() != 2) throw ParseError("expected two node ids, found " + std::to_string(tokens.size()) + " tokens", line_no);
    const auto u = detail::parse_id(tokens[0], line_no);
    const auto v = detail::parse_id(tokens[1], line_no);
    const NodeId cu = intern(u);
    const NodeId cv = intern(v);
    raw.emplace_back(cu, cv);
  }

  GraphBuilder builder(original.size());
  for (const auto& [u, v] : raw) builder.add_edge(u, v);
  result.graph = builder.build(/*assigned=*/false);
  result.original_ids = std::move(original);
  result.dropped_self_loops = builder.dropped_self_loops();
  result.dropped_duplicates = builder.dropped_duplicates();
  return result;
}

// Writes compact ids in edge insertion order, so reloading the output yields
// the same graph with the same ids.
inline void write_edge_list(const DirectedGraph& g, std::ostream& out) {
  for (EdgeId e : g.insertion_order()) out << g.source(e) << '\t' << g.target(e) << '\n';
}

// Nonempty ordered list of distinct node ids.
class SeedSet {
 public:
  SeedSet() = default;
  explicit SeedSet(std::vector<NodeId> seeds) : seeds_(std::move(seeds)) {
    if (seeds_.empty()) throw ConfigError("seed set is empty");
    std::vector<NodeId> sorted = seeds_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw ConfigError("seed set has duplicate nodes");
  }
  SeedSet(std::initializer_list<NodeId> seeds) : SeedSet(std::vector<NodeId>(seeds)) {}

  void validate_for(const DirectedGraph& g) const {
    if (seeds_.empty()) throw ConfigError("seed set is empty");
    for (NodeId s : seeds_) g.check_node(s);
  }

  std::span<const NodeId> nodes() const noexcept { return seeds_; }
  std::size_t size() const noexcept { return seeds_.size(); }
  bool contains(NodeId u) const noexcept { return std::find(seeds_.begin(), seeds_.end(), u) != seeds_.end(); }
  auto begin() const noexcept { return seeds_.begin(); }
  auto end() const noexcept { return seeds_.end(); }

 private:
  std::vector<NodeId> seeds_;
};

struct DiffusionConfig {
  TimeUnits horizon = 15;
  std::size_t simulations = 10000;
  std::uint64_t rng_seed = 0;

  void validate() const {
    if (horizon < 0) throw ConfigError("time horizon must be >= 0");
    if (simulations < 1) throw ConfigError("number of simulations must be >= 1");
  }
};

// Nodes within `horizon` hops of the seeds (seeds included), ascending.
inline std::vector<NodeId> candidate_set(const DirectedGraph& g, const SeedSet& seeds, TimeUnits horizon) {
  seeds.validate_for(g);
  std::vector<TimeUnits> depth(g.node_count(), -1);
  std::deque<NodeId> queue;
  for (NodeId s : seeds) {
    depth[s] = 0;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    if (depth[u] >= horizon) continue;
    for (NodeId v : g.out_neighbors(u)) {
      if (depth[v] >= 0) continue;
      depth[v] = depth[u] + 1;
      queue.push_back(v);
    }
  }
  std::vector<NodeId> out;
  for (NodeId u = 0; u < g.node_count(); ++u)
    if (depth[u] >= 0) out.push_back(u);
  return out;
}

struct AugmentedGraph {
  DirectedGraph graph;
  NodeId virtual_seed = kNoNode;
};

// Adds node s^v = n with probability-1, zero-delay edges to every seed.
inline AugmentedGraph augment_virtual_seed(const DirectedGraph& g, const SeedSet& seeds) {
  seeds.validate_for(g);
  const std::size_t n = g.node_count();
  GraphBuilder builder(n + 1);
  for (EdgeId e : g.insertion_order()) {
    const NodeId u = g.source(e);
    if (g.prob(e) == 0.0)
      builder.add_latent_edge(u, g.target(e));
    else
      builder.add_edge(u, g.target(e), g.prob(e));
  }
  const auto sv = static_cast<NodeId>(n);
  for (NodeId s : seeds) builder.add_edge(sv, s, 1.0);
  AugmentedGraph out{builder.build(g.has_probabilities() || g.has_latent_edges()), sv};
  if (g.has_delays()) {
    std::vector<DelayPmf> delays(g.delays().begin(), g.delays().end());
    delays.push_back(DelayPmf::immediate(delays.empty() ? 1 : delays.front().horizon()));
    out.graph = out.graph.with_delays(std::move(delays));
  }
  return out;
}

}  // namespace tcboost
