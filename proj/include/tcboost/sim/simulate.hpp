#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "tcboost/boost/boost.hpp"
#include "tcboost/core/graph.hpp"
#include "tcboost/core/rng.hpp"

namespace tcboost {

struct ActivationOutcome {
  std::vector<TimeUnits> activation_time;  // kNeverArrives when not activated
  std::size_t activated_count = 0;

  bool activated(NodeId u) const noexcept { return activation_time[u] != kNeverArrives; }
};

struct SpreadEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t runs = 0;
  bool exact = false;
};

// Counter ids of the two uniforms attached to edge `e` in one run.
inline constexpr std::uint64_t success_counter(EdgeId e) noexcept { return 2 * static_cast<std::uint64_t>(e); }
inline constexpr std::uint64_t delay_counter(EdgeId e) noexcept { return 2 * static_cast<std::uint64_t>(e) + 1; }

// Worker count for batch estimation: TCBOOST_WORKERS if set, else the
// hardware concurrency.
inline std::size_t default_workers() {
  if (const char* env = std::getenv("TCBOOST_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Reusable scratch space for one diffusion run at a time. Each run is an
// earliest-arrival sweep: every edge leaving a newly activated node draws one
// success uniform and, on success, one delay uniform from the activator's
// delay pmf. The node's activation time is the earliest landing <= horizon.
class Simulator {
 public:
  explicit Simulator(std::size_t node_count)
      : stamp_(node_count, 0), settled_stamp_(node_count, 0), time_(node_count, 0), parent_(node_count, kNoNode),
        parent_edge_(node_count, 0), spawned_(node_count, 0) {}

  template <typename View>
  std::size_t run(const View& view, std::span<const NodeId> seeds, TimeUnits horizon, std::uint64_t key) {
    next_epoch();
    order_.clear();
    heap_.clear();
    for (NodeId s : seeds) relax(s, 0, kNoNode, 0);
    while (!heap_.empty()) {
      std::pop_heap(heap_.begin(), heap_.end(), std::greater<>{});
      const auto [t, u] = heap_.back();
      heap_.pop_back();
      if (settled_stamp_[u] == epoch_ || t != time_[u]) continue;
      settled_stamp_[u] = epoch_;
      spawned_[u] = 0;
      order_.push_back(u);
      if (parent_[u] != kNoNode) ++spawned_[parent_[u]];
      const DelayPmf& pmf = view.delay(u);
      for (EdgeId e = view.edges_begin(u); e < view.edges_end(u); ++e) {
        const NodeId v = view.target(e);
        if (settled_stamp_[v] == epoch_) continue;
        if (!(counter_uniform(key, success_counter(e)) < view.prob(u, e))) continue;
        const TimeUnits delta = pmf.sample(counter_uniform(key, delay_counter(e)));
        if (delta == kNeverArrives || t + delta > horizon) continue;
        relax(v, t + delta, u, e);
      }
    }
    return order_.size();
  }

  // Activated nodes of the last run, in activation order.
  std::span<const NodeId> activated() const noexcept { return order_; }
  bool is_active(NodeId u) const noexcept { return settled_stamp_[u] == epoch_; }
  TimeUnits time(NodeId u) const noexcept { return time_[u]; }
  // Node whose arrival set u's activation time (kNoNode for seeds).
  NodeId parent(NodeId u) const noexcept { return parent_[u]; }
  EdgeId parent_edge(NodeId u) const noexcept { return parent_edge_[u]; }
  // Number of nodes whose activation u caused in the last run.
  std::uint32_t spawned(NodeId u) const noexcept { return spawned_[u]; }

 private:
  void next_epoch() {
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      std::fill(settled_stamp_.begin(), settled_stamp_.end(), 0);
      epoch_ = 1;
    }
  }

  void relax(NodeId v, TimeUnits t, NodeId from, EdgeId e) {
    if (stamp_[v] == epoch_ && time_[v] <= t) return;
    stamp_[v] = epoch_;
    time_[v] = t;
    parent_[v] = from;
    parent_edge_[v] = e;
    heap_.emplace_back(t, v);
    std::push_heap(heap_.begin(), heap_.end(), std::greater<>{});
  }

  std::uint32_t epoch_ = 0;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint32_t> settled_stamp_;
  std::vector<TimeUnits> time_;
  std::vector<NodeId> parent_;
  std::vector<EdgeId> parent_edge_;
  std::vector<std::uint32_t> spawned_;
  std::vector<NodeId> order_;
  std::vector<std::pair<TimeUnits, NodeId>> heap_;
};

// One diffusion run with stream key `key`.
template <typename View>
ActivationOutcome simulate_once(const View& view, const SeedSet& seeds, TimeUnits horizon, std::uint64_t key) {
  seeds.validate_for(view.graph());
  Simulator sim(view.node_count());
  ActivationOutcome out;
  out.activation_time.assign(view.node_count(), kNeverArrives);
  out.activated_count = sim.run(view, seeds.nodes(), horizon, key);
  for (NodeId u : sim.activated()) out.activation_time[u] = sim.time(u);
  return out;
}

// Runs `body(worker_index, begin, end)` over [0, count) split into contiguous
// chunks, one thread per chunk.
template <typename Body>
void parallel_chunks(std::size_t count, std::size_t workers, Body&& body) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    body(std::size_t{0}, std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk, end = std::min(count, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&body, w, begin, end] { body(w, begin, end); });
  }
  for (auto& t : threads) t.join();
}

struct CountMoments {
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;
  std::size_t runs = 0;

  void add(std::uint64_t c) noexcept {
    sum += c;
    sum_sq += c * c;
    ++runs;
  }
  void merge(const CountMoments& o) noexcept {
    sum += o.sum;
    sum_sq += o.sum_sq;
    runs += o.runs;
  }

  SpreadEstimate estimate() const noexcept {
    SpreadEstimate est;
    est.runs = runs;
    if (runs == 0) return est;
    const double n = static_cast<double>(runs);
    est.mean = static_cast<double>(sum) / n;
    if (runs > 1) {
      const double var = (static_cast<double>(sum_sq) - n * est.mean * est.mean) / (n - 1.0);
      est.std_error = std::sqrt(std::max(0.0, var) / n);
    }
    return est;
  }
};

// Monte Carlo estimate of the expected number of nodes active by `horizon`.
// Run i uses stream derive_stream(rng_seed, i); counts are integers, so the
// result is identical for any worker count.
template <typename View>
SpreadEstimate estimate_spread(const View& view, const SeedSet& seeds, TimeUnits horizon, std::size_t runs,
                               std::uint64_t rng_seed, std::size_t workers = default_workers()) {
  if (runs < 1) throw ConfigError("number of simulations must be >= 1");
  seeds.validate_for(view.graph());
  std::vector<CountMoments> partial(std::max<std::size_t>(1, std::min(workers, runs)));
  parallel_chunks(runs, partial.size(), [&](std::size_t w, std::size_t begin, std::size_t end) {
    Simulator sim(view.node_count());
    for (std::size_t i = begin; i < end; ++i)
      partial[w].add(sim.run(view, seeds.nodes(), horizon, derive_stream(rng_seed, i)));
  });
  CountMoments total;
  for (const auto& p : partial) total.merge(p);
  return total.estimate();
}

}  // namespace tcboost
