#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "tcboost/bench/config.hpp"
#include "tcboost/bench/synthetic.hpp"
#include "tcboost/boost/boost.hpp"
#include "tcboost/core/graph.hpp"
#include "tcboost/core/models.hpp"
#include "tcboost/core/rng.hpp"
#include "tcboost/selectors/registry.hpp"
#include "tcboost/sim/simulate.hpp"

namespace tcboost::bench {

inline constexpr std::string_view kNoBoostName = "no_boost";
inline constexpr std::string_view kCsvHeader =
    "selector,sweep_axis,sweep_value,spread_mean,spread_stderr,selection_ms,boost_set";

// Stream tags keep selection, evaluation and seed ranking draws disjoint.
inline constexpr std::uint64_t kSelectionStream = 0x5e1ec7;
inline constexpr std::uint64_t kEvaluationStream = 0xe7a1;
inline constexpr std::uint64_t kRankingStream = 0x4a4b;

// Graph with probabilities and delays assigned, plus the file id mapping.
struct PreparedGraph {
  DirectedGraph graph;
  std::vector<std::uint64_t> original_ids;
  std::unordered_map<std::uint64_t, NodeId> compact_ids;

  NodeId compact(std::uint64_t original) const {
    const auto it = compact_ids.find(original);
    if (it == compact_ids.end()) throw ConfigError("node id " + std::to_string(original) + " is not in the graph");
    return it->second;
  }
  std::uint64_t original(NodeId u) const { return original_ids[u]; }
};

inline PreparedGraph prepare_graph(const ExperimentConfig& config) {
  PreparedGraph out;
  DirectedGraph raw;
  if (config.synthetic) {
    const auto& s = *config.synthetic;
    raw = synthetic_power_law(s.nodes, s.edges, s.exponent, s.seed);
    out.original_ids.resize(raw.node_count());
    std::iota(out.original_ids.begin(), out.original_ids.end(), std::uint64_t{0});
  } else {
    std::ifstream in(config.graph_path);
    if (!in) throw ConfigError("cannot open graph file '" + config.graph_path + "'");
    EdgeListLoad load = load_edge_list(in);
    raw = std::move(load.graph);
    out.original_ids = std::move(load.original_ids);
  }
  for (NodeId u = 0; u < out.original_ids.size(); ++u) out.compact_ids.emplace(out.original_ids[u], u);
  DirectedGraph weighted = config.prob_model == ProbModel::WC
                               ? assign_wc(raw)
                               : assign_trivalency(raw, config.trivalency_values, config.prob_seed);
  out.graph = assign_exponential_delays(weighted, std::max<TimeUnits>(1, config.max_horizon()), config.delay_seed,
                                        config.delay_alpha);
  return out;
}

// Nodes with out-degree >= 1, ranked by single-node spread (descending, ties
// by out-degree then id). All nodes share the same run streams.
inline std::vector<NodeId> rank_seed_candidates(const DirectedGraph& g, TimeUnits horizon, std::size_t runs,
                                                std::uint64_t rng_seed, std::size_t workers = default_workers()) {
  std::vector<NodeId> eligible;
  for (NodeId u = 0; u < g.node_count(); ++u)
    if (g.out_degree(u) > 0) eligible.push_back(u);
  if (eligible.empty()) throw ConfigError("no node has an out-edge; cannot rank seed candidates");
  const BoostedGraphView view(g, BoostSpec{});
  const std::uint64_t stream = derive_stream(rng_seed, kRankingStream);
  std::vector<double> score(g.node_count(), 0.0);
  parallel_chunks(eligible.size(), workers, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      score[eligible[i]] = estimate_spread(view, SeedSet{eligible[i]}, horizon, runs, stream, 1).mean;
  });
  std::stable_sort(eligible.begin(), eligible.end(), [&](NodeId a, NodeId b) {
    if (score[a] != score[b]) return score[a] > score[b];
    if (g.out_degree(a) != g.out_degree(b)) return g.out_degree(a) > g.out_degree(b);
    return a < b;
  });
  return eligible;
}

// Draws `count` distinct seeds uniformly from the top, middle or bottom
// decile of a ranking.
inline std::vector<NodeId> pick_from_decile(const std::vector<NodeId>& ranking, std::size_t count, SeedQuality quality,
                                            std::uint64_t rng_seed) {
  const std::size_t decile = std::max<std::size_t>(1, ranking.size() / 10);
  if (count > decile)
    throw ConfigError("seed_count " + std::to_string(count) + " exceeds the decile size " + std::to_string(decile));
  std::size_t start = 0;
  switch (quality) {
    case SeedQuality::GOOD: start = 0; break;
    case SeedQuality::MEDIUM: start = (ranking.size() - decile) / 2; break;
    case SeedQuality::POOR: start = ranking.size() - decile; break;
  }
  std::vector<NodeId> pool(ranking.begin() + static_cast<std::ptrdiff_t>(start),
                           ranking.begin() + static_cast<std::ptrdiff_t>(start + decile));
  SplitMix64 rng(rng_seed);
  for (std::size_t i = 0; i < count; ++i) std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
  pool.resize(count);
  return pool;
}

inline std::vector<NodeId> generate_seeds(const DirectedGraph& g, std::size_t count, SeedQuality quality,
                                          std::uint64_t rng_seed, TimeUnits horizon, std::size_t ranking_runs = 200,
                                          std::size_t workers = default_workers()) {
  if (count < 1) throw ConfigError("seed_count must be >= 1");
  return pick_from_decile(rank_seed_candidates(g, horizon, ranking_runs, rng_seed, workers), count, quality, rng_seed);
}

struct ResultRow {
  std::string selector;
  std::string sweep_axis = "none";
  std::string sweep_value;
  double spread_mean = 0.0;
  double spread_stderr = 0.0;
  double selection_ms = 0.0;
  std::size_t evaluation_runs = 0;  // not part of the CSV
  std::vector<std::uint64_t> boost_set;
};

// Shortest decimal form that parses back to the same double.
inline std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

inline void write_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.selector << ',' << r.sweep_axis << ',' << r.sweep_value << ',' << format_double(r.spread_mean) << ','
        << format_double(r.spread_stderr) << ',' << format_double(r.selection_ms) << ',';
    for (std::size_t i = 0; i < r.boost_set.size(); ++i) out << (i ? ";" : "") << r.boost_set[i];
    out << '\n';
  }
}

inline std::vector<ResultRow> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing CSV header", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw ParseError("unexpected CSV header", 1);
  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (fields.size() != 7) throw ParseError("expected 7 fields, got " + std::to_string(fields.size()), line_no);
    ResultRow r;
    r.selector = fields[0];
    r.sweep_axis = fields[1];
    r.sweep_value = fields[2];
    try {
      r.spread_mean = detail::parse_number<double>(fields[3], "spread_mean");
      r.spread_stderr = detail::parse_number<double>(fields[4], "spread_stderr");
      r.selection_ms = detail::parse_number<double>(fields[5], "selection_ms");
      std::stringstream ids(fields[6]);
      std::string id;
      while (std::getline(ids, id, ';'))
        if (!id.empty()) r.boost_set.push_back(detail::parse_number<std::uint64_t>(id, "boost_set"));
    } catch (const ConfigError& e) {
      throw ParseError(e.what(), line_no);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

// Parameters of one sweep cell.
struct Cell {
  std::string sweep_value;
  TimeUnits T;
  std::size_t k;
  double b;
  std::size_t seed_count;
};

inline std::vector<Cell> sweep_cells(const ExperimentConfig& c) {
  const Cell base{"", c.T, c.k, c.b, c.seeds.empty() ? c.seed_count : c.seeds.size()};
  if (c.sweep_axis == SweepAxis::NONE) return {base};
  std::vector<Cell> cells;
  for (double v : c.sweep_values) {
    Cell cell = base;
    cell.sweep_value = format_double(v);
    switch (c.sweep_axis) {
      case SweepAxis::T: cell.T = static_cast<TimeUnits>(v); break;
      case SweepAxis::K: cell.k = static_cast<std::size_t>(v); break;
      case SweepAxis::B: cell.b = v; break;
      case SweepAxis::SEED_COUNT: cell.seed_count = static_cast<std::size_t>(v); break;
      case SweepAxis::NONE: break;
    }
    cells.push_back(cell);
  }
  return cells;
}

// Resolves seeds for a cell. Generated seeds rank candidates at the cell's
// horizon; rankings are cached per horizon.
class SeedResolver {
 public:
  SeedResolver(const PreparedGraph& prepared, const ExperimentConfig& config) : prepared_(prepared), config_(config) {}

  SeedSet seeds(TimeUnits horizon, std::size_t count) {
    if (!config_.seeds.empty()) {
      std::vector<NodeId> ids;
      for (auto id : config_.seeds) ids.push_back(prepared_.compact(id));
      return SeedSet(std::move(ids));
    }
    auto it = rankings_.find(horizon);
    if (it == rankings_.end())
      it = rankings_
               .emplace(horizon, rank_seed_candidates(prepared_.graph, horizon, config_.seed_ranking_runs,
                                                      config_.seed_rng, config_.workers))
               .first;
    return SeedSet(pick_from_decile(it->second, count, config_.seed_quality, config_.seed_rng));
  }

 private:
  const PreparedGraph& prepared_;
  const ExperimentConfig& config_;
  std::map<TimeUnits, std::vector<NodeId>> rankings_;
};

inline SelectorContext make_context(const PreparedGraph& prepared, const ExperimentConfig& config, const Cell& cell,
                                    SeedSet seeds) {
  SelectorContext ctx;
  ctx.graph = &prepared.graph;
  ctx.seeds = std::move(seeds);
  ctx.horizon = cell.T;
  ctx.k = cell.k;
  ctx.runs = config.R;
  ctx.lambda = config.lambda;
  ctx.spec = BoostSpec{cell.b, config.policy};
  ctx.rng_seed = derive_stream(config.rng_seed, kSelectionStream);
  ctx.workers = config.workers;
  return ctx;
}

// Monte Carlo spread of `seeds` with `boost` applied. Every cell and selector
// uses the same evaluation streams.
inline SpreadEstimate evaluate_boost(const PreparedGraph& prepared, const ExperimentConfig& config, const Cell& cell,
                                     const SeedSet& seeds, const std::vector<NodeId>& boost) {
  const BoostedGraphView view(prepared.graph, boost, BoostSpec{cell.b, config.policy});
  return estimate_spread(view, seeds, cell.T, config.evaluation_runs(), derive_stream(config.rng_seed, kEvaluationStream),
                         config.workers);
}

// Runs every selector in every sweep cell, plus a no-boost baseline row per
// cell; a cell with k = 0 gets only the baseline. The config is validated
// before any work starts.
inline std::vector<ResultRow> run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr) {
  config.validate();
  const PreparedGraph prepared = prepare_graph(config);
  SeedResolver resolver(prepared, config);
  std::vector<ResultRow> rows;
  for (const Cell& cell : sweep_cells(config)) {
    const SeedSet seeds = resolver.seeds(cell.T, cell.seed_count);
    auto add_row = [&](std::string name, const std::vector<NodeId>& boost, double ms) {
      const SpreadEstimate est = evaluate_boost(prepared, config, cell, seeds, boost);
      ResultRow r;
      r.selector = std::move(name);
      r.sweep_axis = std::string(to_string(config.sweep_axis));
      r.sweep_value = cell.sweep_value;
      r.spread_mean = est.mean;
      r.spread_stderr = est.std_error;
      r.selection_ms = ms;
      r.evaluation_runs = est.runs;
      for (NodeId u : boost) r.boost_set.push_back(prepared.original(u));
      if (log)
        *log << r.selector << (cell.sweep_value.empty() ? "" : " @ " + r.sweep_axis + "=" + cell.sweep_value)
             << ": spread " << est.mean << " (" << ms << " ms)\n";
      rows.push_back(std::move(r));
    };
    add_row(std::string(kNoBoostName), {}, 0.0);
    if (cell.k == 0) continue;
    for (const auto& name : config.selectors) {
      const BoostSelection sel = run_selector(name, make_context(prepared, config, cell, seeds));
      if (log && !sel.warning.empty()) *log << name << ": " << sel.warning << '\n';
      add_row(name, sel.nodes, sel.elapsed_ms);
    }
  }
  return rows;
}

struct CompareRow {
  std::string selector;
  double mean_ms = 0.0;
  double spread_mean = 0.0;
  double spread_stderr = 0.0;
  std::vector<std::uint64_t> boost_set;
};

// Times each selector over `trials` repetitions at the base parameters (any
// sweep is ignored) and evaluates its last selection once.
inline std::vector<CompareRow> compare_selectors(const ExperimentConfig& config) {
  config.validate();
  if (config.trials < 3) throw ConfigError("compare needs trials >= 3");
  const PreparedGraph prepared = prepare_graph(config);
  SeedResolver resolver(prepared, config);
  ExperimentConfig base = config;
  base.sweep_axis = SweepAxis::NONE;
  base.sweep_values.clear();
  const Cell cell = sweep_cells(base).front();
  const SeedSet seeds = resolver.seeds(cell.T, cell.seed_count);
  std::vector<CompareRow> out;
  for (const auto& name : config.selectors) {
    CompareRow row;
    row.selector = name;
    BoostSelection sel;
    double total = 0.0;
    for (std::size_t t = 0; t < config.trials; ++t) {
      sel = run_selector(name, make_context(prepared, config, cell, seeds));
      total += sel.elapsed_ms;
    }
    row.mean_ms = total / static_cast<double>(config.trials);
    const SpreadEstimate est = evaluate_boost(prepared, config, cell, seeds, sel.nodes);
    row.spread_mean = est.mean;
    row.spread_stderr = est.std_error;
    for (NodeId u : sel.nodes) row.boost_set.push_back(prepared.original(u));
    out.push_back(std::move(row));
  }
  return out;
}

inline void print_compare_table(const std::vector<CompareRow>& rows, std::ostream& out) {
  std::size_t width = 8;
  for (const auto& r : rows) width = std::max(width, r.selector.size());
  out << std::left << std::setw(static_cast<int>(width)) << "selector" << std::right << std::setw(14) << "mean_ms"
      << std::setw(14) << "spread" << std::setw(12) << "stderr" << "  boost_set\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(static_cast<int>(width)) << r.selector << std::right << std::fixed
        << std::setprecision(3) << std::setw(14) << r.mean_ms << std::setw(14) << r.spread_mean << std::setw(12)
        << r.spread_stderr << "  ";
    for (std::size_t i = 0; i < r.boost_set.size(); ++i) out << (i ? ";" : "") << r.boost_set[i];
    out << '\n';
  }
  out.unsetf(std::ios::fixed);
}

}  // namespace tcboost::bench
