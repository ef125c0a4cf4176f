// Acceptance suite: one PASS/FAIL line per criterion on stdout, details on
// stderr. Exit status is nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/support.hpp"
#include "tcboost/bench/experiment.hpp"
#include "tcboost/paths/convolution.hpp"
#include "tcboost/selectors/registry.hpp"
#include "tcboost/sim/exact.hpp"

using namespace tcboost;
using namespace tcboost::testing;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool run_criterion(int id, const std::string& title, double budget_s, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed = seconds_since(start);
  std::ostringstream timing;
  timing << std::fixed << std::setprecision(2) << elapsed << " s";
  if (budget_s > 0) {
    timing << " of " << budget_s << " s budget";
    if (elapsed > budget_s) {
      out.pass = false;
      out.detail += "; over runtime budget";
    }
  }
  std::cout << (out.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " [" << out.detail << "; "
            << timing.str() << "]" << std::endl;
  return out.pass;
}

std::string fmt(double x, int precision = 4) {
  std::ostringstream s;
  s << std::setprecision(precision) << x;
  return s.str();
}

double pi_exact(const DirectedGraph& g, const std::vector<NodeId>& B, BoostSpec spec, const SeedSet& seeds,
                TimeUnits T) {
  return exact_spread(BoostedGraphView(g, B, spec), seeds, T).mean;
}

// -- 1 ---------------------------------------------------------------------

Outcome witness() {
  // u1..u4 = 0..3 on latent edges; u4 reaches w1..w3 = 4..6 for sure.
  const DirectedGraph g = make_graph(7, {{0, 1, 0.0}, {1, 2, 0.0}, {2, 3, 0.0}, {3, 4, 1.0}, {3, 5, 1.0}, {3, 6, 1.0}},
                                     uniform_delays(7, unit_delay(10)));
  const BoostSpec spec{1.0, DelayPolicy::FirstTU};
  const SeedSet seeds{0};
  const double small = pi_exact(g, {0, 2}, spec, seeds, 10) - pi_exact(g, {0}, spec, seeds, 10);
  const double large = pi_exact(g, {0, 1, 2}, spec, seeds, 10) - pi_exact(g, {0, 1}, spec, seeds, 10);
  return {small == 0.0 && large == 4.0,
          "gain(u3|{u1}) = " + fmt(small) + ", gain(u3|{u1,u2}) = " + fmt(large) + ", expected 0 and 4 exactly"};
}

// -- 2 ---------------------------------------------------------------------

Outcome monotonicity() {
  std::mt19937_64 rng(2024);
  const BoostSpec specs[] = {{0.1, DelayPolicy::FirstTU}, {0.3, DelayPolicy::SecondTU},
                             {0.2, DelayPolicy::PropProbOnly}, {1.0, DelayPolicy::FirstTU}};
  std::size_t checks = 0, violations = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial) % 6;
    const DirectedGraph g = random_graph(rng, n, std::min<std::size_t>(n + 4, 11), 2, trial % 2 == 0);
    const BoostSpec spec = specs[trial % 4];
    const TimeUnits T = 1 + trial % 5;
    const SeedSet seeds{0};
    std::vector<double> pi(std::size_t{1} << n);
    for (std::size_t mask = 0; mask < pi.size(); ++mask) {
      std::vector<NodeId> B;
      for (NodeId u = 0; u < n; ++u)
        if (mask >> u & 1) B.push_back(u);
      pi[mask] = pi_exact(g, B, spec, seeds, T);
    }
    for (std::size_t mask = 0; mask < pi.size(); ++mask)
      for (NodeId u = 0; u < n; ++u) {
        if (mask >> u & 1) continue;
        ++checks;
        const double drop = pi[mask] - pi[mask | (std::size_t{1} << u)];
        worst = std::max(worst, drop);
        if (drop > 1e-12) ++violations;
      }
  }
  return {violations == 0, std::to_string(checks) + " (B,u) pairs, " + std::to_string(violations) +
                               " violations, largest decrease " + fmt(worst) + ", tolerance 1e-12"};
}

// -- 3 ---------------------------------------------------------------------

double per_path_gain(const InfluenceTree& tree, NodeId u, double b) {
  double gain = 0.0;
  for (NodeId w : tree.order) {
    double before = 1.0, after = 1.0;
    bool through = false;
    for (NodeId x = w; tree.parent[x] != tree.root; x = tree.parent[x]) {
      const double p = tree.edge_prob[x];
      before *= p;
      after *= tree.parent[x] == u ? std::min(p + b, 1.0) : p;
      through = through || tree.parent[x] == u;
    }
    if (through) gain += after - before;
  }
  return gain;
}

Outcome tree_gain() {
  std::mt19937_64 rng(3);
  const double b = 0.1;
  double worst_path = 0.0, worst_exact = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial) % 29;
    const DirectedGraph g = random_tree(rng, n, unit_delay(40));
    BoostedGraphView view(g, BoostSpec{b, DelayPolicy::FirstTU});
    InfluenceTree tree = build_mit(view, SeedSet{0}, 40);
    for (int round = 0; round < 3; ++round) {
      const auto gain = mit_gains(tree, b);
      for (NodeId u : tree.order)
        if (!view.is_boosted(u)) worst_path = std::max(worst_path, std::abs(gain[u] - per_path_gain(tree, u, b)));
      const NodeId pick = tree.order[static_cast<std::size_t>(trial + round) % tree.order.size()];
      if (view.is_boosted(pick)) break;
      view.add(pick);
      rescale_boosted_subtree(tree, pick, b);
    }
  }
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial) % 8;
    std::vector<DelayPmf> delays;
    for (std::size_t i = 0; i < n; ++i) delays.push_back(random_pmf(rng, 2, false));
    const DirectedGraph shape = random_tree(rng, n, unit_delay(2));
    const DirectedGraph g = shape.with_delays(delays);
    const TimeUnits T = static_cast<TimeUnits>(2 * n);  // never binds
    const BoostSpec spec{b, trial % 2 ? DelayPolicy::FirstTU : DelayPolicy::SecondTU};
    BoostedGraphView view(g, spec);
    InfluenceTree tree = build_mit(view, SeedSet{0}, T);
    std::vector<NodeId> B;
    for (int round = 0; round < 2; ++round) {
      const auto gain = mit_gains(tree, b);
      const double base = pi_exact(g, B, spec, SeedSet{0}, T);
      for (NodeId u : tree.order) {
        if (view.is_boosted(u)) continue;
        auto with_u = B;
        with_u.push_back(u);
        worst_exact = std::max(worst_exact, std::abs(gain[u] - (pi_exact(g, with_u, spec, SeedSet{0}, T) - base)));
      }
      const NodeId pick = tree.order[static_cast<std::size_t>(trial) % tree.order.size()];
      B.push_back(pick);
      view.add(pick);
      rescale_boosted_subtree(tree, pick, b);
    }
  }
  return {worst_path <= 1e-12 && worst_exact <= 1e-9,
          "max |bottom-up - per-path| = " + fmt(worst_path) + " (tol 1e-12), max |g - exact diff| = " +
              fmt(worst_exact) + " (tol 1e-9)"};
}

// -- 4 ---------------------------------------------------------------------

Outcome convolution() {
  std::mt19937_64 rng(4);
  double worst = 0.0, worst_fast = 0.0;
  std::size_t cases = 0;
  for (int len = 1; len <= 4; ++len)
    for (int trial = 0; trial < 600; ++trial) {
      std::vector<DelayPmf> delays;
      for (int i = 0; i < len; ++i)
        delays.push_back(random_pmf(rng, 1 + static_cast<TimeUnits>(rng() % 3), (trial + i) % 3 == 0));
      for (TimeUnits T = 0; T <= 13; ++T) {
        worst = std::max(worst, std::abs(path_time_prob(delays, T) - oracle_path_time_prob(delays, T)));
        ++cases;
        if (len == 1) {
          const double fast = fast_path_time_prob(delays[0], 2, T);
          worst_fast = std::max(worst_fast, std::abs(fast - path_time_prob(delays, T)));
        }
      }
    }
  return {worst <= 1e-12 && worst_fast <= 1e-12,
          std::to_string(cases) + " (path, T) cases, max error " + fmt(worst) + ", fast at l=2 max error " +
              fmt(worst_fast) + ", tolerance 1e-12"};
}

// -- 5 ---------------------------------------------------------------------

Outcome estimator() {
  std::mt19937_64 rng(5);
  const int graphs = 50;
  int within = 0;
  double worst_z = 0.0;
  for (int trial = 0; trial < graphs; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial) % 5;
    const DirectedGraph g = random_graph(rng, n, n + 3, 2, trial % 2 == 0);
    std::vector<NodeId> B;
    for (NodeId u = 0; u < n; ++u)
      if (rng() % 3 == 0) B.push_back(u);
    const BoostSpec spec{0.05 + 0.05 * (trial % 4), trial % 3 ? DelayPolicy::FirstTU : DelayPolicy::SecondTU};
    const BoostedGraphView view(g, B, spec);
    const TimeUnits T = 1 + trial % 5;
    const double exact = exact_spread(view, SeedSet{0}, T).mean;
    const auto est = estimate_spread(view, SeedSet{0}, T, 20000, static_cast<std::uint64_t>(trial));
    const double err = std::abs(est.mean - exact);
    if (err <= 4 * est.std_error + 1e-12) ++within;
    if (est.std_error > 0) worst_z = std::max(worst_z, err / est.std_error);
  }
  const double share = static_cast<double>(within) / graphs;
  return {share >= 0.95, std::to_string(within) + "/" + std::to_string(graphs) +
                             " within 4 se (need >= 95%), largest |z| = " + fmt(worst_z)};
}

// -- 6 ---------------------------------------------------------------------

Outcome boost_invariants() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> B(0.01, 0.225);
  std::size_t failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const DelayPmf d = random_pmf(rng, 1 + static_cast<TimeUnits>(rng() % 6), i % 2 == 0);
    const double b = B(rng);
    for (DelayPolicy policy : {DelayPolicy::FirstTU, DelayPolicy::SecondTU}) {
      const DelayPmf out = boost_delay(d, b, policy);
      double total = out.overflow();
      for (TimeUnits t = 0; t <= d.horizon(); ++t) {
        total += out.mass(t);
        if (out.cdf(t) < d.cdf(t) - 1e-15) ++failures;
      }
      if (std::abs(total - 1.0) > 1e-12) ++failures;
    }
    if (!(boost_delay(d, b, DelayPolicy::PropProbOnly) == d)) ++failures;
  }
  for (int i = 0; i < 200; ++i) {
    const DirectedGraph g = random_graph(rng, 8, 20, 3, true);
    std::vector<NodeId> boosted;
    for (NodeId u = 0; u < 8; ++u)
      if (rng() % 2) boosted.push_back(u);
    const double b = B(rng);
    const BoostedGraphView prop(g, boosted, BoostSpec{b, DelayPolicy::PropProbOnly});
    const BoostedGraphView first(g, boosted, BoostSpec{b, DelayPolicy::FirstTU});
    for (NodeId u = 0; u < 8; ++u) {
      if (!(prop.delay(u) == g.delay(u))) ++failures;
      for (EdgeId e = g.edges_begin(u); e < g.edges_end(u); ++e) {
        const double p = first.prob(u, e);
        const double expected = first.is_boosted(u) ? std::min(g.prob(e) + b, 1.0) : g.prob(e);
        if (p > 1.0 || p != expected) ++failures;
      }
    }
  }
  return {failures == 0, std::to_string(failures) + " invariant violations over 1000 pmfs and 200 boosted graphs"};
}

// -- 7, 8, 9 ---------------------------------------------------------------

bench::ExperimentConfig defaults_config() {
  bench::ExperimentConfig c;
  if (const char* wiki = std::getenv("TCBOOST_WIKI"))
    c.graph_path = wiki;
  else
    c.synthetic = bench::SyntheticGraphSpec{7000, 100000, 2.1, 1};
  c.prob_model = bench::ProbModel::WC;
  c.T = 15;
  c.k = 5;
  c.b = 0.1;
  c.policy = DelayPolicy::FirstTU;
  c.R = 10000;
  c.lambda = 2;
  c.seed_count = 2;
  c.seed_quality = bench::SeedQuality::GOOD;
  c.selectors = {"tmoboo"};
  c.rng_seed = 11;
  return c;
}

constexpr int kSeedDraws = 5;

struct Averaged {
  double mean = 0.0;
  double se = 0.0;
};

// Averages each selector's spread per cell over kSeedDraws seed draws.
std::vector<std::vector<Averaged>> average_over_draws(bench::ExperimentConfig c, std::size_t rows_per_cell) {
  std::vector<std::vector<Averaged>> acc;
  for (int draw = 0; draw < kSeedDraws; ++draw) {
    c.seed_rng = 100 + static_cast<std::uint64_t>(draw);
    const auto rows = bench::run_experiment(c);
    const std::size_t cells = rows.size() / rows_per_cell;
    acc.resize(cells, std::vector<Averaged>(rows_per_cell));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      auto& a = acc[i / rows_per_cell][i % rows_per_cell];
      a.mean += rows[i].spread_mean / kSeedDraws;
      a.se += rows[i].spread_stderr * rows[i].spread_stderr;
    }
  }
  for (auto& cell : acc)
    for (auto& a : cell) a.se = std::sqrt(a.se) / kSeedDraws;
  return acc;
}

Outcome trends() {
  const std::string source = std::getenv("TCBOOST_WIKI") ? "Wiki graph" : "7k synthetic power-law graph";
  bool ok = true;
  std::ostringstream detail;
  detail << source;

  struct Sweep {
    bench::SweepAxis axis;
    std::vector<double> values;
  };
  const Sweep sweeps[] = {{bench::SweepAxis::B, {0.05, 0.1, 0.2}},
                          {bench::SweepAxis::T, {10, 15, 19}},
                          {bench::SweepAxis::K, {1, 2, 5, 10}}};
  for (const auto& sweep : sweeps) {
    bench::ExperimentConfig c = defaults_config();
    c.sweep_axis = sweep.axis;
    c.sweep_values = sweep.values;
    const auto cells = average_over_draws(c, 2);  // no_boost, tmoboo
    std::cerr << "  sweep " << bench::to_string(sweep.axis) << ":";
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const auto& base = cells[i][0];
      const auto& boosted = cells[i][1];
      std::cerr << "  " << fmt(sweep.values[i]) << " -> " << fmt(boosted.mean, 6) << " (no boost " << fmt(base.mean, 6)
                << ")";
      if (boosted.mean <= base.mean) {
        ok = false;
        detail << "; tmoboo <= no_boost at " << bench::to_string(sweep.axis) << "=" << fmt(sweep.values[i]);
      }
      if (i > 0) {
        const auto& prev = cells[i - 1][1];
        const double slack = 2 * std::sqrt(prev.se * prev.se + boosted.se * boosted.se);
        if (boosted.mean < prev.mean - slack) {
          ok = false;
          detail << "; decrease along " << bench::to_string(sweep.axis) << " at " << fmt(sweep.values[i]);
        }
      }
    }
    std::cerr << '\n';
    detail << "; " << bench::to_string(sweep.axis) << " sweep " << fmt(cells.front()[1].mean, 5) << " .. "
           << fmt(cells.back()[1].mean, 5);
  }
  detail << "; nondecreasing within 2 se, tmoboo > no_boost in every cell";
  return {ok, detail.str()};
}

double time_selector(const std::string& name, const SelectorContext& ctx, int repeats) {
  std::vector<double> ms;
  for (int i = 0; i < repeats; ++i) {
    const auto start = Clock::now();
    run_selector(name, ctx);
    ms.push_back(seconds_since(start) * 1e3);
  }
  std::sort(ms.begin(), ms.end());
  return ms[ms.size() / 2];
}

Outcome performance() {
  bench::ExperimentConfig c = defaults_config();
  c.R = 1000;
  c.seed_rng = 100;
  const bench::PreparedGraph prepared = bench::prepare_graph(c);
  bench::SeedResolver resolver(prepared, c);
  const bench::Cell cell = bench::sweep_cells(c).front();
  const SelectorContext ctx = bench::make_context(prepared, c, cell, resolver.seeds(cell.T, cell.seed_count));
  const double moboo = time_selector("moboo", ctx, 5);
  const double spp = time_selector("spp_mit", ctx, 25);
  const double greedy = time_selector("greedy_batch", ctx, 1);
  const bool ok = prepared.graph.node_count() >= 5000 && greedy >= 10 * moboo && spp < 0.01 * moboo;
  return {ok, std::to_string(prepared.graph.node_count()) + " nodes, R=1000: greedy_batch " + fmt(greedy) +
                  " ms, moboo " + fmt(moboo) + " ms (ratio " + fmt(greedy / moboo) + ", need >= 10), spp_mit " +
                  fmt(spp) + " ms (" + fmt(100 * spp / moboo) + "% of moboo, need < 1%)"};
}

Outcome policy_order() {
  const DelayPolicy order[] = {DelayPolicy::FirstTU, DelayPolicy::SecondTU, DelayPolicy::PropProbOnly};
  std::vector<Averaged> spread;
  for (DelayPolicy policy : order) {
    bench::ExperimentConfig c = defaults_config();
    c.b = 0.2;
    c.policy = policy;
    spread.push_back(average_over_draws(c, 2).front()[1]);
  }
  bool ok = true;
  for (std::size_t i = 1; i < spread.size(); ++i) {
    const double slack = 2 * std::sqrt(spread[i - 1].se * spread[i - 1].se + spread[i].se * spread[i].se);
    ok = ok && spread[i - 1].mean >= spread[i].mean - slack;
  }
  return {ok, "b=0.2 tmoboo spread: first_tu " + fmt(spread[0].mean, 6) + ", second_tu " + fmt(spread[1].mean, 6) +
                  ", prop_prob_only " + fmt(spread[2].mean, 6) + " (se ~" + fmt(spread[0].se, 2) +
                  "), ordering checked within 2 se"};
}

}  // namespace

int main() {
  bool all = true;
  all &= run_criterion(1, "non-submodularity witness", 1, witness);
  all &= run_criterion(2, "monotonicity in the boost set", 120, monotonicity);
  all &= run_criterion(3, "tree gain formula", 60, tree_gain);
  all &= run_criterion(4, "path time probability by convolution", 10, convolution);
  all &= run_criterion(5, "Monte Carlo estimator soundness", 300, estimator);
  all &= run_criterion(6, "boost invariants", 10, boost_invariants);
  all &= run_criterion(7, "spread trends over b, T and k", 1800, trends);
  all &= run_criterion(8, "selection time contrast", 0, performance);
  all &= run_criterion(9, "delay policy ordering", 0, policy_order);
  return all ? 0 : 1;
}
