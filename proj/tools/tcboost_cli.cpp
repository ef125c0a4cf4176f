#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tcboost/bench/experiment.hpp"
#include "tcboost/sim/exact.hpp"

namespace {

using namespace tcboost;
using namespace tcboost::bench;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> rng_seed;
  std::string out_path;
};

// Flag beats TCBOOST_RNG_SEED, which beats the config file.
ExperimentConfig load(const Common& common) {
  ExperimentConfig config = load_config(common.config_path);
  if (common.rng_seed) {
    config.rng_seed = *common.rng_seed;
  } else if (const char* env = std::getenv("TCBOOST_RNG_SEED")) {
    config.rng_seed = bench::detail::parse_number<std::uint64_t>(env, "TCBOOST_RNG_SEED");
  }
  config.validate();
  return config;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty()) return;
    file_.open(path);
    if (!file_) throw ConfigError("cannot open output file '" + path + "'");
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void print_ids(std::ostream& out, const PreparedGraph& prepared, const std::vector<NodeId>& ids) {
  for (std::size_t i = 0; i < ids.size(); ++i) out << (i ? ";" : "") << prepared.original(ids[i]);
}

int cmd_select(const Common& common) {
  const ExperimentConfig config = load(common);
  const PreparedGraph prepared = prepare_graph(config);
  SeedResolver resolver(prepared, config);
  ExperimentConfig base = config;
  base.sweep_axis = SweepAxis::NONE;
  base.sweep_values.clear();
  const Cell cell = sweep_cells(base).front();
  const SeedSet seeds = resolver.seeds(cell.T, cell.seed_count);
  Output out(common.out_path);
  for (const auto& name : config.selectors) {
    const BoostSelection sel = run_selector(name, make_context(prepared, config, cell, seeds));
    out.stream() << name << '\t' << format_double(sel.elapsed_ms) << " ms\t";
    print_ids(out.stream(), prepared, sel.nodes);
    out.stream() << '\n';
    if (!sel.warning.empty()) std::cerr << name << ": " << sel.warning << '\n';
  }
  return 0;
}

int cmd_spread(const Common& common, const std::vector<std::uint64_t>& boost_ids, bool exact) {
  const ExperimentConfig config = load(common);
  const PreparedGraph prepared = prepare_graph(config);
  SeedResolver resolver(prepared, config);
  ExperimentConfig base = config;
  base.sweep_axis = SweepAxis::NONE;
  base.sweep_values.clear();
  const Cell cell = sweep_cells(base).front();
  const SeedSet seeds = resolver.seeds(cell.T, cell.seed_count);
  std::vector<NodeId> boost;
  for (auto id : boost_ids) boost.push_back(prepared.compact(id));
  Output out(common.out_path);
  SpreadEstimate est;
  if (exact) {
    const BoostedGraphView view(prepared.graph, boost, BoostSpec{cell.b, config.policy});
    est = exact_spread(view, seeds, cell.T);
  } else {
    est = evaluate_boost(prepared, config, cell, seeds, boost);
  }
  out.stream() << "spread\t" << format_double(est.mean) << "\nstderr\t" << format_double(est.std_error) << "\nruns\t"
               << est.runs << "\nexact\t" << (est.exact ? "yes" : "no") << '\n';
  return 0;
}

int cmd_bench(const Common& common) {
  const ExperimentConfig config = load(common);
  const std::vector<ResultRow> rows = run_experiment(config, &std::cerr);
  Output out(common.out_path.empty() ? config.output_path : common.out_path);
  write_csv(rows, out.stream());
  return 0;
}

int cmd_compare(const Common& common) {
  const ExperimentConfig config = load(common);
  Output out(common.out_path);
  print_compare_table(compare_selectors(config), out.stream());
  return 0;
}

int cmd_seeds(const Common& common) {
  const ExperimentConfig config = load(common);
  const PreparedGraph prepared = prepare_graph(config);
  SeedResolver resolver(prepared, config);
  const SeedSet seeds = resolver.seeds(config.T, config.seeds.empty() ? config.seed_count : config.seeds.size());
  Output out(common.out_path);
  print_ids(out.stream(), prepared, std::vector<NodeId>(seeds.begin(), seeds.end()));
  out.stream() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-constrained influence boosting benchmarks"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--rng-seed", common.rng_seed, "Master RNG seed (overrides TCBOOST_RNG_SEED and the config)");
    sub->add_option("--out", common.out_path, "Output file (default stdout)");
  };
  CLI::App* select = app.add_subcommand("select", "Run the configured selectors and print boost sets");
  CLI::App* spread = app.add_subcommand("spread", "Estimate spread of the seeds, optionally with a boost set");
  CLI::App* bench = app.add_subcommand("bench", "Run the full experiment and write CSV");
  CLI::App* compare = app.add_subcommand("compare", "Time selectors over several trials");
  CLI::App* seeds = app.add_subcommand("seeds", "Print the seed set the config resolves to");
  for (CLI::App* sub : {select, spread, bench, compare, seeds}) add_common(sub);
  std::vector<std::uint64_t> boost_ids;
  bool exact = false;
  spread->add_option("--boost", boost_ids, "Boosted node ids")->delimiter(',');
  spread->add_flag("--exact", exact, "Exact enumeration instead of Monte Carlo (small graphs only)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*select) return cmd_select(common);
    if (*spread) return cmd_spread(common, boost_ids, exact);
    if (*bench) return cmd_bench(common);
    if (*compare) return cmd_compare(common);
    if (*seeds) return cmd_seeds(common);
  } catch (const tcboost::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
