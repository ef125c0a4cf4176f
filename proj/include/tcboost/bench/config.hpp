#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tcboost/boost/boost.hpp"
#include "tcboost/core/error.hpp"
#include "tcboost/core/models.hpp"
#include "tcboost/selectors/registry.hpp"

namespace tcboost::bench {

enum class ProbModel { WC, TRIVALENCY };
enum class SeedQuality { GOOD, MEDIUM, POOR };
enum class SweepAxis { NONE, T, K, B, SEED_COUNT };

inline std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::NONE: return "none";
    case SweepAxis::T: return "T";
    case SweepAxis::K: return "k";
    case SweepAxis::B: return "b";
    case SweepAxis::SEED_COUNT: return "seed_count";
  }
  return "none";
}

inline SeedQuality parse_seed_quality(std::string_view s) {
  if (s == "good") return SeedQuality::GOOD;
  if (s == "medium") return SeedQuality::MEDIUM;
  if (s == "poor") return SeedQuality::POOR;
  throw ConfigError("unknown seed quality '" + std::string(s) + "' (expected good, medium or poor)");
}

struct SyntheticGraphSpec {
  std::size_t nodes = 7000;
  std::size_t edges = 100000;
  double exponent = 2.1;
  std::uint64_t seed = 1;
};

// One experiment, parsed from a flat `key = value` file. Defaults follow the
// usual setup: T=15, k=5, |S|=2, b=0.1, R=10000, lambda=2, first_tu, wc.
struct ExperimentConfig {
  std::string graph_path;
  std::optional<SyntheticGraphSpec> synthetic;
  ProbModel prob_model = ProbModel::WC;
  std::vector<double> trivalency_values = trivalency_default();
  std::uint64_t prob_seed = 1;
  std::optional<double> delay_alpha;  // nullopt: per-node uniform in (0, 1]
  std::uint64_t delay_seed = 2;
  TimeUnits T = 15;
  std::size_t k = 5;
  double b = 0.1;
  DelayPolicy policy = DelayPolicy::FirstTU;
  std::size_t lambda = 2;
  std::size_t R = 10000;
  std::optional<std::size_t> eval_R;
  std::vector<std::uint64_t> seeds;  // explicit ids as they appear in the graph file
  std::size_t seed_count = 2;
  SeedQuality seed_quality = SeedQuality::GOOD;
  std::uint64_t seed_rng = 3;
  std::size_t seed_ranking_runs = 200;
  std::vector<std::string> selectors{"tmoboo"};
  SweepAxis sweep_axis = SweepAxis::NONE;
  std::vector<double> sweep_values;
  std::string output_path;
  std::uint64_t rng_seed = 0;
  std::size_t trials = 3;
  std::size_t workers = default_workers();

  std::size_t evaluation_runs() const noexcept { return eval_R.value_or(R); }

  // Largest horizon any cell of the sweep will use.
  TimeUnits max_horizon() const noexcept {
    TimeUnits h = T;
    if (sweep_axis == SweepAxis::T)
      for (double v : sweep_values) h = std::max(h, static_cast<TimeUnits>(v));
    return h;
  }

  void validate() const {
    if (graph_path.empty() == !synthetic.has_value())
      throw ConfigError("exactly one of graph_path and graph_generator must be given");
    if (T < 0) throw ConfigError("T must be >= 0");
    if (R < 1 || evaluation_runs() < 1) throw ConfigError("R must be >= 1");
    if (lambda < 1) throw ConfigError("lambda must be >= 1");
    BoostSpec{b, policy}.validate();
    if (prob_model == ProbModel::TRIVALENCY && trivalency_values.empty()) throw ConfigError("trivalency value set is empty");
    if (delay_alpha && !(*delay_alpha > 0.0)) throw ConfigError("delay_alpha must be > 0");
    if (seeds.empty() && seed_count < 1) throw ConfigError("seed_count must be >= 1");
    for (const auto& s : selectors)
      if (!is_known_selector(s)) throw ConfigError("unknown selector '" + s + "'");
    if (sweep_axis != SweepAxis::NONE && sweep_values.empty()) throw ConfigError("sweep_axis given without sweep_values");
    if (sweep_axis == SweepAxis::NONE && !sweep_values.empty()) throw ConfigError("sweep_values given without sweep_axis");
    for (double v : sweep_values) {
      switch (sweep_axis) {
        case SweepAxis::T:
          if (v < 0 || v != static_cast<TimeUnits>(v)) throw ConfigError("T sweep values must be nonnegative integers");
          break;
        case SweepAxis::K:
          if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)))
            throw ConfigError("k sweep values must be nonnegative integers");
          break;
        case SweepAxis::B: BoostSpec{v, policy}.validate(); break;
        case SweepAxis::SEED_COUNT:
          if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v)))
            throw ConfigError("seed_count sweep values must be positive integers");
          if (!seeds.empty()) throw ConfigError("a seed_count sweep needs generated seeds, not an explicit list");
          break;
        case SweepAxis::NONE: break;
      }
    }
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto piece = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view text, std::string_view key) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end)
    throw ConfigError("invalid value '" + std::string(text) + "' for key '" + std::string(key) + "'");
  return value;
}

}  // namespace detail

// Parses the flat config format: `key = value` lines, '#' comments, list
// values comma separated. Unknown keys are errors.
inline ExperimentConfig parse_config(std::istream& in) {
  using detail::parse_number;
  ExperimentConfig c;
  SyntheticGraphSpec synthetic;
  bool want_synthetic = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = detail::trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
    const std::string key = detail::trim(std::string_view(body).substr(0, eq));
    const std::string value = detail::trim(std::string_view(body).substr(eq + 1));
    try {
      if (key == "graph_path") c.graph_path = value;
      else if (key == "graph_generator") {
        if (value != "powerlaw") throw ConfigError("unknown graph_generator '" + value + "'");
        want_synthetic = true;
      } else if (key == "synthetic_nodes") synthetic.nodes = parse_number<std::size_t>(value, key);
      else if (key == "synthetic_edges") synthetic.edges = parse_number<std::size_t>(value, key);
      else if (key == "synthetic_exponent") synthetic.exponent = parse_number<double>(value, key);
      else if (key == "synthetic_seed") synthetic.seed = parse_number<std::uint64_t>(value, key);
      else if (key == "prob_model") {
        if (value == "wc") c.prob_model = ProbModel::WC;
        else if (value == "trivalency" || value == "tr010") c.prob_model = ProbModel::TRIVALENCY, c.trivalency_values = trivalency_default();
        else if (value == "tr005") c.prob_model = ProbModel::TRIVALENCY, c.trivalency_values = trivalency_tr005();
        else if (value == "tr015") c.prob_model = ProbModel::TRIVALENCY, c.trivalency_values = trivalency_tr015();
        else throw ConfigError("unknown prob_model '" + value + "'");
      } else if (key == "trivalency_values") {
        c.trivalency_values.clear();
        for (const auto& v : detail::split_list(value)) c.trivalency_values.push_back(parse_number<double>(v, key));
      } else if (key == "prob_seed") c.prob_seed = parse_number<std::uint64_t>(value, key);
      else if (key == "delay_alpha") {
        if (value == "uniform") c.delay_alpha.reset();
        else c.delay_alpha = parse_number<double>(value, key);
      } else if (key == "delay_seed") c.delay_seed = parse_number<std::uint64_t>(value, key);
      else if (key == "T") c.T = parse_number<TimeUnits>(value, key);
      else if (key == "k") c.k = parse_number<std::size_t>(value, key);
      else if (key == "b") c.b = parse_number<double>(value, key);
      else if (key == "policy") c.policy = parse_delay_policy(value);
      else if (key == "lambda") c.lambda = parse_number<std::size_t>(value, key);
      else if (key == "R") c.R = parse_number<std::size_t>(value, key);
      else if (key == "eval_R") c.eval_R = parse_number<std::size_t>(value, key);
      else if (key == "seeds") {
        c.seeds.clear();
        for (const auto& v : detail::split_list(value)) c.seeds.push_back(parse_number<std::uint64_t>(v, key));
      } else if (key == "seed_count") c.seed_count = parse_number<std::size_t>(value, key);
      else if (key == "seed_quality") c.seed_quality = parse_seed_quality(value);
      else if (key == "seed_rng") c.seed_rng = parse_number<std::uint64_t>(value, key);
      else if (key == "seed_ranking_runs") c.seed_ranking_runs = parse_number<std::size_t>(value, key);
      else if (key == "selectors") c.selectors = detail::split_list(value);
      else if (key == "sweep_axis") {
        if (value == "none") c.sweep_axis = SweepAxis::NONE;
        else if (value == "T") c.sweep_axis = SweepAxis::T;
        else if (value == "k") c.sweep_axis = SweepAxis::K;
        else if (value == "b") c.sweep_axis = SweepAxis::B;
        else if (value == "seed_count") c.sweep_axis = SweepAxis::SEED_COUNT;
        else throw ConfigError("unknown sweep_axis '" + value + "'");
      } else if (key == "sweep_values") {
        c.sweep_values.clear();
        for (const auto& v : detail::split_list(value)) c.sweep_values.push_back(parse_number<double>(v, key));
      } else if (key == "output_path") c.output_path = value;
      else if (key == "rng_seed") c.rng_seed = parse_number<std::uint64_t>(value, key);
      else if (key == "trials") c.trials = parse_number<std::size_t>(value, key);
      else if (key == "workers") c.workers = std::max<std::size_t>(1, parse_number<std::size_t>(value, key));
      else throw ConfigError("unknown config key '" + key + "'");
    } catch (const ConfigError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (want_synthetic) c.synthetic = synthetic;
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace tcboost::bench
