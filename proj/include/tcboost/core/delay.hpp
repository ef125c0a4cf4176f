#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tcboost/core/error.hpp"

namespace tcboost {

using TimeUnits = std::int32_t;

// Sentinel returned by DelayPmf::sample for a draw that falls into the
// beyond-horizon overflow mass.
inline constexpr TimeUnits kNeverArrives = -1;

// Discrete activation-delay distribution over {0..horizon()} plus the mass of
// delays longer than horizon(). Ordinary nodes have no mass at 0; the only
// zero-delay distribution is immediate(), used for the virtual seed.
class DelayPmf {
 public:
  static constexpr double kTolerance = 1e-12;

  DelayPmf() : DelayPmf(std::vector<double>{0.0, 1.0}, 0.0) {}

  // `mass[t]` is P(delay == t) for t in 0..mass.size()-1; `overflow` is the
  // probability of a delay beyond the last index.
  DelayPmf(std::vector<double> mass, double overflow) : mass_(std::move(mass)), overflow_(overflow) {
    if (mass_.empty()) throw ConfigError("delay pmf needs at least the t=0 slot");
    double total = overflow_;
    if (overflow_ < 0.0) throw ConfigError("delay pmf overflow mass is negative");
    for (double m : mass_) {
      if (!(m >= 0.0)) throw ConfigError("delay pmf has a negative or NaN mass");
      total += m;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw ConfigError("delay pmf does not sum to 1 (total " + std::to_string(total) + ")");
    rebuild_cdf();
  }

  // Probability-1 delay of zero time units.
  static DelayPmf immediate(TimeUnits horizon = 1) {
    std::vector<double> mass(static_cast<std::size_t>(horizon) + 1, 0.0);
    mass[0] = 1.0;
    return DelayPmf(std::move(mass), 0.0);
  }

  // Probability-1 delay of exactly `t` units (t >= 1).
  static DelayPmf deterministic(TimeUnits t, TimeUnits horizon) {
    std::vector<double> mass(static_cast<std::size_t>(std::max(t, horizon)) + 1, 0.0);
    mass[static_cast<std::size_t>(t)] = 1.0;
    return DelayPmf(std::move(mass), 0.0);
  }

  // Masses for t = 1..values.size(); remainder (if any) goes to overflow.
  static DelayPmf from_masses(std::span<const double> values) {
    std::vector<double> mass(values.size() + 1, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      mass[i + 1] = values[i];
      total += values[i];
    }
    return DelayPmf(std::move(mass), std::max(0.0, 1.0 - total));
  }

  TimeUnits horizon() const noexcept { return static_cast<TimeUnits>(mass_.size()) - 1; }

  double mass(TimeUnits t) const noexcept {
    if (t < 0 || t > horizon()) return 0.0;
    return mass_[static_cast<std::size_t>(t)];
  }
  double overflow() const noexcept { return overflow_; }
  std::span<const double> masses() const noexcept { return mass_; }

  // P(delay <= t); constant past the horizon.
  double cdf(TimeUnits t) const noexcept {
    if (t < 0) return 0.0;
    return cdf_[static_cast<std::size_t>(std::min(t, horizon()))];
  }

  // Smallest t with positive mass, or nullopt if all mass overflows.
  std::optional<TimeUnits> min_support() const noexcept {
    for (std::size_t t = 0; t < mass_.size(); ++t)
      if (mass_[t] > 0.0) return static_cast<TimeUnits>(t);
    return std::nullopt;
  }

  // Number of in-window values with positive mass, up to time `limit`.
  std::size_t support_size(TimeUnits limit) const noexcept {
    std::size_t count = 0;
    const auto last = std::min(limit, horizon());
    for (TimeUnits t = 0; t <= last; ++t)
      if (mass_[static_cast<std::size_t>(t)] > 0.0) ++count;
    return count;
  }

  // Inverse-cdf draw from a uniform in [0,1). Monotone in the uniform, so two
  // pmfs with cdf' >= cdf yield delay' <= delay on the same uniform.
  TimeUnits sample(double uniform) const noexcept {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), uniform);
    if (it == cdf_.end()) return kNeverArrives;
    return static_cast<TimeUnits>(it - cdf_.begin());
  }

  // E[delay | delay <= limit]; nullopt if that event has zero probability.
  std::optional<double> conditional_mean(TimeUnits limit) const noexcept {
    const auto last = std::min(limit, horizon());
    double weight = 0.0, acc = 0.0;
    for (TimeUnits t = 0; t <= last; ++t) {
      weight += mass_[static_cast<std::size_t>(t)];
      acc += t * mass_[static_cast<std::size_t>(t)];
    }
    if (weight <= 0.0) return std::nullopt;
    return acc / weight;
  }

  // Recorded generation parameter (exponential rate), if any.
  std::optional<double> alpha() const noexcept { return alpha_; }
  void set_alpha(double alpha) noexcept { alpha_ = alpha; }

  friend bool operator==(const DelayPmf& a, const DelayPmf& b) noexcept {
    return a.mass_ == b.mass_ && a.overflow_ == b.overflow_;
  }

 private:
  void rebuild_cdf() {
    cdf_.resize(mass_.size());
    double acc = 0.0;
    for (std::size_t t = 0; t < mass_.size(); ++t) {
      acc += mass_[t];
      cdf_[t] = std::min(acc, 1.0);
    }
  }

  std::vector<double> mass_;
  std::vector<double> cdf_;
  double overflow_ = 0.0;
  std::optional<double> alpha_;
};

// Ceiling of an Exp(alpha) waiting time: mass(t) = e^{-a(t-1)} - e^{-at}
// for t in 1..horizon, with e^{-a*horizon} kept as overflow.
inline DelayPmf exponential_delay(double alpha, TimeUnits horizon) {
  if (!(alpha > 0.0)) throw ConfigError("exponential delay rate must be > 0");
  if (horizon < 1) throw ConfigError("delay horizon must be >= 1");
  std::vector<double> mass(static_cast<std::size_t>(horizon) + 1, 0.0);
  const double step = -std::expm1(-alpha);  // 1 - e^{-alpha}
  for (TimeUnits t = 1; t <= horizon; ++t) mass[static_cast<std::size_t>(t)] = std::exp(-alpha * (t - 1)) * step;
  DelayPmf pmf(std::move(mass), std::exp(-alpha * horizon));
  pmf.set_alpha(alpha);
  return pmf;
}

}  // namespace tcboost
