#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include "tcboost/core/delay.hpp"
#include "tcboost/core/error.hpp"

namespace tcboost {

// Distribution of an accumulated delay over {0..horizon}; mass above the
// horizon is dropped as soon as it appears.
using TimeDistribution = std::vector<double>;

inline TimeDistribution point_mass_at_zero(TimeUnits horizon) {
  TimeDistribution d(static_cast<std::size_t>(horizon) + 1, 0.0);
  d[0] = 1.0;
  return d;
}

// (dist * pmf) truncated at dist.size() - 1.
inline TimeDistribution convolve_truncated(std::span<const double> dist, const DelayPmf& pmf) {
  const auto horizon = static_cast<TimeUnits>(dist.size()) - 1;
  TimeDistribution out(dist.size(), 0.0);
  const auto pmf_last = std::min(pmf.horizon(), horizon);
  for (TimeUnits a = 0; a <= horizon; ++a) {
    const double da = dist[static_cast<std::size_t>(a)];
    if (da == 0.0) continue;
    for (TimeUnits d = 0; d <= pmf_last && a + d <= horizon; ++d)
      out[static_cast<std::size_t>(a + d)] += da * pmf.mass(d);
  }
  return out;
}

inline double total_mass(std::span<const double> dist) { return std::accumulate(dist.begin(), dist.end(), 0.0); }

// P(sum of independent delays <= horizon); 1 for an empty list.
inline double path_time_prob(std::span<const std::reference_wrapper<const DelayPmf>> delays, TimeUnits horizon) {
  if (horizon < 0) return 0.0;
  TimeDistribution dist = point_mass_at_zero(horizon);
  for (const DelayPmf& pmf : delays) dist = convolve_truncated(dist, pmf);
  return total_mass(dist);
}

inline double path_time_prob(std::span<const DelayPmf> delays, TimeUnits horizon) {
  std::vector<std::reference_wrapper<const DelayPmf>> refs(delays.begin(), delays.end());
  return path_time_prob(std::span<const std::reference_wrapper<const DelayPmf>>(refs), horizon);
}

// Single-variable approximation of path_time_prob for a path with `length`
// nodes: P(last interior delay <= floor(horizon / (length - 1))).
inline double fast_path_time_prob(const DelayPmf& last_interior, std::size_t length, TimeUnits horizon) {
  if (length < 2) throw ArgumentError("fast path-time approximation needs a path of at least 2 nodes");
  if (horizon < 0) return 0.0;
  return last_interior.cdf(horizon / static_cast<TimeUnits>(length - 1));
}

}  // namespace tcboost
