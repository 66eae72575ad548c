#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "crafterlab/analytics/tables.hpp"
#include "crafterlab/core/errors.hpp"

namespace crafterlab {

// Shannon entropy in nats of the empirical distribution N_s / sum N.
inline double entropy(const CountMap& counts) {
  double total = 0.0;
  for (const auto& [k, n] : counts) {
    if (n < 0) throw InputError("negative visitation count for '" + k + "'");
    total += static_cast<double>(n);
  }
  if (total <= 0.0) throw UndefinedInputError("entropy of an empty count table");
  double h = 0.0;
  for (const auto& [k, n] : counts) {
    if (n == 0) continue;
    const double p = static_cast<double>(n) / total;
    h -= p * std::log(p);
  }
  return h;
}

inline double entropy(const VisitationCounts& counts) { return entropy(counts.total); }

inline double entropy(const VisitationCounts& counts, std::size_t through_episode) {
  return entropy(counts.through(through_episode));
}

// Cumulative entropy after each episode.
inline std::vector<double> entropy_curve(const VisitationCounts& counts) {
  std::vector<double> out;
  CountMap running;
  for (const auto& ep : counts.per_episode) {
    for (const auto& [k, n] : ep) running[k] += n;
    out.push_back(running.empty() ? 0.0 : entropy(running));
  }
  return out;
}

// Average log-count information gain per counted transition for every
// episode: sum over (s,a) of ln(1+N^e) - ln(1+N^{e-1}), divided by the number
// of transitions in that episode. Episodes without transitions are empty.
inline std::vector<std::optional<double>> info_gain_curve(const TransitionTable& table) {
  std::vector<std::optional<double>> out;
  std::map<StateAction, std::int64_t> cumulative;
  for (const auto& ep : table.per_episode_marginals) {
    double gain = 0.0;
    std::int64_t n = 0;
    for (const auto& [sa, delta] : ep) {
      auto& c = cumulative[sa];
      gain += std::log1p(static_cast<double>(c + delta)) - std::log1p(static_cast<double>(c));
      c += delta;
      n += delta;
    }
    out.push_back(n > 0 ? std::optional<double>(gain / static_cast<double>(n)) : std::nullopt);
  }
  return out;
}

// IG for episode `e` (0-based). Empty when the episode has no counted transitions.
inline std::optional<double> info_gain_episode(const TransitionTable& table, std::size_t e) {
  if (e >= table.episodes()) throw InputError("episode " + std::to_string(e) + " out of range");
  return info_gain_curve(table)[e];
}

inline double mean_defined(const std::vector<std::optional<double>>& curve) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& v : curve)
    if (v) {
      sum += *v;
      ++n;
    }
  if (n == 0) throw UndefinedInputError("no episode has a defined information gain");
  return sum / static_cast<double>(n);
}

// Unweighted mean of the defined per-episode values.
inline double overall_info_gain(const TransitionTable& table) { return mean_defined(info_gain_curve(table)); }

}  // namespace crafterlab
