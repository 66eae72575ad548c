#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "crafterlab/agents/agent_config.hpp"
#include "crafterlab/core/rng.hpp"
#include "crafterlab/world/world.hpp"

namespace crafterlab {

// No-op with probability `noop_probability`, otherwise uniform over the
// remaining actions (the no-op is not drawn again in that branch).
inline std::size_t random_policy(Engine& rng, std::size_t action_count, std::size_t noop_index,
                                 double noop_probability) {
  if (uniform01(rng) < noop_probability || action_count <= 1) return noop_index;
  auto pick = uniform_index(rng, static_cast<std::uint32_t>(action_count - 1));
  return pick >= noop_index ? pick + 1 : pick;
}

// Achievements already rewarded in the current episode.
using EpisodeMemory = std::set<std::string>;

// +1 per achievement new this episode, +0.1 / -0.1 per health point gained / lost.
inline double extrinsic_reward(const StepEvents& events, EpisodeMemory& memory) {
  double r = 0.0;
  for (const auto& a : events.achievements_unlocked)
    if (memory.insert(a).second) r += 1.0;
  r += 0.1 * events.health_gains();
  r -= 0.1 * events.health_losses();
  return r;
}

using VisitCounts = std::unordered_map<std::string, std::int64_t>;

inline double novelty_score(std::int64_t visits) { return 1.0 / std::sqrt(1.0 + static_cast<double>(visits)); }

// max(nu(s') - alpha * nu(s), 0), paid only on the first visit to s' this
// episode. `counts` are the visit counts before s' is added.
inline double novelty_reward(const std::string& next, const std::string& prev, const VisitCounts& counts,
                             const std::unordered_set<std::string>& visited_this_episode, double alpha = 0.5) {
  if (visited_this_episode.count(next)) return 0.0;
  const auto n = [&](const std::string& k) {
    auto it = counts.find(k);
    return it == counts.end() ? std::int64_t{0} : it->second;
  };
  return std::max(novelty_score(n(next)) - alpha * novelty_score(n(prev)), 0.0);
}

// Running empirical entropy of a count table, updated in O(1) per visit.
class EntropyTracker {
 public:
  // Adds one visit to `key` and returns the resulting entropy change.
  double add(const std::string& key) {
    const double before = entropy();
    auto& n = counts_[key];
    sum_n_log_n_ -= n > 0 ? n * std::log(static_cast<double>(n)) : 0.0;
    ++n;
    sum_n_log_n_ += n * std::log(static_cast<double>(n));
    ++total_;
    return entropy() - before;
  }
  double entropy() const {
    if (total_ == 0) return 0.0;
    const double t = static_cast<double>(total_);
    return std::max(0.0, std::log(t) - sum_n_log_n_ / t);
  }

 private:
  std::unordered_map<std::string, std::int64_t> counts_;
  double sum_n_log_n_ = 0.0;
  std::int64_t total_ = 0;
};

// Linear from epsilon_start to epsilon_end over epsilon_decay_steps, then flat.
inline double epsilon(std::int64_t step, const AgentConfig& cfg) {
  if (cfg.epsilon_decay_steps <= 0 || step >= cfg.epsilon_decay_steps) return cfg.epsilon_end;
  const double frac = static_cast<double>(std::max<std::int64_t>(step, 0)) / cfg.epsilon_decay_steps;
  return cfg.epsilon_start + frac * (cfg.epsilon_end - cfg.epsilon_start);
}

class QTable {
 public:
  explicit QTable(std::size_t action_count) : action_count_(action_count) {}

  std::vector<double>& row(const std::string& state) {
    auto [it, inserted] = table_.try_emplace(state);
    if (inserted) it->second.assign(action_count_, 0.0);
    return it->second;
  }

  double max_value(const std::string& state) const {
    auto it = table_.find(state);
    if (it == table_.end()) return 0.0;
    return *std::max_element(it->second.begin(), it->second.end());
  }

  // Greedy action; ties broken uniformly with `rng`.
  std::size_t greedy(const std::string& state, Engine& rng) {
    const auto& q = row(state);
    const double best = *std::max_element(q.begin(), q.end());
    std::vector<std::size_t> ties;
    for (std::size_t a = 0; a < q.size(); ++a)
      if (q[a] == best) ties.push_back(a);
    return ties[uniform_index(rng, static_cast<std::uint32_t>(ties.size()))];
  }

  void update(const std::string& state, std::size_t action, double target, double learning_rate) {
    auto& q = row(state)[action];
    q += learning_rate * (target - q);
  }

  std::size_t size() const { return table_.size(); }

 private:
  std::size_t action_count_;
  std::unordered_map<std::string, std::vector<double>> table_;
};

}  // namespace crafterlab
