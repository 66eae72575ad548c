#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>

#include "crafterlab/agents/agents.hpp"
#include "crafterlab/trace/runner.hpp"
#include "crafterlab/trace/session.hpp"

namespace crafterlab {

inline std::string agent_session_id(const AgentConfig& agent, std::uint64_t seed) {
  return std::string(agent_kind_name(agent.kind)) + "-seed" + std::to_string(seed);
}

// Runs one agent for agent.total_steps environment steps and returns the full
// recorded session. Learning agents use epsilon-greedy one-step Q-learning
// over abstract states. Deterministic in (agent, world, seed).
inline Session train(const AgentConfig& agent, const WorldConfig& world, std::uint64_t seed) {
  validate(agent);
  Session session;
  session.subject_kind = "agent:" + std::string(agent_kind_name(agent.kind));
  session.session_id = agent_session_id(agent, seed);
  session.config_fingerprint = config_fingerprint(world);
  session.base_seed = seed;

  SessionRunner runner(world, session);
  Engine rng = make_engine(seed ^ 0xa0761d6478bd642fULL);
  QTable q(world.action_count());
  VisitCounts counts;
  EntropyTracker entropy;
  EpisodeMemory memory;
  std::unordered_set<std::string> visited;
  const bool learns = agent.kind != AgentKind::kRandom;
  const auto noop = static_cast<std::size_t>(world.noop_index);

  const auto visit = [&](const std::string& key) {
    ++counts[key];
    visited.insert(key);
  };

  for (std::int64_t t = 0; t < agent.total_steps; ++t) {
    if (runner.needs_reset()) {
      runner.start_episode();
      memory.clear();
      visited.clear();
      visit(runner.current_abstract_key());
      entropy.add(runner.current_abstract_key());
    }
    const std::string s = runner.current_abstract_key();
    std::size_t a;
    if (!learns) {
      a = random_policy(rng, world.action_count(), noop, agent.noop_probability);
    } else if (uniform01(rng) < epsilon(t, agent)) {
      a = uniform_index(rng, static_cast<std::uint32_t>(world.action_count()));
    } else {
      a = q.greedy(s, rng);
    }

    TrajectoryStep& step = runner.act(a);
    const std::string& next = step.abstract_state_after;
    double r = 0.0;
    switch (agent.kind) {
      case AgentKind::kRandom: break;
      case AgentKind::kExtrinsic: r = extrinsic_reward(step.events, memory); break;
      case AgentKind::kNovelty: r = novelty_reward(next, s, counts, visited, agent.novelty_alpha); break;
      case AgentKind::kEntropyGain: r = entropy.add(next); break;
    }
    if (agent.kind != AgentKind::kEntropyGain) entropy.add(next);
    visit(next);
    if (learns) {
      step.reward = r;
      const double bootstrap = step.events.episode_over ? 0.0 : agent.discount * q.max_value(next);
      q.update(s, a, r + bootstrap, agent.learning_rate);
    }
  }
  close(session);
  return session;
}

// k episodes at evenly spaced indices round(i (E-1) / (k-1)); the first and
// last episodes are always kept. Identity when E <= k.
inline Session subsample_episodes(const Session& session, std::size_t k) {
  if (k == 0) throw InputError("subsample size must be >= 1");
  const std::size_t n = session.episodes.size();
  if (n <= k) return session;
  Session out = session;
  out.episodes.clear();
  if (k == 1) {
    out.episodes.push_back(session.episodes.front());
    return out;
  }
  for (std::size_t i = 0; i < k; ++i) {
    const auto idx = static_cast<std::size_t>(
        std::llround(static_cast<double>(i) * static_cast<double>(n - 1) / static_cast<double>(k - 1)));
    out.episodes.push_back(session.episodes[idx]);
  }
  return out;
}

}  // namespace crafterlab
