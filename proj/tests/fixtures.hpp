#pragma once

#include <deque>
#include <string>
#include <vector>

#include "crafterlab/trace/session.hpp"
#include "crafterlab/world/worldgen.hpp"

namespace fixtures {

using namespace crafterlab;

// A fresh world with no creatures and a grass clearing around the player.
inline WorldState quiet_world(const WorldConfig& cfg, std::uint64_t seed = 1) {
  WorldState s = generate_world(cfg, seed);
  s.creatures.clear();
  for (int dy = -3; dy <= 3; ++dy)
    for (int dx = -3; dx <= 3; ++dx) s.at({s.player_position.x + dx, s.player_position.y + dy}) = Material::kGrass;
  return s;
}

inline WorldConfig peaceful_config() {
  WorldConfig cfg = default_world_config();
  cfg.hostiles.zombie_spawn_day = 0.0;
  cfg.hostiles.zombie_spawn_night = 0.0;
  return cfg;
}

inline TrajectoryStep step(std::int64_t index, std::string action, std::string before, std::string after,
                           std::vector<std::string> achievements = {}) {
  TrajectoryStep st;
  st.step_index = index;
  st.action = std::move(action);
  st.abstract_state_before = std::move(before);
  st.abstract_state_after = std::move(after);
  st.events.achievements_unlocked = std::move(achievements);
  st.player_cell = {32, 32};
  return st;
}

inline Session empty_session(std::string id = "fixture") {
  Session s;
  s.subject_kind = "agent:fixture";
  s.session_id = std::move(id);
  s.spawn = {32, 32};
  return s;
}

// Episode whose steps unlock the given achievements, one per step.
inline Episode unlocking_episode(std::size_t index, const std::vector<std::string>& ids) {
  Episode e;
  e.episode_index = index;
  e.initial_abstract_state = "grass||";
  std::int64_t i = 0;
  for (const auto& id : ids) {
    e.steps.push_back(step(i++, "do", "grass||", "grass||", {id}));
    e.achievements.push_back(id);
  }
  e.cells_visited.insert({32, 32});
  return e;
}

}  // namespace fixtures
