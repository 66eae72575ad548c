#pragma once

#include <optional>
#include <string>

#include "crafterlab/analytics/abstract_state.hpp"
#include "crafterlab/core/errors.hpp"
#include "crafterlab/trace/session.hpp"
#include "crafterlab/world/world.hpp"

namespace crafterlab {

// Drives one world through consecutive episodes while recording every step
// into a Session. Episode e is generated from episode_seed(session.base_seed, e).
class SessionRunner {
 public:
  SessionRunner(const WorldConfig& cfg, Session& session) : cfg_(cfg), session_(session) {
    session_.spawn = {cfg.map_width / 2, cfg.map_height / 2};
  }

  void start_episode() {
    const auto idx = session_.episodes.size();
    const auto seed = episode_seed(session_.base_seed, idx);
    state_ = reset_episode(cfg_, seed);
    current_key_ = abstract(state_).key();
    begin_episode(session_, seed, state_hash(state_), current_key_);
    has_world_ = true;
  }

  bool needs_reset() const { return !has_world_ || state_.episode_over; }

  TrajectoryStep& act(std::size_t action_index, std::optional<std::int64_t> wall_clock_ms = std::nullopt) {
    if (!has_world_) throw StateError("no episode started");
    const Status prev = state_.status;
    TrajectoryStep step;
    step.step_index = state_.step_index;
    step.events = step_in_place(cfg_, state_, action_index);
    step.action = cfg_.action_set[action_index];
    step.abstract_state_before = current_key_;
    current_key_ = abstract(state_, &prev).key();
    step.abstract_state_after = current_key_;
    step.player_cell = state_.player_position;
    step.state_hash = state_hash(state_);
    step.wall_clock_ms = wall_clock_ms;
    record(session_, std::move(step));
    return session_.episodes.back().steps.back();
  }

  const WorldState& state() const { return state_; }
  const std::string& current_abstract_key() const { return current_key_; }
  const WorldConfig& config() const { return cfg_; }
  Session& session() { return session_; }

 private:
  const WorldConfig& cfg_;
  Session& session_;
  WorldState state_;
  std::string current_key_;
  bool has_world_ = false;
};

}  // namespace crafterlab
