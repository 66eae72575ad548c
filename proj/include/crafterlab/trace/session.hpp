#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "crafterlab/core/errors.hpp"
#include "crafterlab/core/rng.hpp"
#include "crafterlab/world/types.hpp"
#include "crafterlab/world/world.hpp"

namespace crafterlab {

inline constexpr int kSessionSchemaVersion = 1;

struct Utterance {
  std::int64_t timestamp_ms = 0;
  std::string text;
  friend bool operator==(const Utterance&, const Utterance&) = default;
};

struct TrajectoryStep {
  std::int64_t step_index = 0;  // world step counter before the action
  std::string action;
  std::string abstract_state_before;  // AbstractState::key()
  std::string abstract_state_after;
  StepEvents events;
  Cell player_cell;              // after the step
  std::uint64_t state_hash = 0;  // canonical hash of the successor state
  std::optional<std::int64_t> wall_clock_ms;
  std::optional<double> reward;
  friend bool operator==(const TrajectoryStep&, const TrajectoryStep&) = default;
};

struct Episode {
  std::size_t episode_index = 0;
  std::uint64_t world_seed = 0;
  std::uint64_t initial_hash = 0;  // 0 when unknown
  std::string initial_abstract_state;
  std::vector<TrajectoryStep> steps;
  std::vector<std::string> achievements;  // unlock order
  std::set<Cell> cells_visited;

  bool finished() const { return !steps.empty() && steps.back().events.episode_over; }
  friend bool operator==(const Episode&, const Episode&) = default;
};

struct Session {
  std::string subject_kind;  // child | adult | agent:<name>
  std::string session_id;
  std::uint64_t config_fingerprint = 0;
  std::uint64_t base_seed = 0;
  Cell spawn;
  std::vector<Episode> episodes;
  std::optional<std::vector<Utterance>> transcript;
  bool closed = false;

  std::size_t total_steps() const {
    std::size_t n = 0;
    for (const auto& e : episodes) n += e.steps.size();
    return n;
  }
  friend bool operator==(const Session&, const Session&) = default;
};

inline bool valid_subject_kind(const std::string& kind) {
  return kind == "child" || kind == "adult" || (kind.rfind("agent:", 0) == 0 && kind.size() > 6);
}

inline Episode& begin_episode(Session& session, std::uint64_t world_seed, std::uint64_t initial_hash = 0,
                              std::string initial_abstract_state = {}) {
  if (session.closed) throw StateError("session '" + session.session_id + "' is closed");
  Episode e;
  e.episode_index = session.episodes.size();
  e.world_seed = world_seed;
  e.initial_hash = initial_hash;
  e.initial_abstract_state = std::move(initial_abstract_state);
  e.cells_visited.insert(session.spawn);
  session.episodes.push_back(std::move(e));
  return session.episodes.back();
}

// Append-only. After a step that ended its episode, the next record opens a
// new episode whose world seed follows the session's seed schedule.
inline void record(Session& session, TrajectoryStep step) {
  if (session.closed) throw StateError("session '" + session.session_id + "' is closed");
  if (session.episodes.empty() || session.episodes.back().finished()) {
    const auto idx = session.episodes.size();
    begin_episode(session, episode_seed(session.base_seed, idx));
  }
  Episode& ep = session.episodes.back();
  if (!ep.steps.empty() && step.step_index <= ep.steps.back().step_index)
    throw StateError("step_index " + std::to_string(step.step_index) + " does not follow " +
                     std::to_string(ep.steps.back().step_index));
  for (const auto& a : step.events.achievements_unlocked)
    if (std::find(ep.achievements.begin(), ep.achievements.end(), a) == ep.achievements.end())
      ep.achievements.push_back(a);
  ep.cells_visited.insert(step.player_cell);
  ep.steps.push_back(std::move(step));
}

inline void close(Session& session) { session.closed = true; }

}  // namespace crafterlab
