#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "crafterlab/analytics/abstract_state.hpp"
#include "crafterlab/core/errors.hpp"
#include "crafterlab/core/hash.hpp"
#include "crafterlab/trace/session.hpp"
#include "crafterlab/world/world.hpp"

namespace crafterlab {

struct Divergence {
  std::size_t episode = 0;
  std::optional<std::size_t> step;  // empty: the initial state differs
  std::uint64_t expected_hash = 0;
  std::uint64_t actual_hash = 0;
  std::string reason;
};

struct ReplayReport {
  std::size_t episodes_checked = 0;
  std::size_t steps_checked = 0;
  std::optional<Divergence> first_divergence;
  bool ok() const { return !first_divergence; }
};

// Re-simulate every episode from its world seed and recorded actions and
// compare canonical state hashes step by step.
inline ReplayReport replay(const WorldConfig& cfg, const Session& session) {
  if (session.config_fingerprint != config_fingerprint(cfg))
    throw InputError("session '" + session.session_id + "' was recorded under config " +
                     hex64(session.config_fingerprint) + ", not " + hex64(config_fingerprint(cfg)));
  ReplayReport report;
  for (std::size_t e = 0; e < session.episodes.size(); ++e) {
    const Episode& ep = session.episodes[e];
    WorldState s = reset_episode(cfg, ep.world_seed);
    ++report.episodes_checked;
    const std::uint64_t h0 = state_hash(s);
    if (ep.initial_hash != 0 && h0 != ep.initial_hash) {
      report.first_divergence = Divergence{e, std::nullopt, ep.initial_hash, h0, "initial state"};
      return report;
    }
    for (std::size_t i = 0; i < ep.steps.size(); ++i) {
      const TrajectoryStep& st = ep.steps[i];
      const auto fail = [&](std::uint64_t actual, std::string why) {
        report.first_divergence = Divergence{e, i, st.state_hash, actual, std::move(why)};
        return report;
      };
      const int action = cfg.action_index(st.action);
      if (action < 0) return fail(0, "unknown action '" + st.action + "'");
      if (s.episode_over) return fail(0, "episode already over");
      if (st.step_index != s.step_index) return fail(0, "step index mismatch");
      const Status prev = s.status;
      const StepEvents ev = step_in_place(cfg, s, static_cast<std::size_t>(action));
      ++report.steps_checked;
      const std::uint64_t h = state_hash(s);
      if (h != st.state_hash) return fail(h, "state hash");
      if (!(ev == st.events)) return fail(h, "step events");
      if (abstract(s, &prev).key() != st.abstract_state_after) return fail(h, "abstract state");
    }
  }
  return report;
}

}  // namespace crafterlab
