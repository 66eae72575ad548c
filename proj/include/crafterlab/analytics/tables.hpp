#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "crafterlab/trace/session.hpp"
#include "crafterlab/world/types.hpp"

namespace crafterlab {

using CountMap = std::map<std::string, std::int64_t>;

// N_s over every visited abstract state, with per-episode increments so that
// cumulative snapshots N_s^e can be rebuilt for any episode.
struct VisitationCounts {
  CountMap total;
  std::vector<CountMap> per_episode;

  std::size_t episodes() const { return per_episode.size(); }

  // Cumulative counts through episode `e` (0-based, inclusive).
  CountMap through(std::size_t e) const {
    CountMap out;
    for (std::size_t i = 0; i <= e && i < per_episode.size(); ++i)
      for (const auto& [k, n] : per_episode[i]) out[k] += n;
    return out;
  }

  std::vector<std::string> alphabet() const {
    std::vector<std::string> out;
    out.reserve(total.size());
    for (const auto& [k, n] : total) out.push_back(k);
    return out;
  }
};

using StateAction = std::pair<std::string, std::string>;
using Transition = std::tuple<std::string, std::string, std::string>;

// N(s, a, s') over single-step transitions, with marginals N_{s,a} and their
// per-episode increments.
struct TransitionTable {
  std::map<Transition, std::int64_t> counts;
  std::map<StateAction, std::int64_t> marginals;
  std::vector<std::map<StateAction, std::int64_t>> per_episode_marginals;
  bool movement_filtered = true;

  std::int64_t total() const {
    std::int64_t n = 0;
    for (const auto& [k, c] : marginals) n += c;
    return n;
  }

  std::size_t episodes() const { return per_episode_marginals.size(); }

  void add(const std::string& s, const std::string& a, const std::string& next, std::size_t episode) {
    ++counts[{s, a, next}];
    ++marginals[{s, a}];
    if (per_episode_marginals.size() <= episode) per_episode_marginals.resize(episode + 1);
    ++per_episode_marginals[episode][{s, a}];
  }
};

struct Tables {
  VisitationCounts visits;
  TransitionTable transitions;
};

inline bool counted_action(const std::string& action) {
  const auto kind = action_from_name(action);
  return !kind || is_interaction(*kind);
}

// Visitation counts keep every state the player was in (the initial state of
// each episode plus every successor). Transitions drop movement and no-op
// steps unless `filter_movement` is false.
inline Tables build_tables(const Session& session, bool filter_movement = true) {
  Tables t;
  t.visits.per_episode.resize(session.episodes.size());
  t.transitions.per_episode_marginals.resize(session.episodes.size());
  t.transitions.movement_filtered = filter_movement;
  for (std::size_t e = 0; e < session.episodes.size(); ++e) {
    const Episode& ep = session.episodes[e];
    auto& visits = t.visits.per_episode[e];
    const std::string* initial = !ep.initial_abstract_state.empty() ? &ep.initial_abstract_state
                                 : !ep.steps.empty()                ? &ep.steps.front().abstract_state_before
                                                                    : nullptr;
    if (initial) ++visits[*initial];
    for (const auto& st : ep.steps) {
      ++visits[st.abstract_state_after];
      if (!filter_movement || counted_action(st.action))
        t.transitions.add(st.abstract_state_before, st.action, st.abstract_state_after, e);
    }
    for (const auto& [k, n] : visits) t.visits.total[k] += n;
  }
  return t;
}

}  // namespace crafterlab
