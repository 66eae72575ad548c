#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "crafterlab/analytics/capacity.hpp"
#include "crafterlab/analytics/tables.hpp"
#include "crafterlab/world/config.hpp"

namespace crafterlab {

struct EmpowermentResult {
  std::map<std::string, double> per_state;
  double total = 0.0;
  std::size_t alphabet_size = 0;
  bool all_converged = true;
};

// Actions whose transitions enter the table under the movement filter.
inline std::vector<std::string> interaction_actions(const WorldConfig& cfg) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < cfg.action_set.size(); ++i)
    if (is_interaction(cfg.action_kinds[i])) out.push_back(cfg.action_set[i]);
  return out;
}

// Channel for state `s`. Outcomes never reached from `s` are identical columns
// (zero in every tried row, 1/|alphabet| in every untried row), so they are
// merged into a single trailing column without changing the capacity.
inline ChannelMatrix state_channel(const TransitionTable& table, const std::string& s,
                                   std::size_t alphabet_size, const std::vector<std::string>& actions) {
  std::map<std::string, std::map<std::string, std::int64_t>> tried;
  for (auto it = table.counts.lower_bound({s, "", ""}); it != table.counts.end() && std::get<0>(it->first) == s; ++it)
    tried[std::get<1>(it->first)][std::get<2>(it->first)] += it->second;

  std::set<std::string> support;
  for (const auto& [a, outs] : tried)
    for (const auto& [next, c] : outs) support.insert(next);
  alphabet_size = std::max(alphabet_size, support.size());

  ChannelMatrix ch;
  ch.alphabet.assign(support.begin(), support.end());
  const std::size_t rest = alphabet_size - support.size();
  if (rest > 0) ch.alphabet.push_back("*" + std::to_string(rest) + " unreached");
  const double u = 1.0 / static_cast<double>(alphabet_size);

  std::vector<std::string> all = actions;
  for (const auto& [a, outs] : tried)
    if (std::find(all.begin(), all.end(), a) == all.end()) all.push_back(a);
  for (const auto& a : all) {
    std::vector<double> row(ch.alphabet.size(), 0.0);
    auto it = tried.find(a);
    if (it == tried.end()) {
      for (std::size_t j = 0; j < support.size(); ++j) row[j] = u;
      if (rest > 0) row.back() = static_cast<double>(rest) * u;
    } else {
      std::int64_t n = 0;
      for (const auto& [next, c] : it->second) n += c;
      std::size_t j = 0;
      for (const auto& col : support) {
        auto c = it->second.find(col);
        row[j++] = c == it->second.end() ? 0.0 : static_cast<double>(c->second) / static_cast<double>(n);
      }
    }
    ch.rows.push_back(std::move(row));
    ch.actions.push_back(a);
  }
  return ch;
}

inline EmpowermentResult empowerment(const TransitionTable& table, std::size_t alphabet_size,
                                     const std::vector<std::string>& actions, CapacityOptions opt = {}) {
  EmpowermentResult r;
  r.alphabet_size = alphabet_size;
  std::set<std::string> states;
  for (const auto& [sa, n] : table.marginals) states.insert(sa.first);
  for (const auto& s : states) {
    const ChannelMatrix ch = state_channel(table, s, alphabet_size, actions);
    double c = 0.0;
    if (ch.alphabet.size() > 1 && ch.rows.size() > 1) {
      const CapacityResult cr = channel_capacity(ch, opt);
      c = cr.capacity;
      r.all_converged = r.all_converged && cr.converged;
    }
    r.per_state[s] = c;
    r.total += c;
  }
  return r;
}

inline EmpowermentResult empowerment(const TransitionTable& table, const std::vector<std::string>& alphabet,
                                     const std::vector<std::string>& actions, CapacityOptions opt = {}) {
  return empowerment(table, alphabet.size(), actions, opt);
}

}  // namespace crafterlab
