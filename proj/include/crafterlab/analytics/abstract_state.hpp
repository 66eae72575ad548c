#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "crafterlab/core/errors.hpp"
#include "crafterlab/world/state.hpp"

namespace crafterlab {

// Reduced state over which every metric is computed: what the player faces,
// what it carries, and which statuses just went up.
struct AbstractState {
  std::string facing_label;
  std::vector<std::pair<std::string, int>> inventory_signature;  // item order, non-zero counts only
  std::vector<std::string> status_increase;                      // status order

  // Canonical encoding "facing|item:n,item:n|status,status".
  std::string key() const {
    std::string out = facing_label;
    out += '|';
    for (std::size_t i = 0; i < inventory_signature.size(); ++i) {
      if (i) out += ',';
      out += inventory_signature[i].first;
      out += ':';
      out += std::to_string(inventory_signature[i].second);
    }
    out += '|';
    for (std::size_t i = 0; i < status_increase.size(); ++i) {
      if (i) out += ',';
      out += status_increase[i];
    }
    return out;
  }

  static AbstractState from_key(std::string_view key) {
    const auto p1 = key.find('|');
    const auto p2 = p1 == std::string_view::npos ? p1 : key.find('|', p1 + 1);
    if (p2 == std::string_view::npos) throw InputError("malformed abstract state key '" + std::string(key) + "'");
    AbstractState a;
    a.facing_label = std::string(key.substr(0, p1));
    const auto split = [](std::string_view s, auto&& fn) {
      while (!s.empty()) {
        const auto c = s.find(',');
        fn(s.substr(0, c));
        if (c == std::string_view::npos) break;
        s.remove_prefix(c + 1);
      }
    };
    split(key.substr(p1 + 1, p2 - p1 - 1), [&](std::string_view part) {
      const auto colon = part.find(':');
      if (colon == std::string_view::npos) throw InputError("malformed inventory entry in '" + std::string(key) + "'");
      a.inventory_signature.emplace_back(std::string(part.substr(0, colon)),
                                         std::stoi(std::string(part.substr(colon + 1))));
    });
    split(key.substr(p2 + 1), [&](std::string_view part) { a.status_increase.emplace_back(part); });
    return a;
  }

  friend bool operator==(const AbstractState&, const AbstractState&) = default;
};

// `prev_status` is the status of the preceding state, if any.
inline AbstractState abstract(const WorldState& state, const Status* prev_status) {
  AbstractState a;
  a.facing_label = std::string(label_at(state, state.facing_cell()));
  for (std::size_t i = 0; i < kItemCount; ++i)
    if (state.inventory.counts[i] > 0) a.inventory_signature.emplace_back(kItemNames[i], state.inventory.counts[i]);
  if (prev_status)
    for (std::size_t i = 0; i < kStatusCount; ++i)
      if (state.status.values[i] > prev_status->values[i]) a.status_increase.emplace_back(kStatusNames[i]);
  return a;
}

inline AbstractState abstract(const WorldState& state, const WorldState* prev) {
  return abstract(state, prev ? &prev->status : nullptr);
}

inline AbstractState abstract(const WorldState& state) { return abstract(state, static_cast<const Status*>(nullptr)); }

}  // namespace crafterlab
