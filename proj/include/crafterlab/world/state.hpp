#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crafterlab/core/hash.hpp"
#include "crafterlab/core/rng.hpp"
#include "crafterlab/world/config.hpp"
#include "crafterlab/world/types.hpp"

namespace crafterlab {

struct Creature {
  CreatureKind kind = CreatureKind::kCow;
  Cell pos;
  int health = 0;
  int cooldown = 0;
  friend bool operator==(const Creature&, const Creature&) = default;
};

struct Status {
  std::array<int, kStatusCount> values{};
  int& operator[](StatusKind s) { return values[static_cast<std::size_t>(s)]; }
  int operator[](StatusKind s) const { return values[static_cast<std::size_t>(s)]; }
  friend bool operator==(const Status&, const Status&) = default;
};

struct Inventory {
  std::array<int, kItemCount> counts{};
  int& operator[](Item i) { return counts[static_cast<std::size_t>(i)]; }
  int operator[](Item i) const { return counts[static_cast<std::size_t>(i)]; }
  bool empty() const {
    return std::all_of(counts.begin(), counts.end(), [](int c) { return c == 0; });
  }
  friend bool operator==(const Inventory&, const Inventory&) = default;
};

// Accumulators behind the status schedules, in half-step units.
struct LifeCounters {
  int hunger = 0;
  int thirst = 0;
  int fatigue = 0;
  int recover = 0;
  friend bool operator==(const LifeCounters&, const LifeCounters&) = default;
};

struct WorldState {
  int width = 0;
  int height = 0;
  std::vector<Material> grid;  // row-major, y * width + x
  std::vector<Creature> creatures;
  Cell player_position;
  Direction player_facing = Direction::kDown;
  Status status;
  Inventory inventory;
  LifeCounters counters;
  bool sleeping = false;
  double time_of_day = 0.0;
  std::vector<std::uint8_t> unlocked_this_episode;  // indexed like the achievement tree
  Engine rng;
  std::int64_t step_index = 0;
  std::uint64_t world_seed = 0;
  bool episode_over = false;

  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }
  Material at(Cell c) const { return grid[static_cast<std::size_t>(c.y) * width + c.x]; }
  Material& at(Cell c) { return grid[static_cast<std::size_t>(c.y) * width + c.x]; }

  const Creature* creature_at(Cell c) const {
    for (const auto& k : creatures)
      if (k.pos == c) return &k;
    return nullptr;
  }

  Cell facing_cell() const { return player_position + offset(player_facing); }

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

// Semantic label of a cell: creature if present, else terrain. Out of bounds is "none".
inline std::string_view label_at(const WorldState& s, Cell c) {
  if (!s.in_bounds(c)) return "none";
  if (c == s.player_position) return "player";
  if (const auto* k = s.creature_at(c)) return creature_name(k->kind);
  return material_name(s.at(c));
}

inline std::vector<std::string> unlocked_ids(const WorldConfig& cfg, const WorldState& s) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < s.unlocked_this_episode.size(); ++i)
    if (s.unlocked_this_episode[i]) out.push_back(cfg.achievement_tree[i].id);
  return out;
}

namespace detail {
template <class T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}
}  // namespace detail

// Byte encoding of every field of the state, fixed order, little-endian host
// layout. Two states are equal iff their canonical bytes are equal.
inline std::string canonical_bytes(const WorldState& s) {
  std::string out;
  out.reserve(s.grid.size() + s.creatures.size() * 20 + 160);
  detail::put<std::int32_t>(out, s.width);
  detail::put<std::int32_t>(out, s.height);
  out.append(reinterpret_cast<const char*>(s.grid.data()), s.grid.size());
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(s.creatures.size()));
  for (const auto& k : s.creatures) {
    detail::put<std::uint8_t>(out, static_cast<std::uint8_t>(k.kind));
    detail::put<std::int32_t>(out, k.pos.x);
    detail::put<std::int32_t>(out, k.pos.y);
    detail::put<std::int32_t>(out, k.health);
    detail::put<std::int32_t>(out, k.cooldown);
  }
  detail::put<std::int32_t>(out, s.player_position.x);
  detail::put<std::int32_t>(out, s.player_position.y);
  detail::put<std::uint8_t>(out, static_cast<std::uint8_t>(s.player_facing));
  for (int v : s.status.values) detail::put<std::int32_t>(out, v);
  for (int v : s.inventory.counts) detail::put<std::int32_t>(out, v);
  detail::put<std::int32_t>(out, s.counters.hunger);
  detail::put<std::int32_t>(out, s.counters.thirst);
  detail::put<std::int32_t>(out, s.counters.fatigue);
  detail::put<std::int32_t>(out, s.counters.recover);
  detail::put<std::uint8_t>(out, s.sleeping ? 1 : 0);
  detail::put<double>(out, s.time_of_day);
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(s.unlocked_this_episode.size()));
  out.append(reinterpret_cast<const char*>(s.unlocked_this_episode.data()), s.unlocked_this_episode.size());
  out += engine_state(s.rng);
  detail::put<std::int64_t>(out, s.step_index);
  detail::put<std::uint64_t>(out, s.world_seed);
  detail::put<std::uint8_t>(out, s.episode_over ? 1 : 0);
  return out;
}

inline std::uint64_t state_hash(const WorldState& s) { return fnv1a(canonical_bytes(s)); }

// Brightness 1 - |cos(pi x)|^e; inputs outside [0,1) wrap mod 1.
inline double daylight(double time_fraction, double exponent = 12.0) {
  const double x = time_fraction - std::floor(time_fraction);
  return 1.0 - std::pow(std::abs(std::cos(M_PI * x)), exponent);
}

inline double time_of_day_at(const WorldConfig& cfg, std::int64_t step_index) {
  const double t = cfg.day_offset + static_cast<double>(step_index) / cfg.day_length;
  return t - std::floor(t);
}

}  // namespace crafterlab
