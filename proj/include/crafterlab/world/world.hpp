#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "crafterlab/core/errors.hpp"
#include "crafterlab/core/rng.hpp"
#include "crafterlab/world/config.hpp"
#include "crafterlab/world/state.hpp"
#include "crafterlab/world/worldgen.hpp"

namespace crafterlab {

struct StepEvents {
  std::vector<std::string> achievements_unlocked;
  std::vector<int> health_delta_events;  // one entry per health point, +1 or -1
  std::vector<std::string> status_increases;  // in status order
  bool episode_over = false;

  int health_gains() const {
    return static_cast<int>(std::count(health_delta_events.begin(), health_delta_events.end(), 1));
  }
  int health_losses() const {
    return static_cast<int>(std::count(health_delta_events.begin(), health_delta_events.end(), -1));
  }
  friend bool operator==(const StepEvents&, const StepEvents&) = default;
};

namespace detail {

inline int chebyshev(Cell a, Cell b) { return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y)); }
inline int manhattan(Cell a, Cell b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

class Stepper {
 public:
  Stepper(const WorldConfig& cfg, WorldState& s) : cfg_(cfg), s_(s) {}

  StepEvents run(std::size_t action_index) {
    const Status before = s_.status;
    ++s_.step_index;
    const ActionKind action = s_.sleeping ? ActionKind::kNoop : cfg_.action_kinds[action_index];

    update_life_stats();
    regenerate_or_degenerate();
    wake_when_rested();
    apply(action);
    update_creatures();
    balance_zombies();
    s_.time_of_day = time_of_day_at(cfg_, s_.step_index);

    for (std::size_t i = 0; i < kStatusCount; ++i)
      if (s_.status.values[i] > before.values[i]) events_.status_increases.emplace_back(kStatusNames[i]);
    const bool limit_hit = cfg_.episode_step_limit > 0 && s_.step_index >= cfg_.episode_step_limit;
    s_.episode_over = s_.status[StatusKind::kHealth] <= 0 || limit_hit;
    events_.episode_over = s_.episode_over;
    return std::move(events_);
  }

 private:
  void set_status(StatusKind k, int value) {
    value = std::clamp(value, 0, cfg_.status_max);
    int& cur = s_.status[k];
    if (k == StatusKind::kHealth) {
      for (int d = value - cur; d > 0; --d) events_.health_delta_events.push_back(1);
      for (int d = cur - value; d > 0; --d) events_.health_delta_events.push_back(-1);
    }
    cur = value;
  }
  void add_status(StatusKind k, int delta) { set_status(k, s_.status[k] + delta); }

  void damage_player(int amount) {
    add_status(StatusKind::kHealth, -amount);
    if (s_.sleeping) s_.sleeping = false;
  }

  void add_item(Item i, int n) { s_.inventory[i] = std::clamp(s_.inventory[i] + n, 0, cfg_.inventory_max); }

  void unlock(std::string_view id) {
    const int idx = cfg_.achievement_index(id);
    if (idx < 0 || s_.unlocked_this_episode[idx]) return;
    for (const auto& req : cfg_.achievement_tree[idx].prerequisites)
      if (!s_.unlocked_this_episode[cfg_.achievement_index(req)]) return;
    s_.unlocked_this_episode[idx] = 1;
    events_.achievements_unlocked.emplace_back(id);
  }

  void update_life_stats() {
    const auto& d = cfg_.decay;
    auto& c = s_.counters;
    const int rate = s_.sleeping ? 1 : 2;
    c.hunger += rate;
    if (c.hunger > 2 * d.hunger_period) {
      c.hunger = 0;
      add_status(StatusKind::kFood, -1);
    }
    c.thirst += rate;
    if (c.thirst > 2 * d.thirst_period) {
      c.thirst = 0;
      add_status(StatusKind::kWater, -1);
    }
    if (s_.sleeping)
      c.fatigue = std::min(c.fatigue - 2, 0);
    else
      c.fatigue += 2;
    if (c.fatigue < -2 * d.rest_period) {
      c.fatigue = 0;
      add_status(StatusKind::kEnergy, 1);
    }
    if (c.fatigue > 2 * d.fatigue_period) {
      c.fatigue = 0;
      add_status(StatusKind::kEnergy, -1);
    }
  }

  void regenerate_or_degenerate() {
    const auto& d = cfg_.decay;
    auto& c = s_.counters;
    const bool fed = s_.status[StatusKind::kFood] > 0 && s_.status[StatusKind::kWater] > 0 &&
                     (s_.status[StatusKind::kEnergy] > 0 || s_.sleeping);
    if (fed)
      c.recover += s_.sleeping ? 4 : 2;
    else
      c.recover -= s_.sleeping ? 1 : 2;
    if (c.recover > 2 * d.recover_period) {
      c.recover = 0;
      add_status(StatusKind::kHealth, 1);
    }
    if (c.recover < -2 * d.degen_period) {
      c.recover = 0;
      add_status(StatusKind::kHealth, -1);
    }
  }

  void wake_when_rested() {
    if (s_.sleeping && s_.status[StatusKind::kEnergy] >= cfg_.status_max) {
      s_.sleeping = false;
      unlock("wake_up");
    }
  }

  bool free_for_player(Cell c) const {
    return s_.in_bounds(c) && walkable_for_player(s_.at(c)) && !s_.creature_at(c);
  }

  bool near_table() const {
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const Cell c{s_.player_position.x + dx, s_.player_position.y + dy};
        if (s_.in_bounds(c) && s_.at(c) == Material::kTable) return true;
      }
    return false;
  }

  int player_damage() const {
    if (s_.inventory[Item::kStoneSword] > 0) return 3;
    if (s_.inventory[Item::kWoodSword] > 0) return 2;
    return 1;
  }

  void apply(ActionKind action) {
    if (auto dir = movement_direction(action)) {
      s_.player_facing = *dir;
      const Cell target = s_.player_position + offset(*dir);
      if (free_for_player(target)) {
        s_.player_position = target;
        if (s_.at(target) == Material::kLava) set_status(StatusKind::kHealth, 0);
      }
      return;
    }
    const Cell target = s_.facing_cell();
    const bool target_ok = s_.in_bounds(target);
    switch (action) {
      case ActionKind::kNoop: return;
      case ActionKind::kDo:
        if (target_ok) interact(target);
        return;
      case ActionKind::kSleep:
        if (s_.status[StatusKind::kEnergy] < cfg_.status_max) s_.sleeping = true;
        return;
      case ActionKind::kPlaceStone:
        if (target_ok && s_.inventory[Item::kStone] >= 1 && !s_.creature_at(target)) {
          const Material m = s_.at(target);
          if (m == Material::kGrass || m == Material::kSand || m == Material::kPath || m == Material::kWater ||
              m == Material::kLava) {
            s_.at(target) = Material::kStone;
            add_item(Item::kStone, -1);
            unlock("place_stone");
          }
        }
        return;
      case ActionKind::kPlaceTable:
        if (target_ok && s_.inventory[Item::kWood] >= 1 && !s_.creature_at(target)) {
          const Material m = s_.at(target);
          if (m == Material::kGrass || m == Material::kSand || m == Material::kPath) {
            s_.at(target) = Material::kTable;
            add_item(Item::kWood, -1);
            unlock("place_table");
          }
        }
        return;
      case ActionKind::kMakeWoodPickaxe:
        if (near_table() && s_.inventory[Item::kWood] >= 1) {
          add_item(Item::kWood, -1);
          add_item(Item::kWoodPickaxe, 1);
          unlock("make_wood_pickaxe");
        }
        return;
      case ActionKind::kMakeStonePickaxe:
        if (near_table() && s_.inventory[Item::kWood] >= 1 && s_.inventory[Item::kStone] >= 1) {
          add_item(Item::kWood, -1);
          add_item(Item::kStone, -1);
          add_item(Item::kStonePickaxe, 1);
          unlock("make_stone_pickaxe");
        }
        return;
      case ActionKind::kMakeWoodSword:
        if (near_table() && s_.inventory[Item::kWood] >= 1) {
          add_item(Item::kWood, -1);
          add_item(Item::kWoodSword, 1);
          unlock("make_wood_sword");
        }
        return;
      case ActionKind::kMakeStoneSword:
        if (near_table() && s_.inventory[Item::kWood] >= 1 && s_.inventory[Item::kStone] >= 1) {
          add_item(Item::kWood, -1);
          add_item(Item::kStone, -1);
          add_item(Item::kStoneSword, 1);
          unlock("make_stone_sword");
        }
        return;
      default: return;
    }
  }

  void interact(Cell target) {
    for (std::size_t i = 0; i < s_.creatures.size(); ++i) {
      auto& k = s_.creatures[i];
      if (k.pos != target) continue;
      k.health -= player_damage();
      if (k.health <= 0) {
        const CreatureKind kind = k.kind;
        s_.creatures.erase(s_.creatures.begin() + static_cast<std::ptrdiff_t>(i));
        if (kind == CreatureKind::kCow) {
          add_status(StatusKind::kFood, 6);
          s_.counters.hunger = 0;
          unlock("eat_cow");
        } else if (kind == CreatureKind::kZombie) {
          unlock("defeat_zombie");
        } else {
          unlock("defeat_skeleton");
        }
      }
      return;
    }
    Material& m = s_.at(target);
    switch (m) {
      case Material::kTree:
        add_item(Item::kWood, 1);
        unlock("collect_wood");
        break;
      case Material::kGrass:
        if (uniform01(s_.rng) < 0.1) {
          add_item(Item::kSapling, 1);
          unlock("collect_sapling");
        }
        break;
      case Material::kWater:
        add_status(StatusKind::kWater, 1);
        s_.counters.thirst = 0;
        unlock("collect_drink");
        break;
      case Material::kStone:
        if (s_.inventory[Item::kWoodPickaxe] > 0) {
          add_item(Item::kStone, 1);
          m = Material::kPath;
          unlock("collect_stone");
        }
        break;
      case Material::kCoal:
        if (s_.inventory[Item::kWoodPickaxe] > 0) {
          add_item(Item::kCoal, 1);
          m = Material::kPath;
          unlock("collect_coal");
        }
        break;
      case Material::kIron:
        if (s_.inventory[Item::kStonePickaxe] > 0) {
          add_item(Item::kIron, 1);
          m = Material::kPath;
          unlock("collect_iron");
        }
        break;
      default: break;
    }
  }

  bool free_for(CreatureKind kind, Cell c) const {
    return s_.in_bounds(c) && walkable_for_creature(kind, s_.at(c)) && c != s_.player_position &&
           !s_.creature_at(c);
  }

  void try_move(Creature& k, Cell delta) {
    const Cell target = k.pos + delta;
    if (free_for(k.kind, target)) k.pos = target;
  }

  Cell random_step() {
    return offset(static_cast<Direction>(uniform_index(s_.rng, 4)));
  }

  Cell toward_player(Cell from, bool long_axis) const {
    const int dx = s_.player_position.x - from.x;
    const int dy = s_.player_position.y - from.y;
    const bool along_x = (std::abs(dx) > std::abs(dy)) == long_axis;
    if (along_x) return {dx > 0 ? 1 : (dx < 0 ? -1 : 0), 0};
    return {0, dy > 0 ? 1 : (dy < 0 ? -1 : 0)};
  }

  bool clear_line(Cell from, Cell to) const {
    const Cell step{(to.x > from.x) - (to.x < from.x), (to.y > from.y) - (to.y < from.y)};
    for (Cell c = from + step; c != to; c = c + step)
      if (!walkable_for_player(s_.at(c)) || s_.creature_at(c)) return false;
    return true;
  }

  void update_creatures() {
    const auto& h = cfg_.hostiles;
    // Index loop: the vector is not resized while creatures update.
    for (std::size_t i = 0; i < s_.creatures.size(); ++i) {
      Creature& k = s_.creatures[i];
      if (chebyshev(k.pos, s_.player_position) >= h.update_radius) continue;
      switch (k.kind) {
        case CreatureKind::kCow:
          if (uniform01(s_.rng) < 0.5) try_move(k, random_step());
          break;
        case CreatureKind::kZombie: {
          const int dist = chebyshev(k.pos, s_.player_position);
          if (dist <= h.chase_radius && uniform01(s_.rng) < 0.9)
            try_move(k, toward_player(k.pos, uniform01(s_.rng) < 0.8));
          else
            try_move(k, random_step());
          if (manhattan(k.pos, s_.player_position) <= 1) {
            if (k.cooldown > 0) {
              --k.cooldown;
            } else {
              k.cooldown = h.zombie_cooldown;
              damage_player(s_.sleeping ? h.zombie_sleep_damage : h.zombie_damage);
            }
          }
          break;
        }
        case CreatureKind::kSkeleton: {
          if (k.cooldown > 0) --k.cooldown;
          const int dist = manhattan(k.pos, s_.player_position);
          const bool aligned = k.pos.x == s_.player_position.x || k.pos.y == s_.player_position.y;
          if (aligned && dist <= h.skeleton_range && k.cooldown == 0 && clear_line(k.pos, s_.player_position) &&
              uniform01(s_.rng) < 0.3) {
            k.cooldown = h.skeleton_reload;
            damage_player(h.skeleton_damage);
          } else if (dist <= 3 && uniform01(s_.rng) < 0.4) {
            try_move(k, toward_player(k.pos, true));
          } else if (uniform01(s_.rng) < 0.2) {
            try_move(k, random_step());
          }
          break;
        }
      }
    }
  }

  void balance_zombies() {
    const auto& h = cfg_.hostiles;
    const double dark = 1.0 - daylight(s_.time_of_day, cfg_.daylight_exponent);
    // Despawn stragglers far outside the active area.
    for (std::size_t i = 0; i < s_.creatures.size();) {
      const auto& k = s_.creatures[i];
      if (k.kind == CreatureKind::kZombie && chebyshev(k.pos, s_.player_position) > 2 * h.update_radius &&
          uniform01(s_.rng) < 0.05)
        s_.creatures.erase(s_.creatures.begin() + static_cast<std::ptrdiff_t>(i));
      else
        ++i;
    }
    if (uniform01(s_.rng) >= h.zombie_spawn_day + h.zombie_spawn_night * dark) return;
    int nearby = 0;
    for (const auto& k : s_.creatures)
      if (k.kind == CreatureKind::kZombie && chebyshev(k.pos, s_.player_position) <= h.spawn_radius) ++nearby;
    if (nearby >= static_cast<int>(h.zombie_cap_day + h.zombie_cap_night * dark)) return;
    const int span = 2 * h.spawn_radius + 1;
    const Cell c{s_.player_position.x - h.spawn_radius + static_cast<int>(uniform_index(s_.rng, span)),
                 s_.player_position.y - h.spawn_radius + static_cast<int>(uniform_index(s_.rng, span))};
    if (!s_.in_bounds(c) || s_.at(c) != Material::kGrass || s_.creature_at(c)) return;
    if (chebyshev(c, s_.player_position) < h.min_spawn_distance) return;
    s_.creatures.push_back({CreatureKind::kZombie, c, 5, 0});
  }

  const WorldConfig& cfg_;
  WorldState& s_;
  StepEvents events_;
};

}  // namespace detail

// Advance one step in place. Throws EpisodeOverError on a finished episode
// and InputError on an action index outside the configured set.
inline StepEvents step_in_place(const WorldConfig& cfg, WorldState& state, std::size_t action_index) {
  if (state.episode_over) throw EpisodeOverError();
  if (action_index >= cfg.action_count())
    throw InputError("unknown action index " + std::to_string(action_index));
  return detail::Stepper(cfg, state).run(action_index);
}

inline StepEvents step_in_place(const WorldConfig& cfg, WorldState& state, std::string_view action) {
  const int idx = cfg.action_index(action);
  if (idx < 0) throw InputError("unknown action '" + std::string(action) + "'");
  return step_in_place(cfg, state, static_cast<std::size_t>(idx));
}

// Value-semantics step: returns the successor state and its events.
template <class Action>
std::pair<WorldState, StepEvents> step(const WorldConfig& cfg, WorldState state, const Action& action) {
  StepEvents ev = step_in_place(cfg, state, action);
  return {std::move(state), std::move(ev)};
}

// Semantic tiles of the viewing window, row-major, player at the center cell.
inline std::vector<std::string> visible_window(const WorldConfig& cfg, const WorldState& s) {
  std::vector<std::string> tiles;
  tiles.reserve(static_cast<std::size_t>(cfg.view_width) * cfg.view_height);
  for (int r = 0; r < cfg.view_height; ++r)
    for (int c = 0; c < cfg.view_width; ++c) {
      const Cell cell{s.player_position.x - cfg.view_width / 2 + c, s.player_position.y - cfg.view_height / 2 + r};
      tiles.emplace_back(label_at(s, cell));
    }
  return tiles;
}

}  // namespace crafterlab
