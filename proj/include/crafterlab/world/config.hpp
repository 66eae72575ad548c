#pragma once

#include <cstdint>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "crafterlab/core/errors.hpp"
#include "crafterlab/core/hash.hpp"
#include "crafterlab/world/types.hpp"

namespace crafterlab {

struct AchievementSpec {
  std::string id;
  std::vector<std::string> prerequisites;
  std::string category;  // cosmetic grouping only
  friend bool operator==(const AchievementSpec&, const AchievementSpec&) = default;
};

using AchievementTree = std::vector<AchievementSpec>;

// Per-step counters for the survival statuses. Periods are in awake steps;
// sleeping advances hunger and thirst at half rate.
struct DecayConfig {
  int hunger_period = 25;
  int thirst_period = 20;
  int fatigue_period = 30;
  int rest_period = 10;
  int recover_period = 25;
  int degen_period = 15;
  friend bool operator==(const DecayConfig&, const DecayConfig&) = default;
};

struct HostileConfig {
  double zombie_spawn_day = 0.001;
  double zombie_spawn_night = 0.04;
  double zombie_cap_day = 1.0;
  double zombie_cap_night = 4.0;
  int chase_radius = 6;
  int spawn_radius = 8;
  int min_spawn_distance = 4;
  int update_radius = 18;
  int zombie_damage = 2;
  int zombie_sleep_damage = 7;
  int zombie_cooldown = 5;
  int skeleton_damage = 2;
  int skeleton_reload = 4;
  int skeleton_range = 4;
  friend bool operator==(const HostileConfig&, const HostileConfig&) = default;
};

struct WorldConfig {
  int map_width = 64;
  int map_height = 64;
  int view_width = 9;
  int view_height = 8;
  std::vector<std::string> action_set;
  AchievementTree achievement_tree;
  double daylight_exponent = 12.0;
  int day_length = 300;
  double day_offset = 0.3;
  int status_max = 9;
  int inventory_max = 9;
  int episode_step_limit = 10000;  // 0 = unlimited
  std::uint64_t seed = 0;
  DecayConfig decay;
  HostileConfig hostiles;

  // Resolved from action_set by validate().
  std::vector<ActionKind> action_kinds;
  int noop_index = -1;
  // Exact bytes the config was parsed from; the fingerprint hashes these.
  std::string source_text;

  std::size_t action_count() const { return action_set.size(); }

  int action_index(std::string_view id) const {
    for (std::size_t i = 0; i < action_set.size(); ++i)
      if (action_set[i] == id) return static_cast<int>(i);
    return -1;
  }

  int achievement_index(std::string_view id) const {
    for (std::size_t i = 0; i < achievement_tree.size(); ++i)
      if (achievement_tree[i].id == id) return static_cast<int>(i);
    return -1;
  }
};

// Depth of each achievement: roots are 1, otherwise 1 + the deepest prerequisite.
inline std::map<std::string, int> achievement_depths(const AchievementTree& tree) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    if (!index.emplace(tree[i].id, i).second)
      throw ConfigError("achievements", "duplicate achievement id '" + tree[i].id + "'");
  }
  for (const auto& a : tree)
    for (const auto& r : a.prerequisites)
      if (!index.count(r))
        throw ConfigError("achievements." + a.id + ".requires",
                          "unknown prerequisite '" + r + "'");

  enum class Mark : std::uint8_t { kNew, kActive, kDone };
  std::vector<Mark> mark(tree.size(), Mark::kNew);
  std::vector<int> depth(tree.size(), 0);
  // Iterative DFS; a back edge to an active node is a cycle.
  for (std::size_t root = 0; root < tree.size(); ++root) {
    if (mark[root] != Mark::kNew) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    mark[root] = Mark::kActive;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      const auto& reqs = tree[node].prerequisites;
      if (next < reqs.size()) {
        const std::size_t child = index.at(reqs[next++]);
        if (mark[child] == Mark::kActive)
          throw ConfigError("achievements." + tree[node].id + ".requires",
                            "prerequisite cycle through '" + tree[child].id + "'");
        if (mark[child] == Mark::kNew) {
          mark[child] = Mark::kActive;
          stack.emplace_back(child, 0);
        }
        continue;
      }
      int d = 1;
      for (const auto& r : reqs) d = std::max(d, 1 + depth[index.at(r)]);
      depth[node] = d;
      mark[node] = Mark::kDone;
      stack.pop_back();
    }
  }
  std::map<std::string, int> out;
  for (std::size_t i = 0; i < tree.size(); ++i) out[tree[i].id] = depth[i];
  return out;
}

// Checks invariants and resolves action kinds. Throws ConfigError naming the field.
inline void validate(WorldConfig& c) {
  if (c.map_width < 16) throw ConfigError("map.width", "must be >= 16");
  if (c.map_height < 16) throw ConfigError("map.height", "must be >= 16");
  if (c.view_width < 1) throw ConfigError("view.width", "must be >= 1");
  if (c.view_height < 1) throw ConfigError("view.height", "must be >= 1");
  if (!(c.daylight_exponent > 0)) throw ConfigError("daylight_exponent", "must be > 0");
  if (c.day_length < 1) throw ConfigError("day_length", "must be >= 1");
  if (c.status_max < 1) throw ConfigError("status_max", "must be >= 1");
  if (c.inventory_max < 1) throw ConfigError("inventory_max", "must be >= 1");
  if (c.episode_step_limit < 0) throw ConfigError("episode_step_limit", "must be >= 0");
  const auto positive = [](int v, const char* field) {
    if (v < 1) throw ConfigError(field, "must be >= 1");
  };
  positive(c.decay.hunger_period, "decay.hunger_period");
  positive(c.decay.thirst_period, "decay.thirst_period");
  positive(c.decay.fatigue_period, "decay.fatigue_period");
  positive(c.decay.rest_period, "decay.rest_period");
  positive(c.decay.recover_period, "decay.recover_period");
  positive(c.decay.degen_period, "decay.degen_period");

  c.action_kinds.clear();
  c.noop_index = -1;
  std::set<std::string> seen;
  int moves = 0;
  int interactions = 0;
  for (std::size_t i = 0; i < c.action_set.size(); ++i) {
    const auto& id = c.action_set[i];
    const auto kind = action_from_name(id);
    if (!kind) throw ConfigError("actions[" + std::to_string(i) + "]", "unknown action '" + id + "'");
    if (!seen.insert(id).second)
      throw ConfigError("actions[" + std::to_string(i) + "]", "duplicate action '" + id + "'");
    if (*kind == ActionKind::kNoop) c.noop_index = static_cast<int>(i);
    if (is_movement(*kind)) ++moves;
    if (is_interaction(*kind)) ++interactions;
    c.action_kinds.push_back(*kind);
  }
  if (c.noop_index < 0) throw ConfigError("actions", "must contain exactly one 'noop'");
  if (moves != 4) throw ConfigError("actions", "must contain the four movement actions");
  if (interactions < 1) throw ConfigError("actions", "must contain at least one interaction action");
  (void)achievement_depths(c.achievement_tree);
}

namespace detail {

using nlohmann::json;

inline const json* member(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

inline void reject_unknown(const json& obj, const std::string& path,
                           std::initializer_list<std::string_view> known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (auto k : known) ok = ok || k == it.key();
    if (!ok) throw ConfigError(path + it.key(), "unknown key");
  }
}

template <class T>
void read(const json& obj, const char* key, const std::string& path, T& out) {
  const json* v = member(obj, key);
  if (!v) return;
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!v->is_number()) throw ConfigError(path + key, "expected a number");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v->is_number_integer()) throw ConfigError(path + key, "expected an integer");
    }
    out = v->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(path + key, e.what());
  }
}

}  // namespace detail

inline WorldConfig parse_world_config(std::string_view text) {
  using nlohmann::json;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed config: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("<root>", "expected an object");
  detail::reject_unknown(root, "",
                         {"map", "view", "actions", "achievements", "daylight_exponent", "day_length",
                          "day_offset", "status_max", "inventory_max", "episode_step_limit", "seed",
                          "decay", "hostiles"});
  WorldConfig c;
  if (const auto* m = detail::member(root, "map")) {
    if (!m->is_object()) throw ConfigError("map", "expected an object");
    detail::reject_unknown(*m, "map.", {"width", "height"});
    detail::read(*m, "width", "map.", c.map_width);
    detail::read(*m, "height", "map.", c.map_height);
  }
  if (const auto* v = detail::member(root, "view")) {
    if (!v->is_object()) throw ConfigError("view", "expected an object");
    detail::reject_unknown(*v, "view.", {"width", "height"});
    detail::read(*v, "width", "view.", c.view_width);
    detail::read(*v, "height", "view.", c.view_height);
  }
  detail::read(root, "daylight_exponent", "", c.daylight_exponent);
  detail::read(root, "day_length", "", c.day_length);
  detail::read(root, "day_offset", "", c.day_offset);
  detail::read(root, "status_max", "", c.status_max);
  detail::read(root, "inventory_max", "", c.inventory_max);
  detail::read(root, "episode_step_limit", "", c.episode_step_limit);
  detail::read(root, "seed", "", c.seed);

  const auto* actions = detail::member(root, "actions");
  if (!actions || !actions->is_array()) throw ConfigError("actions", "required list of action ids");
  for (std::size_t i = 0; i < actions->size(); ++i) {
    if (!(*actions)[i].is_string())
      throw ConfigError("actions[" + std::to_string(i) + "]", "expected a string");
    c.action_set.push_back((*actions)[i].get<std::string>());
  }

  const auto* ach = detail::member(root, "achievements");
  if (!ach || !ach->is_array()) throw ConfigError("achievements", "required list of achievements");
  for (std::size_t i = 0; i < ach->size(); ++i) {
    const auto& a = (*ach)[i];
    const std::string path = "achievements[" + std::to_string(i) + "].";
    if (!a.is_object()) throw ConfigError(path, "expected an object");
    detail::reject_unknown(a, path, {"id", "requires", "category"});
    AchievementSpec spec;
    if (!detail::member(a, "id") || !a["id"].is_string()) throw ConfigError(path + "id", "required string");
    spec.id = a["id"].get<std::string>();
    if (const auto* r = detail::member(a, "requires")) {
      if (!r->is_array()) throw ConfigError(path + "requires", "expected a list");
      for (const auto& x : *r) {
        if (!x.is_string()) throw ConfigError(path + "requires", "expected strings");
        spec.prerequisites.push_back(x.get<std::string>());
      }
    }
    detail::read(a, "category", path, spec.category);
    c.achievement_tree.push_back(std::move(spec));
  }

  if (const auto* d = detail::member(root, "decay")) {
    if (!d->is_object()) throw ConfigError("decay", "expected an object");
    detail::reject_unknown(*d, "decay.",
                           {"hunger_period", "thirst_period", "fatigue_period", "rest_period",
                            "recover_period", "degen_period"});
    detail::read(*d, "hunger_period", "decay.", c.decay.hunger_period);
    detail::read(*d, "thirst_period", "decay.", c.decay.thirst_period);
    detail::read(*d, "fatigue_period", "decay.", c.decay.fatigue_period);
    detail::read(*d, "rest_period", "decay.", c.decay.rest_period);
    detail::read(*d, "recover_period", "decay.", c.decay.recover_period);
    detail::read(*d, "degen_period", "decay.", c.decay.degen_period);
  }
  if (const auto* h = detail::member(root, "hostiles")) {
    if (!h->is_object()) throw ConfigError("hostiles", "expected an object");
    auto& o = c.hostiles;
    detail::reject_unknown(*h, "hostiles.",
                           {"zombie_spawn_day", "zombie_spawn_night", "zombie_cap_day", "zombie_cap_night",
                            "chase_radius", "spawn_radius", "min_spawn_distance", "update_radius", "zombie_damage",
                            "zombie_sleep_damage", "zombie_cooldown", "skeleton_damage", "skeleton_reload",
                            "skeleton_range"});
    detail::read(*h, "zombie_spawn_day", "hostiles.", o.zombie_spawn_day);
    detail::read(*h, "zombie_spawn_night", "hostiles.", o.zombie_spawn_night);
    detail::read(*h, "zombie_cap_day", "hostiles.", o.zombie_cap_day);
    detail::read(*h, "zombie_cap_night", "hostiles.", o.zombie_cap_night);
    detail::read(*h, "chase_radius", "hostiles.", o.chase_radius);
    detail::read(*h, "spawn_radius", "hostiles.", o.spawn_radius);
    detail::read(*h, "min_spawn_distance", "hostiles.", o.min_spawn_distance);
    detail::read(*h, "update_radius", "hostiles.", o.update_radius);
    detail::read(*h, "zombie_damage", "hostiles.", o.zombie_damage);
    detail::read(*h, "zombie_sleep_damage", "hostiles.", o.zombie_sleep_damage);
    detail::read(*h, "zombie_cooldown", "hostiles.", o.zombie_cooldown);
    detail::read(*h, "skeleton_damage", "hostiles.", o.skeleton_damage);
    detail::read(*h, "skeleton_reload", "hostiles.", o.skeleton_reload);
    detail::read(*h, "skeleton_range", "hostiles.", o.skeleton_range);
  }
  c.source_text = std::string(text);
  validate(c);
  return c;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline WorldConfig load_world_config(const std::string& path) { return parse_world_config(read_file(path)); }

// Hash of the config bytes; sessions recorded under one config carry it.
inline std::uint64_t config_fingerprint(const WorldConfig& c) { return fnv1a(c.source_text); }

// Thirteen actions: the original seventeen minus furnace, plant and the two
// iron tools. Achievements depending on them are dropped.
inline constexpr std::string_view kDefaultWorldConfigText = R"({
  "map": {"width": 64, "height": 64},
  "view": {"width": 9, "height": 8},
  "daylight_exponent": 12,
  "day_length": 300,
  "day_offset": 0.3,
  "status_max": 9,
  "inventory_max": 9,
  "episode_step_limit": 10000,
  "seed": 0,
  "decay": {
    "hunger_period": 25,
    "thirst_period": 20,
    "fatigue_period": 30,
    "rest_period": 10,
    "recover_period": 25,
    "degen_period": 15
  },
  "actions": [
    "noop", "move_left", "move_right", "move_up", "move_down", "do", "sleep",
    "place_stone", "place_table", "make_wood_pickaxe", "make_stone_pickaxe",
    "make_wood_sword", "make_stone_sword"
  ],
  "achievements": [
    {"id": "collect_wood", "requires": [], "category": "resources"},
    {"id": "collect_sapling", "requires": [], "category": "resources"},
    {"id": "collect_drink", "requires": [], "category": "survival"},
    {"id": "eat_cow", "requires": [], "category": "survival"},
    {"id": "wake_up", "requires": [], "category": "survival"},
    {"id": "defeat_zombie", "requires": [], "category": "combat"},
    {"id": "defeat_skeleton", "requires": [], "category": "combat"},
    {"id": "place_table", "requires": ["collect_wood"], "category": "tools"},
    {"id": "make_wood_pickaxe", "requires": ["place_table"], "category": "tools"},
    {"id": "make_wood_sword", "requires": ["place_table"], "category": "combat"},
    {"id": "collect_stone", "requires": ["make_wood_pickaxe"], "category": "resources"},
    {"id": "collect_coal", "requires": ["make_wood_pickaxe"], "category": "resources"},
    {"id": "place_stone", "requires": ["collect_stone"], "category": "resources"},
    {"id": "make_stone_pickaxe", "requires": ["collect_stone"], "category": "tools"},
    {"id": "make_stone_sword", "requires": ["collect_stone"], "category": "combat"},
    {"id": "collect_iron", "requires": ["make_stone_pickaxe"], "category": "resources"}
  ]
}
)";

inline WorldConfig default_world_config() { return parse_world_config(kDefaultWorldConfigText); }

}  // namespace crafterlab
