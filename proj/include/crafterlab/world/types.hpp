#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "crafterlab/core/errors.hpp"

namespace crafterlab {

struct Cell {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

enum class Direction : std::uint8_t { kUp, kDown, kLeft, kRight };

inline constexpr Cell offset(Direction d) {
  switch (d) {
    case Direction::kUp: return {0, -1};
    case Direction::kDown: return {0, 1};
    case Direction::kLeft: return {-1, 0};
    case Direction::kRight: return {1, 0};
  }
  return {0, 0};
}

inline constexpr Cell operator+(Cell a, Cell b) { return {a.x + b.x, a.y + b.y}; }

inline std::string_view direction_name(Direction d) {
  switch (d) {
    case Direction::kUp: return "up";
    case Direction::kDown: return "down";
    case Direction::kLeft: return "left";
    case Direction::kRight: return "right";
  }
  return "up";
}

enum class Material : std::uint8_t {
  kWater,
  kGrass,
  kStone,
  kPath,
  kSand,
  kTree,
  kLava,
  kCoal,
  kIron,
  kDiamond,
  kTable,
};
inline constexpr std::size_t kMaterialCount = 11;

inline constexpr std::array<std::string_view, kMaterialCount> kMaterialNames = {
    "water", "grass", "stone", "path", "sand", "tree", "lava", "coal", "iron", "diamond", "table"};

inline std::string_view material_name(Material m) {
  return kMaterialNames[static_cast<std::size_t>(m)];
}

enum class CreatureKind : std::uint8_t { kCow, kZombie, kSkeleton };

inline std::string_view creature_name(CreatureKind k) {
  switch (k) {
    case CreatureKind::kCow: return "cow";
    case CreatureKind::kZombie: return "zombie";
    case CreatureKind::kSkeleton: return "skeleton";
  }
  return "cow";
}

enum class Item : std::uint8_t {
  kWood,
  kStone,
  kCoal,
  kIron,
  kSapling,
  kWoodPickaxe,
  kStonePickaxe,
  kWoodSword,
  kStoneSword,
};
inline constexpr std::size_t kItemCount = 9;

inline constexpr std::array<std::string_view, kItemCount> kItemNames = {
    "wood",        "stone",         "coal",       "iron",       "sapling",
    "wood_pickaxe", "stone_pickaxe", "wood_sword", "stone_sword"};

inline std::string_view item_name(Item i) { return kItemNames[static_cast<std::size_t>(i)]; }

inline std::optional<Item> item_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kItemCount; ++i)
    if (kItemNames[i] == name) return static_cast<Item>(i);
  return std::nullopt;
}

enum class StatusKind : std::uint8_t { kHealth, kFood, kWater, kEnergy };
inline constexpr std::size_t kStatusCount = 4;
inline constexpr std::array<std::string_view, kStatusCount> kStatusNames = {"health", "food", "water",
                                                                            "energy"};

inline std::optional<StatusKind> status_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kStatusCount; ++i)
    if (kStatusNames[i] == name) return static_cast<StatusKind>(i);
  return std::nullopt;
}

// Engine-level action semantics. Which of these a world offers, and in what
// order, comes from WorldConfig::action_set.
enum class ActionKind : std::uint8_t {
  kNoop,
  kMoveLeft,
  kMoveRight,
  kMoveUp,
  kMoveDown,
  kDo,
  kSleep,
  kPlaceStone,
  kPlaceTable,
  kMakeWoodPickaxe,
  kMakeStonePickaxe,
  kMakeWoodSword,
  kMakeStoneSword,
};
inline constexpr std::size_t kActionKindCount = 13;

inline constexpr std::array<std::string_view, kActionKindCount> kActionNames = {
    "noop",       "move_left",   "move_right",        "move_up",            "move_down",
    "do",         "sleep",       "place_stone",       "place_table",        "make_wood_pickaxe",
    "make_stone_pickaxe", "make_wood_sword", "make_stone_sword"};

inline std::string_view action_name(ActionKind a) { return kActionNames[static_cast<std::size_t>(a)]; }

inline std::optional<ActionKind> action_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kActionKindCount; ++i)
    if (kActionNames[i] == name) return static_cast<ActionKind>(i);
  return std::nullopt;
}

inline constexpr bool is_movement(ActionKind a) {
  return a == ActionKind::kMoveLeft || a == ActionKind::kMoveRight || a == ActionKind::kMoveUp ||
         a == ActionKind::kMoveDown;
}

inline constexpr std::optional<Direction> movement_direction(ActionKind a) {
  switch (a) {
    case ActionKind::kMoveLeft: return Direction::kLeft;
    case ActionKind::kMoveRight: return Direction::kRight;
    case ActionKind::kMoveUp: return Direction::kUp;
    case ActionKind::kMoveDown: return Direction::kDown;
    default: return std::nullopt;
  }
}

// Counted by the transition table: anything that is neither a move nor a no-op.
inline constexpr bool is_interaction(ActionKind a) { return a != ActionKind::kNoop && !is_movement(a); }

}  // namespace crafterlab
