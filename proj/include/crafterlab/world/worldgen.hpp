#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <initializer_list>
#include <utility>
#include <vector>

#include "crafterlab/core/rng.hpp"
#include "crafterlab/world/config.hpp"
#include "crafterlab/world/state.hpp"

namespace crafterlab {

namespace detail {

// Seeded lattice value noise with quintic smoothing, in [-1, 1].
class ValueNoise {
 public:
  explicit ValueNoise(std::uint64_t seed) : seed_(splitmix64(seed ^ 0x6a09e667f3bcc909ULL)) {}

  double operator()(double x, double y, int layer) const {
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const auto ix = static_cast<std::int64_t>(fx);
    const auto iy = static_cast<std::int64_t>(fy);
    const double tx = fade(x - fx);
    const double ty = fade(y - fy);
    const double a = lattice(ix, iy, layer);
    const double b = lattice(ix + 1, iy, layer);
    const double c = lattice(ix, iy + 1, layer);
    const double d = lattice(ix + 1, iy + 1, layer);
    return lerp(lerp(a, b, tx), lerp(c, d, tx), ty);
  }

  // Weighted octaves {size: weight}; normalized by the weight sum when asked.
  double octaves(double x, double y, int layer, std::initializer_list<std::pair<double, double>> sizes,
                 bool normalize = true) const {
    double value = 0.0;
    double total = 0.0;
    for (auto [size, weight] : sizes) {
      value += weight * (*this)(x / size, y / size, layer);
      total += weight;
    }
    return normalize ? value / total : value;
  }

  double octave(double x, double y, int layer, double size) const { return (*this)(x / size, y / size, layer); }

 private:
  static double fade(double t) { return t * t * t * (t * (t * 6 - 15) + 10); }
  static double lerp(double a, double b, double t) { return a + (b - a) * t; }

  double lattice(std::int64_t x, std::int64_t y, int layer) const {
    std::uint64_t h = seed_;
    h = splitmix64(h ^ static_cast<std::uint64_t>(x) * 0x9e3779b97f4a7c15ULL);
    h = splitmix64(h ^ static_cast<std::uint64_t>(y) * 0xc2b2ae3d27d4eb4fULL);
    h = splitmix64(h ^ static_cast<std::uint64_t>(layer));
    return static_cast<double>(h >> 11) * 0x1.0p-52 - 1.0;
  }

  std::uint64_t seed_;
};

constexpr bool walkable_for_player(Material m) {
  return m == Material::kGrass || m == Material::kSand || m == Material::kPath || m == Material::kLava;
}

constexpr bool walkable_for_creature(CreatureKind k, Material m) {
  if (k == CreatureKind::kSkeleton) return m == Material::kPath;
  return m == Material::kGrass || m == Material::kSand || m == Material::kPath;
}

}  // namespace detail

// Build a fresh episode state: procedural terrain, creatures, full status.
// Deterministic in (config, seed).
inline WorldState generate_world(const WorldConfig& cfg, std::uint64_t seed) {
  WorldState s;
  s.width = cfg.map_width;
  s.height = cfg.map_height;
  s.grid.assign(static_cast<std::size_t>(s.width) * s.height, Material::kGrass);
  s.world_seed = seed;
  s.rng = make_engine(seed);
  s.player_position = {s.width / 2, s.height / 2};
  s.player_facing = Direction::kDown;
  for (auto& v : s.status.values) v = cfg.status_max;
  s.unlocked_this_episode.assign(cfg.achievement_tree.size(), 0);
  s.time_of_day = time_of_day_at(cfg, 0);

  const detail::ValueNoise noise(seed);
  std::vector<std::uint8_t> tunnels(s.grid.size(), 0);
  const Cell spawn = s.player_position;

  for (int y = 0; y < s.height; ++y) {
    for (int x = 0; x < s.width; ++x) {
      const double dx = x - spawn.x;
      const double dy = y - spawn.y;
      double start = 4.0 - std::sqrt(dx * dx + dy * dy) + 2.0 * noise.octave(x, y, 8, 3);
      start = 1.0 / (1.0 + std::exp(-start));
      double water = noise.octaves(x, y, 3, {{15, 1.0}, {5, 0.15}}, false) + 0.1;
      water -= 2.0 * start;
      double mountain = noise.octaves(x, y, 0, {{15, 1.0}, {5, 0.3}});
      mountain -= 4.0 * start + 0.3 * water;

      Material m;
      const std::size_t idx = static_cast<std::size_t>(y) * s.width + x;
      if (start > 0.5) {
        m = Material::kGrass;
      } else if (mountain > 0.15) {
        if (noise.octave(x, y, 6, 7) > 0.15 && mountain > 0.3) {
          m = Material::kPath;
        } else if (noise.octave(2.0 * x, y / 5.0, 7, 3) > 0.55) {
          m = Material::kPath;
          tunnels[idx] = 1;
        } else if (noise.octave(x / 5.0, 2.0 * y, 7, 3) > 0.55) {
          m = Material::kPath;
          tunnels[idx] = 1;
        } else if (noise.octave(x, y, 1, 8) > 0 && uniform01(s.rng) > 0.85) {
          m = Material::kCoal;
        } else if (noise.octave(x, y, 2, 6) > 0.4 && uniform01(s.rng) > 0.75) {
          m = Material::kIron;
        } else if (mountain > 0.18 && uniform01(s.rng) > 0.994) {
          m = Material::kDiamond;
        } else if (mountain > 0.3 && noise.octave(x, y, 6, 5) > 0.35) {
          m = Material::kLava;
        } else {
          m = Material::kStone;
        }
      } else if (water > 0.25 && water < 0.35 && noise.octave(x, y, 4, 9) > -0.2) {
        m = Material::kSand;
      } else if (water > 0.3) {
        m = Material::kWater;
      } else if (noise.octave(x, y, 5, 7) > 0 && uniform01(s.rng) > 0.8) {
        m = Material::kTree;
      } else {
        m = Material::kGrass;
      }
      s.grid[idx] = m;
    }
  }

  // Every resource class must be reachable from spawn: on or next to a cell
  // the player can walk to. Missing classes are stamped into the spawn clearing.
  const auto reachable_classes = [&] {
    std::vector<std::uint8_t> seen(s.grid.size(), 0);
    std::array<bool, kMaterialCount> found{};
    std::deque<Cell> queue{spawn};
    seen[static_cast<std::size_t>(spawn.y) * s.width + spawn.x] = 1;
    while (!queue.empty()) {
      const Cell c = queue.front();
      queue.pop_front();
      found[static_cast<std::size_t>(s.at(c))] = true;
      for (auto d : {Direction::kUp, Direction::kDown, Direction::kLeft, Direction::kRight}) {
        const Cell n = c + offset(d);
        if (!s.in_bounds(n)) continue;
        const Material nm = s.at(n);
        found[static_cast<std::size_t>(nm)] = true;
        const std::size_t ni = static_cast<std::size_t>(n.y) * s.width + n.x;
        if (seen[ni] || nm == Material::kLava || !detail::walkable_for_player(nm)) continue;
        seen[ni] = 1;
        queue.push_back(n);
      }
    }
    return found;
  };
  constexpr std::array<Material, 5> kRequired = {Material::kGrass, Material::kTree, Material::kWater,
                                                 Material::kStone, Material::kPath};
  auto found = reachable_classes();
  const Cell stamps[4] = {{3, 0}, {-4, 0}, {0, 3}, {0, -4}};
  int next_stamp = static_cast<int>(uniform_index(s.rng, 4));
  for (Material m : kRequired) {
    if (found[static_cast<std::size_t>(m)]) continue;
    const Cell base = spawn + stamps[next_stamp];
    next_stamp = (next_stamp + 1) % 4;
    for (int oy = 0; oy < 2; ++oy)
      for (int ox = 0; ox < 2; ++ox) {
        const Cell c{base.x + ox, base.y + oy};
        if (s.in_bounds(c)) s.at(c) = m;
      }
  }

  for (int y = 0; y < s.height; ++y) {
    for (int x = 0; x < s.width; ++x) {
      const Cell c{x, y};
      if (c == spawn) continue;
      const Material m = s.at(c);
      if (!detail::walkable_for_player(m) || m == Material::kLava) continue;
      const double dx = x - spawn.x;
      const double dy = y - spawn.y;
      const double dist = std::sqrt(dx * dx + dy * dy);
      const std::size_t idx = static_cast<std::size_t>(y) * s.width + x;
      if (dist > 3 && m == Material::kGrass && uniform01(s.rng) > 0.985) {
        s.creatures.push_back({CreatureKind::kCow, c, 3, 0});
      } else if (dist > 12 && m == Material::kGrass && uniform01(s.rng) > 0.993) {
        s.creatures.push_back({CreatureKind::kZombie, c, 5, 0});
      } else if (m == Material::kPath && tunnels[idx] && uniform01(s.rng) > 0.95) {
        s.creatures.push_back({CreatureKind::kSkeleton, c, 3, 0});
      }
    }
  }
  return s;
}

inline WorldState reset_episode(const WorldConfig& cfg, std::uint64_t seed) { return generate_world(cfg, seed); }

}  // namespace crafterlab
