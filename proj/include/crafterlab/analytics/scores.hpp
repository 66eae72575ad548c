#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "crafterlab/core/errors.hpp"
#include "crafterlab/trace/session.hpp"
#include "crafterlab/world/config.hpp"

namespace crafterlab {

struct ExplorationScores {
  double mean_achievement = 0.0;
  double map_coverage = 0.0;
  double overall_achievement = 0.0;
  double breadth = 0.0;
  double depth = 0.0;
};

// Breadth and depth of a set of unlocked achievements. Levels start at 1 for
// achievements without prerequisites.
inline std::pair<double, double> tree_traversal(const AchievementTree& tree, const std::set<std::string>& unlocked) {
  const auto depths = achievement_depths(tree);
  const double k = static_cast<double>(tree.size());
  if (tree.empty()) return {0.0, 0.0};
  int max_depth = 0;
  std::map<int, std::pair<int, int>> levels;  // level -> (unlocked, size)
  for (const auto& [id, d] : depths) {
    max_depth = std::max(max_depth, d);
    auto& [u, n] = levels[d];
    ++n;
    if (unlocked.count(id)) ++u;
  }
  int first_incomplete = max_depth;
  for (const auto& [d, un] : levels)
    if (un.first < un.second) {
      first_incomplete = d;
      break;
    }
  int counted = 0, deepest = 0;
  for (const auto& [id, d] : depths)
    if (unlocked.count(id)) {
      if (d <= first_incomplete) ++counted;
      deepest = std::max(deepest, d);
    }
  return {counted / k, static_cast<double>(deepest) / max_depth};
}

inline ExplorationScores exploration_scores(const Session& session, const AchievementTree& tree,
                                            std::size_t map_area) {
  ExplorationScores s;
  if (session.episodes.empty() || tree.empty()) return s;
  if (map_area == 0) throw InputError("map area must be positive");
  std::set<std::string> ids;
  for (const auto& a : tree) ids.insert(a.id);
  const double k = static_cast<double>(tree.size());
  std::set<std::string> all;
  std::size_t unlocked = 0, cells = 0;
  for (const auto& ep : session.episodes) {
    std::set<std::string> unique;
    for (const auto& a : ep.achievements)
      if (ids.count(a)) unique.insert(a);
    unlocked += unique.size();
    cells += std::min(ep.cells_visited.size(), map_area);
    all.insert(unique.begin(), unique.end());
  }
  const double e = static_cast<double>(session.episodes.size());
  s.mean_achievement = static_cast<double>(unlocked) / (e * k);
  s.map_coverage = static_cast<double>(cells) / (e * static_cast<double>(map_area));
  s.overall_achievement = all.size() / k;
  std::tie(s.breadth, s.depth) = tree_traversal(tree, all);
  return s;
}

inline ExplorationScores exploration_scores(const Session& session, const WorldConfig& cfg) {
  return exploration_scores(session, cfg.achievement_tree,
                            static_cast<std::size_t>(cfg.map_width) * static_cast<std::size_t>(cfg.map_height));
}

}  // namespace crafterlab
