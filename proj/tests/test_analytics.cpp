#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "crafterlab/agents/train.hpp"
#include "crafterlab/analytics/abstract_state.hpp"
#include "crafterlab/analytics/report.hpp"
#include "crafterlab/trace/replay.hpp"
#include "crafterlab/trace/session_io.hpp"
#include "crafterlab/world/world.hpp"
#include "fixtures.hpp"

using namespace crafterlab;

namespace {

Session interaction_session(const std::vector<std::vector<TrajectoryStep>>& episodes) {
  Session s = fixtures::empty_session();
  for (std::size_t e = 0; e < episodes.size(); ++e) {
    Episode ep;
    ep.episode_index = e;
    ep.initial_abstract_state = episodes[e].empty() ? "grass||" : episodes[e].front().abstract_state_before;
    ep.steps = episodes[e];
    s.episodes.push_back(ep);
  }
  return s;
}

AchievementTree layered_tree(const std::vector<int>& sizes) {
  AchievementTree tree;
  std::string prev;
  for (std::size_t level = 0; level < sizes.size(); ++level) {
    const std::string first = "L" + std::to_string(level + 1) + "_0";
    for (int i = 0; i < sizes[level]; ++i) {
      AchievementSpec a;
      a.id = "L" + std::to_string(level + 1) + "_" + std::to_string(i);
      if (!prev.empty()) a.prerequisites = {prev};
      tree.push_back(a);
    }
    prev = first;
  }
  return tree;
}

}  // namespace

TEST(AbstractState, FacingTreeWithEmptyInventory) {
  const WorldConfig cfg = fixtures::peaceful_config();
  WorldState s = fixtures::quiet_world(cfg);
  s.player_facing = Direction::kUp;
  s.at(s.facing_cell()) = Material::kTree;
  const AbstractState a = abstract(s, &s);
  EXPECT_EQ(a.facing_label, "tree");
  EXPECT_TRUE(a.inventory_signature.empty());
  EXPECT_TRUE(a.status_increase.empty());
  EXPECT_EQ(a.key(), "tree||");
}

TEST(AbstractState, DrinkStepRecordsWaterIncrease) {
  const WorldConfig cfg = fixtures::peaceful_config();
  WorldState s = fixtures::quiet_world(cfg);
  s.status[StatusKind::kWater] = 4;
  s.player_facing = Direction::kLeft;
  s.at(s.facing_cell()) = Material::kWater;
  const WorldState before = s;
  step_in_place(cfg, s, std::string_view("do"));
  const AbstractState a = abstract(s, &before);
  EXPECT_EQ(a.status_increase, std::vector<std::string>{"water"});
}

TEST(AbstractState, FarAwayCellsDoNotMatter) {
  const WorldConfig cfg = fixtures::peaceful_config();
  WorldState a = fixtures::quiet_world(cfg);
  WorldState b = a;
  const Cell far{(a.player_position.x + 30) % cfg.map_width, (a.player_position.y + 30) % cfg.map_height};
  b.at(far) = a.at(far) == Material::kStone ? Material::kGrass : Material::kStone;
  EXPECT_EQ(abstract(a), abstract(b));
}

TEST(AbstractState, KeyRoundTrip) {
  AbstractState a;
  a.facing_label = "table";
  a.inventory_signature = {{"wood", 3}, {"sapling", 1}};
  a.status_increase = {"food", "energy"};
  EXPECT_EQ(AbstractState::from_key(a.key()), a);
  EXPECT_THROW(AbstractState::from_key("no separators"), InputError);
}

TEST(Tables, TenStepsFourInteractions) {
  std::vector<TrajectoryStep> steps;
  const char* actions[] = {"move_left", "do", "noop", "move_up", "place_stone", "do",
                           "move_down", "noop", "make_wood_pickaxe", "move_right"};
  for (int i = 0; i < 10; ++i) steps.push_back(fixtures::step(i, actions[i], "s" + std::to_string(i), "s" + std::to_string(i + 1)));
  const Tables t = build_tables(interaction_session({steps}));
  EXPECT_EQ(t.transitions.total(), 4);
  EXPECT_EQ(t.transitions.counts.size(), 4U);
  std::int64_t visits = 0;
  for (const auto& [k, n] : t.visits.total) visits += n;
  EXPECT_EQ(visits, 11);

  const Tables unfiltered = build_tables(interaction_session({steps}), false);
  EXPECT_EQ(unfiltered.transitions.total(), 10);
}

TEST(Tables, EmptySession) {
  const Tables t = build_tables(fixtures::empty_session());
  EXPECT_TRUE(t.visits.total.empty());
  EXPECT_TRUE(t.transitions.counts.empty());
  EXPECT_EQ(t.transitions.total(), 0);
}

TEST(Tables, MarginalsSumCounts) {
  std::vector<TrajectoryStep> steps = {fixtures::step(0, "do", "a", "b"), fixtures::step(1, "do", "a", "c"),
                                       fixtures::step(2, "do", "a", "b"), fixtures::step(3, "sleep", "b", "b")};
  const Tables t = build_tables(interaction_session({steps}));
  EXPECT_EQ((t.transitions.marginals.at({"a", "do"})), 3);
  EXPECT_EQ((t.transitions.counts.at({"a", "do", "b"})), 2);
  EXPECT_EQ((t.transitions.marginals.at({"b", "sleep"})), 1);
}

TEST(Entropy, Examples) {
  EXPECT_NEAR(entropy(CountMap{{"a", 1}, {"b", 1}, {"c", 1}, {"d", 1}}), std::log(4.0), 1e-12);
  EXPECT_EQ(entropy(CountMap{{"a", 5}}), 0.0);
  EXPECT_NEAR(entropy(CountMap{{"a", 3}, {"b", 1}}), 0.562335, 1e-6);
  EXPECT_NEAR(entropy(CountMap{{"a", 3}, {"b", 1}}), std::log(4.0) - 0.75 * std::log(3.0), 1e-12);
  EXPECT_THROW(entropy(CountMap{}), UndefinedInputError);
  EXPECT_THROW(entropy(CountMap{{"a", 0}}), UndefinedInputError);
  EXPECT_THROW(entropy(CountMap{{"a", -1}, {"b", 2}}), InputError);
}

TEST(Entropy, CurveIsCumulativeAndNonDecreasingForNewStates) {
  Session s = interaction_session({{fixtures::step(0, "do", "a", "b")}, {fixtures::step(0, "do", "c", "d")}});
  const Tables t = build_tables(s);
  const auto curve = entropy_curve(t.visits);
  ASSERT_EQ(curve.size(), 2U);
  EXPECT_NEAR(curve[0], std::log(2.0), 1e-12);
  EXPECT_NEAR(curve[1], std::log(4.0), 1e-12);
  EXPECT_LE(curve[0], curve[1]);
  EXPECT_NEAR(entropy(t.visits), curve.back(), 1e-12);
}

TEST(InfoGain, Examples) {
  const auto sa = [](int i) { return fixtures::step(i, "do", "s", "t"); };
  const Tables t = build_tables(interaction_session({{sa(0), sa(1), sa(2)}, {sa(0)}}));
  const auto curve = info_gain_curve(t.transitions);
  ASSERT_EQ(curve.size(), 2U);
  EXPECT_NEAR(*curve[0], std::log(4.0) / 3.0, 1e-12);
  EXPECT_NEAR(*curve[0], 0.462098, 1e-6);
  EXPECT_NEAR(*curve[1], std::log(5.0) - std::log(4.0), 1e-12);
  EXPECT_NEAR(*curve[1], 0.223144, 1e-6);
  EXPECT_NEAR(overall_info_gain(t.transitions), 0.342621, 1e-6);
  EXPECT_EQ(*info_gain_episode(t.transitions, 1), *curve[1]);
  EXPECT_THROW(info_gain_episode(t.transitions, 2), InputError);
}

TEST(InfoGain, SingletonPairsGiveLn2) {
  std::vector<TrajectoryStep> steps;
  for (int i = 0; i < 7; ++i) steps.push_back(fixtures::step(i, "do", "s" + std::to_string(i), "x"));
  const Tables t = build_tables(interaction_session({steps}));
  EXPECT_NEAR(*info_gain_curve(t.transitions)[0], std::log(2.0), 1e-12);
  EXPECT_NEAR(overall_info_gain(t.transitions), *info_gain_curve(t.transitions)[0], 0.0);
}

TEST(InfoGain, EmptyEpisodeIsMissingPoint) {
  const auto sa = fixtures::step(0, "do", "s", "t");
  const Tables t = build_tables(interaction_session({{sa}, {fixtures::step(0, "move_up", "s", "s")}, {sa}}));
  const auto curve = info_gain_curve(t.transitions);
  ASSERT_EQ(curve.size(), 3U);
  EXPECT_FALSE(curve[1].has_value());
  EXPECT_NEAR(overall_info_gain(t.transitions), (std::log(2.0) + std::log(3.0) - std::log(2.0)) / 2.0, 1e-12);
  EXPECT_THROW(overall_info_gain(build_tables(fixtures::empty_session()).transitions), UndefinedInputError);
}

TEST(InfoGain, RepeatedEpisodesStrictlyDecrease) {
  std::vector<TrajectoryStep> ep = {fixtures::step(0, "do", "a", "b"), fixtures::step(1, "sleep", "b", "c")};
  const Tables t = build_tables(interaction_session({ep, ep, ep, ep, ep}));
  const auto curve = info_gain_curve(t.transitions);
  for (std::size_t e = 1; e < curve.size(); ++e) EXPECT_LT(*curve[e], *curve[e - 1]);
  EXPECT_GT(overall_info_gain(t.transitions), *curve.back());
}

TEST(Empowerment, TwoDistinctDeterministicActions) {
  const Tables t = build_tables(interaction_session({{fixtures::step(0, "do", "s", "s1"), fixtures::step(1, "sleep", "s", "s2")}}));
  const auto r = empowerment(t.transitions, 2, {"do", "sleep"});
  EXPECT_NEAR(r.total, std::log(2.0), 1e-9);
  EXPECT_TRUE(r.all_converged);
}

TEST(Empowerment, NoTriedActionsIsZero) {
  const auto r = empowerment(TransitionTable{}, 5, {"do", "sleep"});
  EXPECT_EQ(r.total, 0.0);
  EXPECT_TRUE(r.per_state.empty());
  ChannelMatrix ch = state_channel(TransitionTable{}, "s", 3, {"do", "sleep"});
  EXPECT_NEAR(channel_capacity(ch).capacity, 0.0, 1e-12);
}

TEST(Empowerment, UntriedActionIsUniformRow) {
  const Tables t = build_tables(interaction_session({{fixtures::step(0, "do", "s", "s1")}}));
  const ChannelMatrix ch = state_channel(t.transitions, "s", 2, {"do", "sleep"});
  ASSERT_EQ(ch.rows.size(), 2U);
  EXPECT_EQ(ch.rows[0], (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(ch.rows[1], (std::vector<double>{0.5, 0.5}));
  const auto r = empowerment(t.transitions, 2, {"do", "sleep"});
  EXPECT_NEAR(r.total, std::log(1.25), 1e-9);
}

TEST(Empowerment, MergedColumnPreservesCapacity) {
  const Tables t = build_tables(interaction_session({{fixtures::step(0, "do", "s", "s1"), fixtures::step(1, "noop", "s", "s1")}}));
  const ChannelMatrix merged = state_channel(t.transitions, "s", 6, {"do", "sleep"});
  ChannelMatrix full;
  full.rows = {{1, 0, 0, 0, 0, 0}, std::vector<double>(6, 1.0 / 6.0)};
  EXPECT_NEAR(channel_capacity(merged).capacity, channel_capacity(full).capacity, 1e-9);
}

TEST(Scores, MeanAchievementExample) {
  const AchievementTree tree = layered_tree({6, 5, 4, 3});
  Session s = fixtures::empty_session();
  s.episodes.push_back(fixtures::unlocking_episode(0, {"L1_0", "L1_1", "L1_2"}));
  s.episodes.push_back(fixtures::unlocking_episode(1, {"L1_0", "L1_1", "L1_2", "L1_3", "L1_4", "L1_0"}));
  const auto sc = exploration_scores(s, tree, 64 * 64);
  EXPECT_DOUBLE_EQ(sc.mean_achievement, 4.0 / 18.0);
  EXPECT_DOUBLE_EQ(sc.overall_achievement, 5.0 / 18.0);
  EXPECT_DOUBLE_EQ(sc.map_coverage, 1.0 / (64.0 * 64.0));
}

TEST(Scores, BreadthAndDepthExample) {
  const AchievementTree tree = layered_tree({6, 5, 4, 3});
  std::set<std::string> unlocked = {"L1_0", "L1_1", "L1_2", "L1_3", "L1_4", "L1_5", "L2_0", "L2_1", "L2_2", "L3_0"};
  const auto [breadth, depth] = tree_traversal(tree, unlocked);
  EXPECT_DOUBLE_EQ(breadth, 0.5);
  EXPECT_DOUBLE_EQ(depth, 0.75);
}

TEST(Scores, FullUnlockAndEmpty) {
  const WorldConfig cfg = default_world_config();
  std::vector<std::string> ids;
  for (const auto& a : cfg.achievement_tree) ids.push_back(a.id);
  Session s = fixtures::empty_session();
  s.episodes.push_back(fixtures::unlocking_episode(0, ids));
  const auto sc = exploration_scores(s, cfg);
  EXPECT_DOUBLE_EQ(sc.mean_achievement, 1.0);
  EXPECT_DOUBLE_EQ(sc.overall_achievement, 1.0);
  EXPECT_DOUBLE_EQ(sc.breadth, 1.0);
  EXPECT_DOUBLE_EQ(sc.depth, 1.0);

  const auto zero = exploration_scores(fixtures::empty_session(), cfg);
  EXPECT_EQ(zero.mean_achievement, 0.0);
  EXPECT_EQ(zero.map_coverage, 0.0);
  EXPECT_EQ(zero.breadth, 0.0);
  EXPECT_EQ(zero.depth, 0.0);
}

TEST(Report, RandomAgentBoundsAndCurves) {
  const WorldConfig cfg = default_world_config();
  AgentConfig a;
  a.total_steps = 4000;
  const Session s = train(a, cfg, 7);
  const MetricReport r = metric_report(s, cfg);
  EXPECT_EQ(r.n_episodes, s.episodes.size());
  EXPECT_EQ(r.entropy_curve.size(), s.episodes.size());
  EXPECT_EQ(r.info_gain_curve.size(), s.episodes.size());
  for (double v : {r.scores.mean_achievement, r.scores.map_coverage, r.scores.overall_achievement, r.scores.breadth,
                   r.scores.depth})
    EXPECT_TRUE(v >= 0.0 && v <= 1.0) << v;
  EXPECT_GE(r.overall_entropy, 0.0);
  EXPECT_GE(r.total_empowerment, 0.0);
  EXPECT_NEAR(r.overall_entropy, r.entropy_curve.back(), 1e-12);
}

TEST(Report, ReplayedSessionGivesIdenticalReport) {
  const WorldConfig cfg = default_world_config();
  AgentConfig a;
  a.kind = AgentKind::kNovelty;
  a.total_steps = 3000;
  const Session s = train(a, cfg, 4);
  const Session loaded = parse_session(serialize_session(s));
  ASSERT_TRUE(replay(cfg, loaded).ok());
  std::ostringstream x, y;
  write_overall_csv(x, metric_report(s, cfg));
  write_overall_csv(y, metric_report(loaded, cfg));
  EXPECT_EQ(x.str(), y.str());
}

TEST(Report, EmptySession) {
  const MetricReport r = metric_report(fixtures::empty_session(), default_world_config());
  EXPECT_EQ(r.overall_entropy, 0.0);
  EXPECT_FALSE(r.overall_info_gain.has_value());
  EXPECT_EQ(r.total_empowerment, 0.0);
  EXPECT_TRUE(r.entropy_curve.empty());
}

TEST(Report, MetricLookup) {
  MetricReport r;
  r.overall_entropy = 2.5;
  r.scores.depth = 0.5;
  EXPECT_EQ(*metric_value(r, "overall_entropy"), 2.5);
  EXPECT_EQ(*metric_value(r, "depth"), 0.5);
  EXPECT_FALSE(metric_value(r, "overall_info_gain").has_value());
  try {
    (void)metric_value(r, "score");
    FAIL();
  } catch (const InputError& e) {
    const std::string msg = e.what();
    for (auto m : kReportMetrics) EXPECT_NE(msg.find(std::string(m)), std::string::npos) << m;
  }
}

TEST(Report, CsvRoundTrip) {
  const WorldConfig cfg = default_world_config();
  AgentConfig a;
  a.total_steps = 2000;
  const MetricReport r = metric_report(train(a, cfg, 2), cfg);
  std::ostringstream curves, overall;
  write_curves_csv(curves, r);
  write_overall_csv(overall, r);
  write_overall_csv(overall, r, false);

  const CsvTable c = parse_csv(curves.str());
  EXPECT_EQ(c.columns, split_csv_line(kCurveColumns));
  EXPECT_EQ(c.rows.size(), r.n_episodes);

  const CsvTable o = parse_csv(overall.str());
  EXPECT_EQ(o.columns, split_csv_line(kOverallColumns));
  ASSERT_EQ(o.rows.size(), 2U);
  const auto col = static_cast<std::size_t>(o.column("overall_entropy"));
  EXPECT_EQ(std::stod(o.rows[0][col]), r.overall_entropy);
  EXPECT_EQ(o.rows[0][static_cast<std::size_t>(o.column("session_id"))], r.session_id);
}
