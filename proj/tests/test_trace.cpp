#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "crafterlab/agents/train.hpp"
#include "crafterlab/trace/replay.hpp"
#include "crafterlab/trace/runner.hpp"
#include "crafterlab/trace/session_io.hpp"
#include "fixtures.hpp"

using namespace crafterlab;

namespace {

Session random_session(std::uint64_t seed, std::int64_t steps = 1500) {
  AgentConfig a;
  a.kind = AgentKind::kRandom;
  a.total_steps = steps;
  return train(a, default_world_config(), seed);
}

}  // namespace

TEST(Record, AppendsSteps) {
  Session s = fixtures::empty_session();
  for (int i = 0; i < 3; ++i) record(s, fixtures::step(i, "noop", "grass||", "grass||"));
  ASSERT_EQ(s.episodes.size(), 1U);
  EXPECT_EQ(s.episodes[0].steps.size(), 3U);
  EXPECT_TRUE(s.episodes[0].cells_visited.count(s.spawn));
}

TEST(Record, NonMonotoneStepIndexIsStateError) {
  Session s = fixtures::empty_session();
  record(s, fixtures::step(5, "noop", "a||", "a||"));
  EXPECT_THROW(record(s, fixtures::step(5, "noop", "a||", "a||")), StateError);
  EXPECT_THROW(record(s, fixtures::step(2, "noop", "a||", "a||")), StateError);
}

TEST(Record, AfterEpisodeOverStartsNextEpisode) {
  Session s = fixtures::empty_session();
  s.base_seed = 9;
  record(s, fixtures::step(0, "noop", "a||", "a||"));
  auto last = fixtures::step(1, "do", "a||", "b||", {"collect_wood"});
  last.events.episode_over = true;
  record(s, last);
  record(s, fixtures::step(0, "noop", "c||", "c||"));
  ASSERT_EQ(s.episodes.size(), 2U);
  EXPECT_EQ(s.episodes[0].steps.size(), 2U);
  EXPECT_EQ(s.episodes[0].achievements, std::vector<std::string>{"collect_wood"});
  EXPECT_EQ(s.episodes[1].episode_index, 1U);
  EXPECT_EQ(s.episodes[1].world_seed, episode_seed(9, 1));
  EXPECT_TRUE(s.episodes[1].achievements.empty());
}

TEST(Record, ClosedSessionIsStateError) {
  Session s = fixtures::empty_session();
  close(s);
  EXPECT_THROW(record(s, fixtures::step(0, "noop", "a||", "a||")), StateError);
}

TEST(Runner, ScriptedTwoEpisodeSession) {
  const WorldConfig cfg = default_world_config();
  Session s = fixtures::empty_session();
  s.config_fingerprint = config_fingerprint(cfg);
  SessionRunner runner(cfg, s);
  int episodes_done = 0;
  while (episodes_done < 2) {
    if (runner.needs_reset()) runner.start_episode();
    if (runner.act(static_cast<std::size_t>(cfg.noop_index)).events.episode_over) ++episodes_done;
  }
  ASSERT_EQ(s.episodes.size(), 2U);
  EXPECT_TRUE(s.episodes[0].finished());
  EXPECT_TRUE(s.episodes[1].finished());
  EXPECT_TRUE(replay(cfg, s).ok());
}

TEST(Replay, AgentSessionsReplayCleanly) {
  const WorldConfig cfg = default_world_config();
  for (std::uint64_t seed : {1, 2, 3}) {
    const Session s = random_session(seed);
    const auto r = replay(cfg, s);
    EXPECT_TRUE(r.ok()) << r.first_divergence->reason;
    EXPECT_EQ(r.steps_checked, s.total_steps());
  }
}

TEST(Replay, CorruptedActionDivergesAtThatStep) {
  const WorldConfig cfg = default_world_config();
  Session s = random_session(4, 400);
  const std::size_t target = 150;
  ASSERT_GT(s.episodes[0].steps.size(), target);
  // Pick a replacement action that really changes the successor state.
  WorldState w = reset_episode(cfg, s.episodes[0].world_seed);
  for (std::size_t i = 0; i < target; ++i) step_in_place(cfg, w, s.episodes[0].steps[i].action);
  std::string replacement;
  for (const auto& a : cfg.action_set) {
    WorldState probe = w;
    step_in_place(cfg, probe, a);
    if (state_hash(probe) != s.episodes[0].steps[target].state_hash) {
      replacement = a;
      break;
    }
  }
  ASSERT_FALSE(replacement.empty());
  s.episodes[0].steps[target].action = replacement;
  const auto r = replay(cfg, s);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.first_divergence->episode, 0U);
  EXPECT_EQ(r.first_divergence->step, target);
}

TEST(Replay, DifferentConfigIsInputError) {
  const Session s = random_session(5, 50);
  std::string text(kDefaultWorldConfigText);
  text.insert(text.find("\"seed\": 0"), "\"day_offset\": 0.31,\n  ");
  text.erase(text.find("\"day_offset\": 0.3,"), std::string("\"day_offset\": 0.3,").size());
  const WorldConfig other = parse_world_config(text);
  EXPECT_THROW(replay(other, s), InputError);
}

TEST(SessionIo, RoundTrip) {
  Session s = random_session(6);
  s.transcript = std::vector<Utterance>{{1200, "i need wood"}, {5000, "where is stone? great."}};
  const Session back = parse_session(serialize_session(s));
  EXPECT_EQ(back, s);
}

TEST(SessionIo, RoundTripThroughFile) {
  const auto dir = std::filesystem::temp_directory_path() / "crafterlab_trace_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "s.jsonl").string();
  const Session s = random_session(7, 300);
  save_session(s, path);
  EXPECT_EQ(load_session(path), s);
}

TEST(SessionIo, TranscriptPreservedVerbatim) {
  Session s = fixtures::empty_session();
  s.transcript = std::vector<Utterance>{{10, "it’s hard, it’s hard. what?"}, {20, "tab\tand \"quotes\""}};
  EXPECT_EQ(parse_session(serialize_session(s)).transcript, s.transcript);
}

TEST(SessionIo, TruncatedFileIsParseError) {
  const std::string text = serialize_session(random_session(8, 200));
  const std::string cut = text.substr(0, text.size() / 2);
  EXPECT_THROW(parse_session(cut), ParseError);
  const std::string no_end = text.substr(0, text.rfind('{'));
  EXPECT_THROW(parse_session(no_end), ParseError);
  LoadOptions partial;
  partial.allow_partial = true;
  const Session p = parse_session(cut, partial);
  EXPECT_FALSE(p.episodes.empty());
}

TEST(SessionIo, SchemaViolationsReportLineAndField) {
  const std::string text = serialize_session(random_session(9, 20));
  std::string bad = text;
  const auto pos = bad.find("\"a\":\"");
  const auto close = bad.find('"', pos + 5);
  bad.replace(pos, close + 1 - pos, "\"a\":9");
  try {
    parse_session(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3U);
    EXPECT_EQ(e.field(), "a");
  }
  EXPECT_THROW(parse_session(""), ParseError);
  EXPECT_THROW(parse_session("{\"record\":\"step\"}\n"), ParseError);
}

TEST(SessionIo, EpisodeEndMustMatchSteps) {
  Session s = fixtures::empty_session();
  record(s, fixtures::step(0, "do", "a||", "a||", {"collect_wood"}));
  std::string text = serialize_session(s);
  const auto pos = text.find("\"achievements\":[\"collect_wood\"]");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, std::string("\"achievements\":[\"collect_wood\"]").size(), "\"achievements\":[]");
  try {
    parse_session(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.field(), "achievements");
  }
}

TEST(SessionIo, WriterProducesLoadableFile) {
  const WorldConfig cfg = default_world_config();
  const auto path = (std::filesystem::temp_directory_path() / "crafterlab_writer.jsonl").string();
  Session s = fixtures::empty_session("writer");
  s.config_fingerprint = config_fingerprint(cfg);
  {
    SessionWriter w(path, s);
    SessionRunner runner(cfg, s);
    runner.start_episode();
    w.episode_started(s.episodes.back());
    for (int i = 0; i < 30; ++i) w.step(runner.act(static_cast<std::size_t>(i % cfg.action_count()), 1000 + i));
    LoadOptions partial;
    partial.allow_partial = true;
    EXPECT_EQ(load_session(path, partial).total_steps(), 30U);
    w.episode_finished(s.episodes.back());
    close(s);
    w.finish(s);
  }
  const Session back = load_session(path);
  EXPECT_EQ(back, s);
  EXPECT_TRUE(replay(cfg, back).ok());
}
