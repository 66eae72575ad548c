// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "crafterlab/agents/train.hpp"
#include "crafterlab/analytics/report.hpp"
#include "crafterlab/speech/report.hpp"
#include "crafterlab/stats/tests.hpp"
#include "crafterlab/trace/replay.hpp"
#include "crafterlab/trace/session_io.hpp"
#include "oracles.hpp"

using namespace crafterlab;

namespace {

// Tolerances.
constexpr double kDaylightTol = 1e-12;
constexpr double kCapacityOracleTolBits = 1e-3;
constexpr double kCapacityTol = 1e-9;
constexpr double kZChannelTol = 1e-6;
constexpr double kNoopLo = 0.465, kNoopHi = 0.485;
constexpr double kUniformTol = 0.01;
constexpr double kInfoGainTol = 1e-12;
constexpr double kEntropyTol = 1e-12;
constexpr double kEntropyExampleTol = 1e-6;
constexpr double kReturnTol = 1e-9;
constexpr double kRankSumTol = 1e-12;
constexpr double kPermutationTol = 1e-12;
constexpr double kAlpha = 0.05;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(const char* name, const std::function<Outcome()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

ChannelMatrix channel(std::vector<std::vector<double>> rows) {
  ChannelMatrix ch;
  ch.rows = std::move(rows);
  return ch;
}

Outcome daylight_formula() {
  const double quarter = crafterlab::daylight(0.25);
  const bool ok = std::fabs(quarter - 0.984375) <= kDaylightTol && crafterlab::daylight(0.0) == 0.0 && crafterlab::daylight(0.5) == 1.0;
  return {ok, fmt("daylight(0.25)=%.15f daylight(0)=%g daylight(0.5)=%g", quarter, crafterlab::daylight(0.0), crafterlab::daylight(0.5))};
}

Outcome capacity_oracle() {
  Engine rng = make_engine(651);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 3), m = 2 + uniform_index(rng, 3);
    std::vector<std::vector<double>> w(n, std::vector<double>(m));
    for (auto& row : w) {
      double s = 0.0;
      for (auto& v : row) s += v = uniform01(rng) < 0.25 ? 0.0 : uniform01(rng);
      if (s == 0.0) row[0] = s = 1.0;
      for (auto& v : row) v /= s;
    }
    const double ba = channel_capacity(channel(w)).capacity;
    const double grid = oracle::grid_search_capacity(w, 1e-4);
    worst = std::max(worst, std::fabs(nats_to_bits(ba) - nats_to_bits(grid)));
  }
  double det_err = 0.0;
  for (std::size_t n = 2; n <= 6; ++n) {
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) w[i][(i + 1) % n] = 1.0;
    det_err = std::max(det_err, std::fabs(channel_capacity(channel(w)).capacity - std::log(static_cast<double>(n))));
  }
  const double z = channel_capacity(channel({{1.0, 0.0}, {0.5, 0.5}})).capacity;
  const double z_err = std::fabs(z - std::log(1.25));
  return {worst <= kCapacityOracleTolBits && det_err <= kCapacityTol && z_err <= kZChannelTol,
          fmt("max |BA-grid|=%.2e bits over 100 channels, deterministic err=%.1e, Z-channel err=%.1e", worst, det_err,
              z_err)};
}

Outcome random_agent() {
  const WorldConfig cfg = default_world_config();
  AgentConfig a;
  a.total_steps = 100000;
  const Session s = train(a, cfg, 1);
  std::map<std::string, std::int64_t> counts;
  std::int64_t total = 0;
  for (const auto& ep : s.episodes)
    for (const auto& st : ep.steps) {
      ++counts[st.action];
      ++total;
    }
  const std::string noop = cfg.action_set[static_cast<std::size_t>(cfg.noop_index)];
  const double f = static_cast<double>(counts[noop]) / static_cast<double>(total);
  const double rest = static_cast<double>(total - counts[noop]);
  const double expected = 1.0 / static_cast<double>(cfg.action_count() - 1);
  double worst = 0.0;
  for (const auto& id : cfg.action_set)
    if (id != noop) worst = std::max(worst, std::fabs(static_cast<double>(counts[id]) / rest - expected));
  return {total == 100000 && f >= kNoopLo && f <= kNoopHi && worst <= kUniformTol,
          fmt("noop frequency %.4f over %.0f steps, max deviation from uniform %.4f", f, static_cast<double>(total),
              worst)};
}

Outcome info_gain_closed_form() {
  Session s;
  s.session_id = "ig";
  s.subject_kind = "agent:fixture";
  for (std::size_t e = 0; e < 10; ++e) {
    Episode ep;
    ep.episode_index = e;
    ep.initial_abstract_state = "tree||";
    TrajectoryStep st;
    st.action = "do";
    st.abstract_state_before = "tree||";
    st.abstract_state_after = "tree|wood:1|";
    ep.steps.push_back(st);
    s.episodes.push_back(ep);
  }
  const auto curve = info_gain_curve(build_tables(s).transitions);
  double worst = 0.0;
  bool decreasing = curve.size() == 10;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double e = static_cast<double>(i + 1);
    worst = std::max(worst, std::fabs(*curve[i] - (std::log(1.0 + e) - std::log(e))));
    if (i > 0 && !(*curve[i] < *curve[i - 1])) decreasing = false;
  }
  return {worst <= kInfoGainTol && decreasing, fmt("max error %.1e, strictly decreasing=%g", worst, decreasing)};
}

Outcome entropy_values() {
  double worst = 0.0;
  for (int n : {2, 4, 8}) {
    CountMap c;
    for (int i = 0; i < n; ++i) c["s" + std::to_string(i)] = 7;
    worst = std::max(worst, std::fabs(entropy(c) - std::log(static_cast<double>(n))));
  }
  const double h31 = entropy(CountMap{{"a", 3}, {"b", 1}});
  const WorldConfig cfg = default_world_config();
  AgentConfig a;
  a.total_steps = 20000;
  const Tables t = build_tables(train(a, cfg, 5));
  const auto curve = entropy_curve(t.visits);
  bool bounded = !curve.empty();
  for (std::size_t e = 0; e < curve.size(); ++e) {
    const double cap = std::log(static_cast<double>(t.visits.through(e).size()));
    if (curve[e] < 0.0 || curve[e] > cap + kEntropyTol) bounded = false;
  }
  return {worst <= kEntropyTol && std::fabs(h31 - 0.562335) <= kEntropyExampleTol && bounded,
          fmt("uniform max error %.1e, H{3,1}=%.6f, %g curve points within [0, ln distinct]", worst, h31,
              static_cast<double>(curve.size()))};
}

Outcome exploration_score_fixtures() {
  AchievementTree tree;
  const int sizes[] = {6, 5, 4, 3};
  for (int level = 0; level < 4; ++level)
    for (int i = 0; i < sizes[level]; ++i) {
      AchievementSpec spec;
      spec.id = "L" + std::to_string(level + 1) + "_" + std::to_string(i);
      if (level > 0) spec.prerequisites = {"L" + std::to_string(level) + "_0"};
      tree.push_back(spec);
    }
  const auto make_episode = [](std::size_t index, std::vector<std::string> ids) {
    Episode e;
    e.episode_index = index;
    e.achievements = std::move(ids);
    e.cells_visited.insert({0, 0});
    return e;
  };
  Session s;
  s.episodes.push_back(make_episode(0, {"L1_0", "L1_1", "L1_2", "L1_3", "L1_4", "L1_5", "L2_0", "L2_1"}));
  s.episodes.push_back(make_episode(1, {"L2_2", "L3_0"}));
  const auto sc = exploration_scores(s, tree, 4096);

  Session two;
  two.episodes.push_back(make_episode(0, {"L1_0", "L1_1", "L1_2"}));
  two.episodes.push_back(make_episode(1, {"L1_0", "L1_1", "L1_2", "L1_3", "L1_4"}));
  const auto mean = exploration_scores(two, tree, 4096).mean_achievement;

  const WorldConfig cfg = default_world_config();
  std::vector<std::string> all;
  for (const auto& spec : cfg.achievement_tree) all.push_back(spec.id);
  Session full;
  full.episodes.push_back(make_episode(0, all));
  Episode wide = make_episode(0, all);
  for (int x = 0; x < cfg.map_width; ++x)
    for (int y = 0; y < cfg.map_height; ++y) wide.cells_visited.insert({x, y});
  full.episodes[0] = wide;
  const auto f = exploration_scores(full, cfg);
  const bool full_ok = f.mean_achievement == 1.0 && f.overall_achievement == 1.0 && f.breadth == 1.0 &&
                       f.depth == 1.0 && f.map_coverage == 1.0;
  return {sc.breadth == 0.5 && sc.depth == 0.75 && mean == 4.0 / 18.0 && full_ok,
          fmt("breadth=%.17g depth=%.17g mean_achievement=%.17g full_unlock_all_one=%g", sc.breadth, sc.depth, mean,
              full_ok)};
}

Outcome extrinsic_accounting() {
  const WorldConfig cfg = default_world_config();
  AgentConfig a;
  a.kind = AgentKind::kExtrinsic;
  a.total_steps = 30000;
  const auto path = std::filesystem::temp_directory_path() / "crafterlab_acceptance_extrinsic.jsonl";
  double worst = 0.0;
  std::size_t episodes = 0;
  for (std::uint64_t seed : {1, 2, 3}) {
    save_session(train(a, cfg, seed), path.string());
    const Session s = load_session(path.string());
    for (const auto& ep : s.episodes) {
      double ret = 0.0;
      int gains = 0, losses = 0;
      std::set<std::string> unique;
      for (const auto& st : ep.steps) {
        if (!st.reward) return {false, "step without a recorded reward"};
        ret += *st.reward;
        gains += st.events.health_gains();
        losses += st.events.health_losses();
        unique.insert(st.events.achievements_unlocked.begin(), st.events.achievements_unlocked.end());
      }
      worst = std::max(worst, std::fabs(ret - (static_cast<double>(unique.size()) + 0.1 * (gains - losses))));
      ++episodes;
    }
  }
  std::filesystem::remove(path);
  return {worst <= kReturnTol && episodes > 0,
          fmt("max return error %.1e over %g episodes", worst, static_cast<double>(episodes))};
}

Outcome replay_determinism() {
  const WorldConfig cfg = default_world_config();
  AgentConfig a;
  a.total_steps = 2000;
  std::size_t divergences = 0, steps = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Session s = parse_session(serialize_session(train(a, cfg, 1000 + seed)));
    const auto r = replay(cfg, s);
    divergences += r.ok() ? 0 : 1;
    steps += r.steps_checked;
  }
  return {divergences == 0, fmt("%g divergent sessions out of 50, %g steps checked", static_cast<double>(divergences),
                                static_cast<double>(steps))};
}

Outcome statistics_oracles() {
  double worst = 0.0;
  std::size_t cases = 0;
  for (std::size_t na = 1; na <= 5; ++na)
    for (std::size_t nb = 1; nb <= 5; ++nb) {
      const std::size_t n = na + nb;
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != na) continue;
        std::vector<double> a, b;
        for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1u ? a : b).push_back(static_cast<double>(i + 1));
        const auto r = wilcoxon_rank_sum(a, b);
        if (!r.exact) return {false, "rank-sum did not use the exact distribution"};
        worst = std::max(worst, std::fabs(r.p - oracle::rank_sum_enumeration_p(a, b)));
        ++cases;
      }
    }
  const auto perm = permutation_test_means({0, 0, 0, 0, 0}, {10, 10, 10, 10, 10}, 10000, 0);
  const double perm_err = std::fabs(perm.p - 2.0 / 252.0);
  return {worst <= kRankSumTol && perm.exhaustive && perm_err <= kPermutationTol,
          fmt("rank-sum max |p-oracle|=%.1e over %g sample pairs, permutation p=%.12f", worst,
              static_cast<double>(cases), perm.p)};
}

Outcome desk_experiment() {
  const WorldConfig cfg = default_world_config();
  std::vector<double> ent[2], ach[2];
  const AgentKind kinds[2] = {AgentKind::kNovelty, AgentKind::kRandom};
  for (int g = 0; g < 2; ++g) {
    AgentConfig a;
    a.kind = kinds[g];
    a.total_steps = 200000;
    for (std::uint64_t seed = 1; seed <= 13; ++seed) {
      const MetricReport r = metric_report(subsample_episodes(train(a, cfg, seed), 25), cfg);
      ent[g].push_back(r.overall_entropy);
      ach[g].push_back(r.scores.overall_achievement);
    }
  }
  const auto mean = [](const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); };
  const double pe = wilcoxon_rank_sum(ent[0], ent[1]).p, pa = wilcoxon_rank_sum(ach[0], ach[1]).p;
  const bool ok = mean(ent[0]) > mean(ent[1]) && mean(ach[0]) > mean(ach[1]) && pe < kAlpha && pa < kAlpha;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "entropy novelty %.3f vs random %.3f (p=%.2g), overall achievement %.3f vs %.3f (p=%.2g)",
                mean(ent[0]), mean(ent[1]), pe, mean(ach[0]), mean(ach[1]), pa);
  return {ok, buf};
}

class MockClient : public CompletionClient {
 public:
  explicit MockClient(std::map<std::string, std::string> responses) : responses_(std::move(responses)) {}
  std::string complete(const std::string&, const std::string& prompt) override {
    ++calls;
    for (const auto& [u, r] : responses_)
      if (prompt.size() >= u.size() + 3 && prompt.compare(prompt.size() - u.size() - 3, u.size(), u) == 0) return r;
    return "Finish[0]";
  }
  std::atomic<int> calls{0};

 private:
  std::map<std::string, std::string> responses_;
};

Outcome speech_pipeline() {
  const std::vector<std::tuple<std::string, std::string, bool>> samples = {
      {"sooo, next thing build the table with your wood. also make the pickaxe.",
       "A: This is a goal because the person is outlining specific tasks they want to accomplish in the game. Finish[1]",
       true},
      {"i should run, oh no, oh noooo.",
       "A: This is not a clear goal as the person is expressing panic rather than a specific objective. Finish[0]", false},
      {"um maybe i should just figure out what happens when i die",
       "A: This is a goal because the person is expressing a desire to figure out what happens when they die in the "
       "game. Finish[1]",
       true},
      {"which button to go left? red.",
       "This is not a goal because the person is asking a question about game controls. Finish[0]", false}};
  int parsed = 0;
  for (const auto& [u, r, label] : samples) parsed += parse_finish(r) == label;

  ClassifierConfig cfg;
  cfg.model = "mock";
  const auto cache = std::filesystem::temp_directory_path() / "crafterlab_acceptance_cache.jsonl";
  std::filesystem::remove(cache);
  cfg.cache_path = cache.string();
  std::vector<Utterance> transcript;
  std::map<std::string, std::string> responses;
  const char* texts[] = {"get some wood", "hm", "oh no", "build a table", "what", "okay", "nice", "wow"};
  for (int i = 0; i < 8; ++i) transcript.push_back({i * 1000, texts[i]});
  responses["get some wood"] = "Finish[1]";
  responses["build a table"] = "Finish[1]";
  auto first = std::make_shared<MockClient>(responses);
  double fraction;
  {
    Classifier c(cfg, first);
    fraction = *speech_report(transcript, c).goal_fraction;
  }
  auto second = std::make_shared<MockClient>(responses);
  Classifier warm(cfg, second);
  const double again = *speech_report(transcript, warm).goal_fraction;
  std::filesystem::remove(cache);

  const bool checksums = fnv1a(kGoalPrompt) == 0xff12751bd558aadcULL && fnv1a(kQuestionPrompt) == 0xba6d1a574987c91eULL;
  const bool ok = parsed == 4 && fraction == 0.25 && again == 0.25 && checksums && second->calls.load() == 0 &&
                  first->calls.load() == 16;
  return {ok, fmt("%g/4 sample responses parsed, goal_fraction=%g, prompt checksums match=%g, warm-cache calls=%g",
                  parsed, fraction, checksums, second->calls.load())};
}

}  // namespace

int main() {
  report("daylight formula", daylight_formula);
  report("channel capacity oracle equivalence", capacity_oracle);
  report("random agent action frequencies", random_agent);
  report("information gain closed form", info_gain_closed_form);
  report("entropy values", entropy_values);
  report("exploration score fixtures", exploration_score_fixtures);
  report("extrinsic reward accounting", extrinsic_accounting);
  report("replay determinism", replay_determinism);
  report("statistics oracles", statistics_oracles);
  report("desk experiment: novelty vs random", desk_experiment);
  report("speech pipeline", speech_pipeline);
  std::printf("%d failed\n", failures);
  return failures;
}
