#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crafterlab/agents/agent_config.hpp"
#include "crafterlab/agents/train.hpp"
#include "crafterlab/analytics/report.hpp"
#include "crafterlab/service/server.hpp"
#include "crafterlab/speech/http_client.hpp"
#include "crafterlab/speech/report.hpp"
#include "crafterlab/stats/compare.hpp"
#include "crafterlab/stats/plot_data.hpp"
#include "crafterlab/trace/replay.hpp"
#include "crafterlab/trace/session_io.hpp"

namespace fs = std::filesystem;
using namespace crafterlab;

namespace {

WorldConfig world_from(const std::string& path) { return path.empty() ? default_world_config() : load_world_config(path); }

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto dots = part.find("..");
    try {
      if (dots == std::string::npos) {
        out.push_back(std::stoull(part));
      } else {
        const auto lo = std::stoull(part.substr(0, dots)), hi = std::stoull(part.substr(dots + 2));
        if (hi < lo) throw InputError("empty seed range '" + part + "'");
        for (auto s = lo; s <= hi; ++s) out.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw InputError("bad seed list '" + text + "'");
    }
  }
  if (out.empty()) throw InputError("bad seed list '" + text + "'");
  return out;
}

Session load_for_analysis(const std::string& path, std::size_t k) {
  Session s = load_session(path);
  return k > 0 ? subsample_episodes(s, k) : s;
}

std::vector<double> group_values(const std::vector<std::string>& paths, const std::string& metric,
                                 const WorldConfig& cfg, std::size_t k) {
  std::vector<double> out;
  for (const auto& path : paths) {
    if (fs::path(path).extension() == ".csv") {
      const CsvTable t = load_csv(path);
      const auto col = t.column(metric);
      for (const auto& row : t.rows) {
        if (row[col].empty()) continue;
        out.push_back(std::stod(row[col]));
      }
    } else {
      const auto v = metric_value(metric_report(load_for_analysis(path, k), cfg), metric);
      if (v) out.push_back(*v);
    }
  }
  return out;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot write '" + path.string() + "'");
  return os;
}

Server* g_server = nullptr;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open-world exploration lab: simulate agents, analyze and compare sessions, host live play."};
  app.require_subcommand(1);

  std::string world_path;
  auto add_config = [&](CLI::App* c) {
    c->add_option("--config", world_path, "World config (JSON); built-in defaults when omitted")->check(CLI::ExistingFile);
  };

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run an agent and write one session file per seed");
  add_config(sim);
  std::string agent_path, agent_kind, sim_out = "sessions", seeds_text;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> steps;
  sim->add_option("--agent", agent_path, "Agent config (JSON)")->check(CLI::ExistingFile);
  sim->add_option("--kind", agent_kind, "Agent kind, overriding the agent config: random, extrinsic, novelty, entropy_gain");
  sim->add_option("--seed", seed, "Single seed");
  sim->add_option("--seeds", seeds_text, "Seed list such as 1..13 or 1,5,9; defaults to the agent config");
  sim->add_option("--steps", steps, "Environment steps per seed, overriding the agent config");
  sim->add_option("--out", sim_out, "Output directory, or a .jsonl path for a single seed");

  // analyze
  auto* ana = app.add_subcommand("analyze", "Compute metric reports for session files");
  add_config(ana);
  std::vector<std::string> ana_paths;
  std::string ana_out = "reports";
  std::size_t ana_k = 0;
  ana->add_option("sessions", ana_paths, "Session files")->required()->check(CLI::ExistingFile);
  ana->add_option("--out", ana_out, "Output directory");
  ana->add_option("--k", ana_k, "Subsample each session to k evenly spaced episodes (0 keeps all)");

  // compare
  auto* cmp = app.add_subcommand("compare", "Compare one overall metric between two groups");
  add_config(cmp);
  std::vector<std::string> group_a, group_b;
  std::string metric = "overall_entropy", test = "ranksum", cmp_out;
  std::size_t cmp_k = 0, n_perm = 10000;
  std::uint64_t cmp_seed = 0;
  cmp->add_option("--a", group_a, "Group A: overall CSV files or session files")->required();
  cmp->add_option("--b", group_b, "Group B: overall CSV files or session files")->required();
  cmp->add_option("--metric", metric, "Metric: " + report_metric_list());
  cmp->add_option("--test", test, "ranksum or permutation");
  cmp->add_option("--k", cmp_k, "Subsample session files to k episodes before scoring");
  cmp->add_option("--n-perm", n_perm, "Permutations for the permutation test");
  cmp->add_option("--seed", cmp_seed, "Seed for the permutation test");
  cmp->add_option("--out", cmp_out, "Write the result as CSV");

  // plot
  auto* plot = app.add_subcommand("plot", "Export grouped plot tables");
  add_config(plot);
  std::vector<std::string> plot_inputs;
  std::string plot_out = "plots";
  std::size_t plot_k = 0;
  plot->add_option("inputs", plot_inputs, "group=session.jsonl entries")->required();
  plot->add_option("--out", plot_out, "Output directory");
  plot->add_option("--k", plot_k, "Subsample sessions to k episodes");

  // replay
  auto* rep = app.add_subcommand("replay", "Re-simulate sessions and check every state hash");
  add_config(rep);
  std::vector<std::string> rep_paths;
  rep->add_option("sessions", rep_paths, "Session files")->required()->check(CLI::ExistingFile);

  // serve
  auto* srv = app.add_subcommand("serve", "Host live play sessions");
  add_config(srv);
  std::string address = "127.0.0.1", data_dir = "sessions";
  unsigned short port = 7777;
  std::optional<unsigned short> ws_port;
  double limit_min = 20.0;
  srv->add_option("--address", address, "Listen address");
  srv->add_option("--port", port, "Port for length-prefixed records");
  srv->add_option("--ws-port", ws_port, "Port for WebSocket clients");
  srv->add_option("--data-dir", data_dir, "Directory for session files");
  srv->add_option("--time-limit-min", limit_min, "Session time limit in minutes")->check(CLI::PositiveNumber);

  // speech
  auto* sp = app.add_subcommand("speech", "Classify transcript utterances as goals and questions");
  std::string sp_input, endpoint, model = "default", cache_path;
  std::optional<double> duration;
  std::size_t in_flight = 4;
  int retries = 3, timeout_ms = 30000;
  sp->add_option("input", sp_input, "Session file with a transcript, or a transcript text file")
      ->required()
      ->check(CLI::ExistingFile);
  sp->add_option("--endpoint", endpoint, "Completion endpoint URL");
  sp->add_option("--model", model, "Model name sent with each request");
  sp->add_option("--cache", cache_path, "Response cache; defaults to <input>.speech-cache.jsonl");
  sp->add_option("--duration-min", duration, "Play duration; taken from step timestamps when omitted");
  sp->add_option("--max-in-flight", in_flight, "Concurrent requests");
  sp->add_option("--retries", retries, "Retries per request");
  sp->add_option("--timeout-ms", timeout_ms, "Request timeout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      const WorldConfig world = world_from(world_path);
      AgentConfig agent = agent_path.empty() ? AgentConfig{} : load_agent_config(agent_path);
      if (!agent_kind.empty()) {
        const auto k = agent_kind_from_name(agent_kind);
        if (!k) throw ConfigError("kind", "unknown agent kind '" + agent_kind + "'");
        agent.kind = *k;
      }
      if (steps) agent.total_steps = *steps;
      std::vector<std::uint64_t> seeds = agent.seeds;
      if (seed) seeds = {*seed};
      if (!seeds_text.empty()) seeds = parse_seeds(seeds_text);
      const bool single_file = fs::path(sim_out).extension() == ".jsonl";
      if (single_file && seeds.size() != 1) throw InputError("--out names a file but " + std::to_string(seeds.size()) + " seeds were given");
      for (auto s : seeds) {
        const Session session = train(agent, world, s);
        const fs::path path = single_file ? fs::path(sim_out) : fs::path(sim_out) / (session.session_id + ".jsonl");
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        save_session(session, path.string());
        std::cout << path.string() << '\t' << session.episodes.size() << " episodes\t" << session.total_steps()
                  << " steps\n";
      }
    } else if (*ana) {
      const WorldConfig world = world_from(world_path);
      fs::create_directories(ana_out);
      auto overall = open_out(fs::path(ana_out) / "overall.csv");
      bool first = true;
      for (const auto& path : ana_paths) {
        const MetricReport r = metric_report(load_for_analysis(path, ana_k), world);
        auto curves = open_out(fs::path(ana_out) / (r.session_id + ".curves.csv"));
        write_curves_csv(curves, r);
        auto one = open_out(fs::path(ana_out) / (r.session_id + ".overall.csv"));
        write_overall_csv(one, r);
        write_overall_csv(overall, r, first);
        first = false;
        std::cout << r.session_id << "\tentropy=" << format_double(r.overall_entropy) << "\tinfo_gain="
                  << (r.overall_info_gain ? format_double(*r.overall_info_gain) : "NA")
                  << "\tempowerment=" << format_double(r.total_empowerment)
                  << "\toverall_achievement=" << format_double(r.scores.overall_achievement) << '\n';
      }
    } else if (*cmp) {
      if (!is_report_metric(metric))
        throw InputError("unknown metric '" + metric + "'; valid metrics: " + report_metric_list());
      const CompareTest t = compare_test_from_name(test);
      const WorldConfig world = world_from(world_path);
      const auto a = group_values(group_a, metric, world, cmp_k);
      const auto b = group_values(group_b, metric, world, cmp_k);
      const Comparison c = compare_groups(a, b, metric, t, n_perm, cmp_seed);
      write_comparison_csv(std::cout, c);
      if (!cmp_out.empty()) {
        auto os = open_out(cmp_out);
        write_comparison_csv(os, c);
      }
    } else if (*plot) {
      const WorldConfig world = world_from(world_path);
      std::vector<GroupedReport> reports;
      for (const auto& in : plot_inputs) {
        const auto eq = in.find('=');
        if (eq == std::string::npos || eq == 0) throw InputError("expected group=path, got '" + in + "'");
        reports.push_back({in.substr(0, eq), metric_report(load_for_analysis(in.substr(eq + 1), plot_k), world)});
      }
      for (const auto& p : export_plot_data(reports, plot_out)) std::cout << p.string() << '\n';
    } else if (*rep) {
      const WorldConfig world = world_from(world_path);
      int failures = 0;
      for (const auto& path : rep_paths) {
        const ReplayReport r = replay(world, load_session(path));
        if (r.ok()) {
          std::cout << path << "\tok\t" << r.episodes_checked << " episodes\t" << r.steps_checked << " steps\n";
          continue;
        }
        ++failures;
        const auto& d = *r.first_divergence;
        std::cout << path << "\tdiverged\tepisode " << d.episode;
        if (d.step) std::cout << " step " << *d.step;
        std::cout << "\t" << d.reason << '\n';
      }
      return failures == 0 ? 0 : 1;
    } else if (*srv) {
      ServiceOptions so;
      so.data_dir = data_dir;
      so.time_limit_ms = static_cast<std::int64_t>(limit_min * 60000.0);
      LiveSessionManager manager(world_from(world_path), so);
      ServerOptions opts;
      opts.address = address;
      opts.port = port;
      opts.websocket_port = ws_port;
      Server server(manager, opts);
      g_server = &server;
      std::signal(SIGINT, [](int) {
        if (g_server) g_server->stop();
      });
      std::signal(SIGTERM, [](int) {
        if (g_server) g_server->stop();
      });
      std::cout << "listening on " << address << ':' << server.port();
      if (auto w = server.websocket_port()) std::cout << " (websocket " << *w << ')';
      std::cout << ", sessions in " << data_dir << std::endl;
      server.run();
    } else if (*sp) {
      std::vector<Utterance> transcript;
      if (fs::path(sp_input).extension() == ".jsonl") {
        const Session s = load_session(sp_input);
        if (!s.transcript) throw InputError(sp_input + ": session has no transcript");
        transcript = *s.transcript;
        if (!duration) duration = play_duration_min(s);
      } else {
        transcript = parse_transcript(read_file(sp_input));
      }
      ClassifierConfig cc;
      cc.endpoint = endpoint;
      cc.model = model;
      cc.cache_path = cache_path.empty() ? sp_input + ".speech-cache.jsonl" : cache_path;
      cc.max_in_flight = in_flight;
      cc.max_retries = retries;
      cc.timeout_ms = timeout_ms;
      std::shared_ptr<CompletionClient> client;
      if (!endpoint.empty()) client = std::make_shared<HttpCompletionClient>(cc);
      Classifier classifier(cc, client);
      const SpeechReport r = speech_report(transcript, classifier, duration);
      auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
      std::cout << "n_utterances,eligible,word_rate,goal_fraction,question_fraction,goal_unclassified,"
                   "question_unclassified,network_calls\n"
                << r.n_utterances << ',' << (r.eligible ? 1 : 0) << ',' << opt(r.word_rate) << ','
                << opt(r.goal_fraction) << ',' << opt(r.question_fraction) << ',' << r.goal_unclassified << ','
                << r.question_unclassified << ',' << classifier.network_calls() << '\n';
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
