#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <vector>

#include "crafterlab/core/errors.hpp"
#include "crafterlab/core/hash.hpp"
#include "crafterlab/trace/runner.hpp"
#include "crafterlab/trace/session_io.hpp"
#include "crafterlab/world/world.hpp"

namespace crafterlab {

using Clock = std::function<std::int64_t()>;  // milliseconds

inline std::int64_t system_clock_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

inline constexpr std::int64_t kDefaultTimeLimitMs = 20 * 60 * 1000;

// What the player is allowed to see: no achievements, no score.
struct Frame {
  std::string session_id;
  std::size_t episode = 0;
  std::int64_t step = 0;
  int view_width = 0;
  int view_height = 0;
  std::vector<std::string> tiles;  // row-major semantic labels
  Status status;
  Inventory inventory;
  bool sleeping = false;
  double daylight = 1.0;
  bool game_over = false;
  std::int64_t time_remaining_ms = 0;
};

struct ActResult {
  Frame frame;
  StepEvents events;
  bool new_episode = false;  // the action was applied to a freshly started episode
  bool duplicate = false;    // replayed reply for a request id seen before
};

struct CreateResult {
  std::string session_id;
  Frame frame;
};

struct ServiceOptions {
  std::filesystem::path data_dir = "sessions";
  std::int64_t time_limit_ms = kDefaultTimeLimitMs;
};

class LiveSessionManager {
 public:
  LiveSessionManager(WorldConfig cfg, ServiceOptions opts, Clock clock = system_clock_ms)
      : cfg_(std::move(cfg)), opts_(std::move(opts)), clock_(std::move(clock)) {
    std::filesystem::create_directories(opts_.data_dir);
  }

  const WorldConfig& config() const { return cfg_; }
  const ServiceOptions& options() const { return opts_; }

  CreateResult create(const std::string& subject_kind, std::optional<std::uint64_t> seed = std::nullopt) {
    if (subject_kind != "child" && subject_kind != "adult" && !valid_subject_kind(subject_kind))
      throw InputError("invalid subject kind '" + subject_kind + "'");
    auto live = std::make_unique<Live>();
    const auto now = clock_();
    std::uint64_t base;
    std::string id;
    {
      std::unique_lock lock(mu_);
      base = seed ? *seed : splitmix64(entropy_() ^ static_cast<std::uint64_t>(now) ^ ++counter_);
      id = "live-" + std::to_string(counter_) + "-" + hex64(fnv1a(std::to_string(base))).substr(0, 8);
    }
    live->session.subject_kind = subject_kind;
    live->session.session_id = id;
    live->session.config_fingerprint = config_fingerprint(cfg_);
    live->session.base_seed = base;
    live->runner = std::make_unique<SessionRunner>(cfg_, live->session);
    live->path = opts_.data_dir / (id + ".jsonl");
    live->writer = std::make_unique<SessionWriter>(live->path.string(), live->session);
    live->created_ms = now;
    live->last_activity_ms = now;
    live->runner->start_episode();
    live->writer->episode_started(live->session.episodes.back());
    CreateResult r{id, frame(*live, now)};
    std::unique_lock lock(mu_);
    sessions_.emplace(id, std::move(live));
    return r;
  }

  // Applies one action. Repeating a request id returns the original reply
  // without stepping the world again. Acting after game over starts the next
  // episode first.
  ActResult act(const std::string& id, const std::string& action, const std::string& request_id = {}) {
    Live& live = get(id);
    std::lock_guard lock(live.mu);
    const auto now = clock_();
    if (!request_id.empty())
      if (auto it = live.replies.find(request_id); it != live.replies.end()) {
        ActResult r = it->second;
        r.duplicate = true;
        return r;
      }
    ensure_open(live, now);
    const int index = cfg_.action_index(action);
    if (index < 0) throw InputError("unknown action '" + action + "'");
    ActResult r;
    if (live.runner->needs_reset()) {
      live.runner->start_episode();
      live.writer->episode_started(live.session.episodes.back());
      r.new_episode = true;
    }
    const TrajectoryStep& st = live.runner->act(static_cast<std::size_t>(index), now - live.created_ms);
    live.writer->step(st);
    r.events = st.events;
    if (st.events.episode_over) live.writer->episode_finished(live.session.episodes.back());
    live.last_activity_ms = now;
    r.frame = frame(live, now);
    if (!request_id.empty()) live.replies.emplace(request_id, r);
    return r;
  }

  Frame state(const std::string& id) {
    Live& live = get(id);
    std::lock_guard lock(live.mu);
    const auto now = clock_();
    ensure_open(live, now);
    return frame(live, now);
  }

  // Finalizes the session file and forgets the session. Closing twice is a state error.
  std::filesystem::path close(const std::string& id) {
    Live& live = get(id);
    std::lock_guard lock(live.mu);
    if (live.closed) throw StateError("session '" + id + "' is closed");
    finalize(live);
    return live.path;
  }

  // Closes every session past its time limit. Returns the ids closed.
  std::vector<std::string> expire() {
    const auto now = clock_();
    std::vector<std::string> out;
    std::shared_lock lock(mu_);
    for (auto& [id, live] : sessions_) {
      std::lock_guard g(live->mu);
      if (!live->closed && now - live->created_ms >= opts_.time_limit_ms) {
        finalize(*live);
        out.push_back(id);
      }
    }
    return out;
  }

  std::filesystem::path session_path(const std::string& id) { return get(id).path; }

  bool is_open(const std::string& id) {
    Live& live = get(id);
    std::lock_guard lock(live.mu);
    return !live.closed;
  }

  std::size_t open_sessions() {
    std::shared_lock lock(mu_);
    std::size_t n = 0;
    for (auto& [id, live] : sessions_) {
      std::lock_guard g(live->mu);
      n += live->closed ? 0 : 1;
    }
    return n;
  }

  ~LiveSessionManager() {
    for (auto& [id, live] : sessions_)
      if (!live->closed) try {
          finalize(*live);
        } catch (...) {
        }
  }

 private:
  struct Live {
    std::mutex mu;
    Session session;
    std::unique_ptr<SessionRunner> runner;
    std::unique_ptr<SessionWriter> writer;
    std::filesystem::path path;
    std::int64_t created_ms = 0;
    std::int64_t last_activity_ms = 0;
    bool closed = false;
    std::map<std::string, ActResult> replies;
  };

  Live& get(const std::string& id) {
    std::shared_lock lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw NotFoundError("unknown session '" + id + "'");
    return *it->second;
  }

  void ensure_open(Live& live, std::int64_t now) {
    if (live.closed) throw StateError("session '" + live.session.session_id + "' is closed");
    if (now - live.created_ms >= opts_.time_limit_ms) {
      finalize(live);
      throw StateError("session '" + live.session.session_id + "' reached its time limit");
    }
  }

  void finalize(Live& live) {
    if (!live.session.episodes.empty() && !live.session.episodes.back().finished())
      live.writer->episode_finished(live.session.episodes.back());
    crafterlab::close(live.session);
    live.writer->finish(live.session);
    live.closed = true;
  }

  Frame frame(const Live& live, std::int64_t now) const {
    const WorldState& s = live.runner->state();
    Frame f;
    f.session_id = live.session.session_id;
    f.episode = live.session.episodes.empty() ? 0 : live.session.episodes.back().episode_index;
    f.step = s.step_index;
    f.view_width = cfg_.view_width;
    f.view_height = cfg_.view_height;
    f.tiles = visible_window(cfg_, s);
    f.status = s.status;
    f.inventory = s.inventory;
    f.sleeping = s.sleeping;
    f.daylight = daylight(s.time_of_day, cfg_.daylight_exponent);
    f.game_over = s.episode_over;
    f.time_remaining_ms = std::max<std::int64_t>(0, opts_.time_limit_ms - (now - live.created_ms));
    return f;
  }

  WorldConfig cfg_;
  ServiceOptions opts_;
  Clock clock_;
  std::shared_mutex mu_;
  std::map<std::string, std::unique_ptr<Live>> sessions_;
  std::uint64_t counter_ = 0;
  std::random_device entropy_;
};

}  // namespace crafterlab
