#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "crafterlab/core/errors.hpp"
#include "crafterlab/core/hash.hpp"
#include "crafterlab/speech/prompts.hpp"
#include "crafterlab/speech/transcript.hpp"

namespace crafterlab {

enum class UtteranceKind { goal, question };

inline const char* kind_name(UtteranceKind k) { return k == UtteranceKind::goal ? "goal" : "question"; }

inline constexpr const char* kCredentialEnv = "CRAFTERLAB_LM_API_KEY";

struct ClassifierConfig {
  std::string endpoint;  // http(s)://host[:port]/path
  std::string model;
  std::string goal_prompt{kGoalPrompt};
  std::string question_prompt{kQuestionPrompt};
  int timeout_ms = 30000;
  int max_retries = 3;
  std::string cache_path;  // empty keeps the cache in memory
  std::size_t max_in_flight = 4;

  const std::string& prompt(UtteranceKind k) const { return k == UtteranceKind::goal ? goal_prompt : question_prompt; }
};

inline std::string build_prompt(std::string_view prompt, std::string_view utterance) {
  std::string out(prompt);
  out += ' ';
  out += utterance;
  out += " A:";
  return out;
}

// Label of the last Finish[0] or Finish[1] token in `response`.
inline std::optional<bool> parse_finish(std::string_view response) {
  const auto zero = response.rfind("Finish[0]");
  const auto one = response.rfind("Finish[1]");
  if (zero == std::string_view::npos && one == std::string_view::npos) return std::nullopt;
  if (zero == std::string_view::npos) return true;
  if (one == std::string_view::npos) return false;
  return one > zero;
}

// Text completion backend. Implementations must be safe to call from several
// threads at once.
class CompletionClient {
 public:
  virtual ~CompletionClient() = default;
  virtual std::string complete(const std::string& model, const std::string& prompt) = 0;
};

inline std::string cache_key(std::string_view model, std::string_view prompt, std::string_view utterance) {
  std::uint64_t h = fnv1a(model);
  h = fnv1a(std::string_view("\x1f", 1), h);
  h = fnv1a(prompt, h);
  h = fnv1a(std::string_view("\x1f", 1), h);
  h = fnv1a(utterance, h);
  return hex64(h);
}

// Responses keyed by cache_key, optionally persisted as JSON lines
// {"key": ..., "response": ...}. Lookups may run concurrently with one writer.
class ResponseCache {
 public:
  ResponseCache() = default;
  explicit ResponseCache(std::string path) : path_(std::move(path)) { load(); }

  std::optional<std::string> get(const std::string& key) const {
    std::shared_lock lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void put(const std::string& key, const std::string& response) {
    std::unique_lock lock(mu_);
    if (!entries_.emplace(key, response).second) return;
    if (path_.empty()) return;
    std::ofstream out(path_, std::ios::app | std::ios::binary);
    if (!out) throw InputError("cannot write cache '" + path_ + "'");
    out << nlohmann::json{{"key", key}, {"response", response}}.dump() << '\n';
  }

  std::size_t size() const {
    std::shared_lock lock(mu_);
    return entries_.size();
  }

 private:
  void load() {
    std::ifstream in(path_, std::ios::binary);
    if (!in) return;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      try {
        const auto j = nlohmann::json::parse(line);
        entries_[j.at("key").get<std::string>()] = j.at("response").get<std::string>();
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(line_no, "", std::string("cache '") + path_ + "': " + e.what());
      }
    }
  }

  std::string path_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::string> entries_;
};

struct Classification {
  std::optional<bool> label;  // empty when the response has no Finish token
  std::string rationale;
  bool from_cache = false;
};

class Classifier {
 public:
  Classifier(ClassifierConfig cfg, std::shared_ptr<CompletionClient> client)
      : cfg_(std::move(cfg)),
        client_(std::move(client)),
        cache_(cfg_.cache_path.empty() ? std::make_unique<ResponseCache>()
                                       : std::make_unique<ResponseCache>(cfg_.cache_path)) {}

  const ClassifierConfig& config() const { return cfg_; }
  std::size_t network_calls() const { return calls_.load(); }
  ResponseCache& cache() { return *cache_; }

  // Returns the label or throws IndeterminateError; transport failures
  // propagate from the client.
  Classification classify(const std::string& utterance, UtteranceKind kind) {
    auto c = lookup(utterance, kind);
    if (!c.label) throw IndeterminateError("no Finish[k] token in response for '" + utterance + "'");
    return c;
  }

  // Same as classify, but an indeterminate response is returned with an empty label.
  Classification lookup(const std::string& utterance, UtteranceKind kind) {
    if (trim(utterance).empty()) throw InputError("utterance is empty");
    const auto& prompt = cfg_.prompt(kind);
    const auto key = cache_key(cfg_.model, prompt, utterance);
    Classification c;
    if (auto hit = cache_->get(key)) {
      c.rationale = *hit;
      c.from_cache = true;
    } else {
      if (!client_) throw TransportError("no completion client configured and response not cached");
      ++calls_;
      c.rationale = client_->complete(cfg_.model, build_prompt(prompt, utterance));
      cache_->put(key, c.rationale);
    }
    c.label = parse_finish(c.rationale);
    return c;
  }

  // Classifies every utterance with at most max_in_flight requests at a time.
  // Results keep the input order.
  std::vector<Classification> classify_all(const std::vector<std::string>& utterances, UtteranceKind kind) {
    std::vector<Classification> out(utterances.size());
    std::vector<std::exception_ptr> errors(utterances.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i; (i = next++) < utterances.size();) {
        try {
          out[i] = lookup(utterances[i], kind);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    const std::size_t n = std::max<std::size_t>(1, std::min(cfg_.max_in_flight, utterances.size()));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    return out;
  }

 private:
  ClassifierConfig cfg_;
  std::shared_ptr<CompletionClient> client_;
  std::unique_ptr<ResponseCache> cache_;
  std::atomic<std::size_t> calls_{0};
};

}  // namespace crafterlab
