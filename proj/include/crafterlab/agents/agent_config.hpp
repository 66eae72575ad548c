#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "crafterlab/core/errors.hpp"
#include "crafterlab/world/config.hpp"

namespace crafterlab {

enum class AgentKind { kRandom, kExtrinsic, kNovelty, kEntropyGain };

inline std::string_view agent_kind_name(AgentKind k) {
  switch (k) {
    case AgentKind::kRandom: return "random";
    case AgentKind::kExtrinsic: return "extrinsic";
    case AgentKind::kNovelty: return "novelty";
    case AgentKind::kEntropyGain: return "entropy_gain";
  }
  return "random";
}

inline std::optional<AgentKind> agent_kind_from_name(std::string_view name) {
  for (auto k : {AgentKind::kRandom, AgentKind::kExtrinsic, AgentKind::kNovelty, AgentKind::kEntropyGain})
    if (agent_kind_name(k) == name) return k;
  return std::nullopt;
}

struct AgentConfig {
  AgentKind kind = AgentKind::kRandom;
  double epsilon_start = 1.0;
  double epsilon_end = 0.01;
  std::int64_t epsilon_decay_steps = 25'000;
  double learning_rate = 0.1;
  double discount = 0.95;
  std::int64_t total_steps = 200'000;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13};
  double noop_probability = 0.475;
  double novelty_alpha = 0.5;
};

inline void validate(const AgentConfig& c) {
  if (!(c.epsilon_end >= 0.0)) throw ConfigError("epsilon_end", "must be >= 0");
  if (!(c.epsilon_start <= 1.0)) throw ConfigError("epsilon_start", "must be <= 1");
  if (!(c.epsilon_end <= c.epsilon_start)) throw ConfigError("epsilon_end", "must be <= epsilon_start");
  if (c.epsilon_decay_steps < 0) throw ConfigError("epsilon_decay_steps", "must be >= 0");
  if (!(c.noop_probability >= 0.0 && c.noop_probability <= 1.0))
    throw ConfigError("noop_probability", "must lie in [0, 1]");
  if (!(c.learning_rate > 0.0 && c.learning_rate <= 1.0)) throw ConfigError("learning_rate", "must lie in (0, 1]");
  if (!(c.discount >= 0.0 && c.discount <= 1.0)) throw ConfigError("discount", "must lie in [0, 1]");
  if (c.total_steps < 0) throw ConfigError("total_steps", "must be >= 0");
  if (c.seeds.empty()) throw ConfigError("seeds", "must list at least one seed");
  if (!(c.novelty_alpha >= 0.0)) throw ConfigError("novelty_alpha", "must be >= 0");
}

inline AgentConfig parse_agent_config(std::string_view text) {
  using nlohmann::json;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed config: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("<root>", "expected an object");
  detail::reject_unknown(root, "",
                         {"kind", "epsilon_start", "epsilon_end", "epsilon_decay_steps", "learning_rate",
                          "discount", "total_steps", "seeds", "noop_probability", "novelty_alpha"});
  AgentConfig c;
  if (auto it = root.find("kind"); it != root.end()) {
    if (!it->is_string()) throw ConfigError("kind", "expected a string");
    auto k = agent_kind_from_name(it->get<std::string>());
    if (!k) throw ConfigError("kind", "unknown agent kind '" + it->get<std::string>() +
                                           "' (random, extrinsic, novelty, entropy_gain)");
    c.kind = *k;
  }
  detail::read(root, "epsilon_start", "", c.epsilon_start);
  detail::read(root, "epsilon_end", "", c.epsilon_end);
  detail::read(root, "epsilon_decay_steps", "", c.epsilon_decay_steps);
  detail::read(root, "learning_rate", "", c.learning_rate);
  detail::read(root, "discount", "", c.discount);
  detail::read(root, "total_steps", "", c.total_steps);
  detail::read(root, "noop_probability", "", c.noop_probability);
  detail::read(root, "novelty_alpha", "", c.novelty_alpha);
  if (auto it = root.find("seeds"); it != root.end()) {
    if (!it->is_array()) throw ConfigError("seeds", "expected a list of integers");
    c.seeds.clear();
    for (const auto& s : *it) {
      if (!s.is_number_unsigned()) throw ConfigError("seeds", "expected non-negative integers");
      c.seeds.push_back(s.get<std::uint64_t>());
    }
  }
  validate(c);
  return c;
}

inline AgentConfig load_agent_config(const std::string& path) { return parse_agent_config(read_file(path)); }

}  // namespace crafterlab
