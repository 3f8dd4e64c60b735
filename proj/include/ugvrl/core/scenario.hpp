#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "ugvrl/core/domain.hpp"
#include "ugvrl/core/errors.hpp"
#include "ugvrl/core/reward.hpp"

namespace ugvrl {

struct ScenarioConfig {
  Experiment experiment = Experiment::Exp1;
  long max_timesteps = 1800;
  long goal_step = 800;
  double attack_prob = 0.1;
  std::uint64_t seed = 0;
  RewardConfig rewards{};

  void validate() const {
    if (max_timesteps <= 0) throw ConfigError("max_timesteps must be positive");
    if (goal_step <= 0) throw ConfigError("goal_step must be positive");
    if (goal_step > max_timesteps) throw ConfigError("goal_step must not exceed max_timesteps");
    if (!(attack_prob >= 0.0 && attack_prob <= 1.0))
      throw ConfigError("attack_prob must lie in [0, 1]");
  }

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

inline void to_json(nlohmann::json& j, const RewardConfig& r) {
  j = {{"driving_base", r.driving_base},
       {"driving_donothing_bonus", r.driving_donothing_bonus},
       {"driving_wrong_action", r.driving_wrong_action},
       {"stationary_base", r.stationary_base},
       {"stationary_donothing_extra", r.stationary_donothing_extra},
       {"goal_bonus", r.goal_bonus},
       {"timeout_penalty", r.timeout_penalty}};
}

namespace detail {

template <class T>
void read_key(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

inline void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> known,
                           const char* where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [k, _] : j.items()) {
    bool ok = false;
    for (const char* n : known) ok = ok || k == n;
    if (!ok) throw ConfigError("unknown key '" + k + "' in " + where);
  }
}

}  // namespace detail

inline void from_json(const nlohmann::json& j, RewardConfig& r) {
  detail::reject_unknown(j,
                         {"driving_base", "driving_donothing_bonus", "driving_wrong_action",
                          "stationary_base", "stationary_donothing_extra", "goal_bonus",
                          "timeout_penalty"},
                         "rewards");
  detail::read_key(j, "driving_base", r.driving_base);
  detail::read_key(j, "driving_donothing_bonus", r.driving_donothing_bonus);
  detail::read_key(j, "driving_wrong_action", r.driving_wrong_action);
  detail::read_key(j, "stationary_base", r.stationary_base);
  detail::read_key(j, "stationary_donothing_extra", r.stationary_donothing_extra);
  detail::read_key(j, "goal_bonus", r.goal_bonus);
  detail::read_key(j, "timeout_penalty", r.timeout_penalty);
}

inline void to_json(nlohmann::json& j, const ScenarioConfig& c) {
  j = {{"experiment", std::string(to_string(c.experiment))},
       {"max_timesteps", c.max_timesteps},
       {"goal_step", c.goal_step},
       {"attack_prob", c.attack_prob},
       {"seed", c.seed},
       {"rewards", c.rewards}};
}

/// Reads the scenario keys from `j`. Keys absent from `j` keep their defaults;
/// `extra_keys` are tolerated (other sections of a shared config file).
inline ScenarioConfig scenario_from_json(const nlohmann::json& j,
                                         std::initializer_list<const char*> extra_keys = {}) {
  if (!j.is_object()) throw ConfigError("scenario config must be a JSON object");
  for (const auto& [k, _] : j.items()) {
    bool ok = k == "experiment" || k == "max_timesteps" || k == "goal_step" ||
              k == "attack_prob" || k == "seed" || k == "rewards";
    for (const char* e : extra_keys) ok = ok || k == e;
    if (!ok) throw ConfigError("unknown key '" + k + "' in scenario config");
  }
  ScenarioConfig c;
  if (j.contains("experiment")) {
    if (!j["experiment"].is_string()) throw ConfigError("experiment must be a string");
    c.experiment = parse_experiment(j["experiment"].get<std::string>());
  }
  detail::read_key(j, "max_timesteps", c.max_timesteps);
  detail::read_key(j, "goal_step", c.goal_step);
  detail::read_key(j, "attack_prob", c.attack_prob);
  detail::read_key(j, "seed", c.seed);
  if (j.contains("rewards")) c.rewards = j["rewards"].get<RewardConfig>();
  c.validate();
  return c;
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("cannot parse '" + path.string() + "': " + e.what());
  }
}

}  // namespace ugvrl
