#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "ugvrl/agents/policy.hpp"
#include "ugvrl/core/domain.hpp"
#include "ugvrl/core/random.hpp"
#include "ugvrl/core/reward.hpp"
#include "ugvrl/core/scenario.hpp"
#include "ugvrl/integrated/clock.hpp"
#include "ugvrl/integrated/vehicle.hpp"

namespace ugvrl {

struct IntegratedScenario {
  Experiment experiment = Experiment::Exp1;
  double max_time = 120.0;         // s
  double route_length = 100.0;     // m
  double speed = 2.0;              // m/s
  double min_attack_bound = 5.0;   // s
  double max_attack_bound = 10.0;  // s
  double clock_scale = 50.0;
  double control_period = 0.1;     // s of simulated time per agent decision
  std::uint64_t seed = 0;
  RewardConfig rewards{};

  void validate() const {
    if (!(max_time > 0.0)) throw ConfigError("max_time must be positive");
    if (!(route_length > 0.0) || !(speed > 0.0))
      throw ConfigError("route_length and speed must be positive");
    if (!(min_attack_bound > 0.0) || !(min_attack_bound <= max_attack_bound))
      throw ConfigError("attack bounds must satisfy 0 < min_attack_bound <= max_attack_bound");
    if (!(clock_scale >= 1.0)) throw ConfigError("clock_scale must be >= 1");
    if (!(control_period > 0.0)) throw ConfigError("control_period must be positive");
  }
};

inline void to_json(nlohmann::json& j, const IntegratedScenario& s) {
  j = {{"experiment", std::string(to_string(s.experiment))},
       {"max_time", s.max_time},
       {"route_length", s.route_length},
       {"speed", s.speed},
       {"min_attack_bound", s.min_attack_bound},
       {"max_attack_bound", s.max_attack_bound},
       {"clock_scale", s.clock_scale},
       {"control_period", s.control_period},
       {"seed", s.seed},
       {"rewards", s.rewards}};
}

inline IntegratedScenario integrated_from_json(const nlohmann::json& j) {
  detail::reject_unknown(j,
                         {"experiment", "max_time", "route_length", "speed", "min_attack_bound",
                          "max_attack_bound", "clock_scale", "control_period", "seed", "rewards"},
                         "integrated config");
  IntegratedScenario s;
  if (j.contains("experiment")) {
    if (!j["experiment"].is_string()) throw ConfigError("experiment must be a string");
    s.experiment = parse_experiment(j["experiment"].get<std::string>());
  }
  detail::read_key(j, "max_time", s.max_time);
  detail::read_key(j, "route_length", s.route_length);
  detail::read_key(j, "speed", s.speed);
  detail::read_key(j, "min_attack_bound", s.min_attack_bound);
  detail::read_key(j, "max_attack_bound", s.max_attack_bound);
  detail::read_key(j, "clock_scale", s.clock_scale);
  detail::read_key(j, "control_period", s.control_period);
  detail::read_key(j, "seed", s.seed);
  if (j.contains("rewards")) s.rewards = j["rewards"].get<RewardConfig>();
  s.validate();
  return s;
}

inline double schedule_next_attack(double now, double min_bound, double max_bound, Rng& rng) {
  if (!(min_bound <= max_bound)) throw ConfigError("min attack bound exceeds max attack bound");
  if (min_bound == max_bound) return now + min_bound;
  return now + std::uniform_real_distribution<double>(min_bound, max_bound)(rng);
}

/// Toggles a uniformly chosen component and announces its new state on its topic.
inline std::size_t inject_attack(Bus& bus, ComponentStateVector& components, Rng& rng,
                                 double now = 0.0) {
  if (components.size() == 0) throw DomainError("nothing to attack");
  const std::size_t i = std::uniform_int_distribution<std::size_t>(0, components.size() - 1)(rng);
  components.toggle(i);
  publish_component(bus, components, i, now);
  return i;
}

struct MissionEvent {
  double time = 0.0;
  std::string type;  // attack | action | control | tick | terminal
  nlohmann::json payload;
};

inline std::string to_jsonl(const MissionEvent& e) {
  return nlohmann::json{{"timestamp", e.time}, {"event_type", e.type}, {"payload", e.payload}}
      .dump();
}

struct MissionResult {
  bool success = false;
  double elapsed = 0.0;  // s
  long attacks_injected = 0;
  long responses = 0;  // non-DoNothing actions
  double total_reward = 0.0;
  double distance_remaining = 0.0;
  double following_time = 0.0;  // s spent in Following mode
  std::vector<double> attack_times;

  friend bool operator==(const MissionResult&, const MissionResult&) = default;
};

using MissionEventSink = std::function<void(const MissionEvent&)>;

/// Clock-driven mission with a trained policy in the loop.
///
/// Each control period: the vehicle node applies pending control messages, the
/// agent polls its component topics and the vehicle mode to form an observation,
/// its action goes through the bridge, the vehicle moves for one period, rewards
/// are booked, and any attack whose time has come is injected (the environment
/// then publishes Stop or FollowTrajectory to match the new component state).
/// Attack times are drawn from the scenario seed; the policy draws from a
/// separate child stream.
inline MissionResult run_mission(const Policy& policy, const IntegratedScenario& scenario,
                                 MissionClock& clock, const MissionEventSink& sink = {}) {
  scenario.validate();
  if (policy.experiment != scenario.experiment)
    throw ConfigError("policy was trained for " + std::string(to_string(policy.experiment)) +
                      " but the mission uses the " + std::string(to_string(scenario.experiment)) +
                      " component set");

  const auto specs = components_for(scenario.experiment);
  const ActionSpace actions(specs);
  auto emit = [&](double t, const char* type, nlohmann::json payload) {
    if (sink) sink({t, type, std::move(payload)});
  };

  Bus bus;
  std::vector<Bus::Subscription> agent_subs;
  for (const auto& spec : specs) agent_subs.push_back(bus.subscribe(component_topic(spec)));
  ComponentStateVector truth = ComponentStateVector::nominal(specs);
  ComponentStateVector agent_view = truth;

  VehicleNode vehicle(bus, VehicleSim{scenario.route_length, scenario.speed, DriveMode::Following});
  bus.publish(kControlTopic, ControlMessage{ControlCommand::FollowTrajectory, 0.0});
  emit(0.0, "control", {{"command", to_string(ControlCommand::FollowTrajectory)}});

  Rng attack_rng(scenario.seed);
  Rng policy_rng(derive_seed(scenario.seed, Stream::Exploration));
  double attack_time =
      schedule_next_attack(0.0, scenario.min_attack_bound, scenario.max_attack_bound, attack_rng);

  const double dt = scenario.control_period;
  MissionResult result;
  long period = 0;
  while (true) {
    const double now = static_cast<double>(period) * dt;

    vehicle.sync();
    for (auto& sub : agent_subs)
      for (const auto& m : sub.poll())
        if (const auto* c = std::get_if<ComponentMessage>(&m)) agent_view.set(c->component, c->state);
    const VehicleState seen = vehicle.sim().mode == DriveMode::Following ? VehicleState::Driving
                                                                          : VehicleState::Stationary;
    const std::size_t obs = encode_observation(agent_view, seen);
    const std::size_t action_id = policy(obs, policy_rng);
    const Action& action = actions[action_id];
    emit(now, "action", {{"obs_index", obs}, {"action_id", action_id},
                         {"action", describe(action, specs)}});

    bridge_action(action, truth, bus, now);
    if (!action.is_do_nothing()) {
      ++result.responses;
      emit(now, "control", {{"command", to_string(truth.is_nominal()
                                                      ? ControlCommand::FollowTrajectory
                                                      : ControlCommand::Stop)}});
    }

    vehicle.tick(dt);
    const bool moved = vehicle.sim().mode == DriveMode::Following;
    if (moved) result.following_time += dt;
    clock.advance(dt);
    ++period;
    const double later = static_cast<double>(period) * dt;
    emit(later, "tick", {{"distance_remaining", vehicle.sim().distance_remaining},
                         {"mode", moved ? "following" : "stopped"}});

    Terminal terminal = Terminal::None;
    if (vehicle.sim().distance_remaining <= 0.0) terminal = Terminal::Goal;
    else if (later >= scenario.max_time - 1e-9) terminal = Terminal::Timeout;
    const VehicleState booked = terminal == Terminal::Goal ? VehicleState::GoalReached
                                : moved                    ? VehicleState::Driving
                                                           : VehicleState::Stationary;
    result.total_reward += step_reward(booked, action, terminal, scenario.rewards);

    if (terminal != Terminal::None) {
      result.success = terminal == Terminal::Goal;
      result.elapsed = later;
      result.distance_remaining = vehicle.sim().distance_remaining;
      emit(later, "terminal", {{"success", result.success},
                               {"total_reward", result.total_reward},
                               {"attacks", result.attacks_injected},
                               {"responses", result.responses}});
      return result;
    }

    while (later >= attack_time) {
      const std::size_t hit = inject_attack(bus, truth, attack_rng, later);
      ++result.attacks_injected;
      result.attack_times.push_back(attack_time);
      const auto cmd = truth.is_nominal() ? ControlCommand::FollowTrajectory : ControlCommand::Stop;
      bus.publish(kControlTopic, ControlMessage{cmd, later});
      emit(later, "attack", {{"component", std::string(specs[hit].name)},
                             {"state", truth[hit] == Switch::On ? "ON" : "OFF"},
                             {"scheduled_at", attack_time}});
      emit(later, "control", {{"command", to_string(cmd)}});
      attack_time = schedule_next_attack(attack_time, scenario.min_attack_bound,
                                         scenario.max_attack_bound, attack_rng);
    }
  }
}

}  // namespace ugvrl
