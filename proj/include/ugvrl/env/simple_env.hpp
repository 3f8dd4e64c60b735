#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>

#include "ugvrl/core/domain.hpp"
#include "ugvrl/core/random.hpp"
#include "ugvrl/core/reward.hpp"
#include "ugvrl/core/scenario.hpp"

namespace ugvrl {

/// timestep -> index of the component attacked at that timestep.
using AttackSchedule = std::map<long, std::size_t>;

/// Independent per-timestep Bernoulli(attack_prob) draw; each hit picks a uniform component.
inline AttackSchedule make_attack_list(double attack_prob, long max_timesteps,
                                       std::size_t num_components, Rng& rng) {
  if (!(attack_prob >= 0.0 && attack_prob <= 1.0))
    throw ConfigError("attack_prob must lie in [0, 1]");
  AttackSchedule schedule;
  if (num_components == 0) return schedule;
  std::bernoulli_distribution hit(attack_prob);
  std::uniform_int_distribution<std::size_t> pick(0, num_components - 1);
  for (long t = 0; t < max_timesteps; ++t)
    if (hit(rng)) schedule.emplace(t, pick(rng));
  return schedule;
}

struct EnvState {
  long t = 0;
  long position = 0;
  ComponentStateVector components;
  VehicleState vehicle = VehicleState::Driving;
  AttackSchedule schedule;
};

/// Toggles one component. Nothing else in the state changes.
inline EnvState apply_attack(EnvState state, std::size_t component_index) {
  if (component_index >= state.components.size())
    throw DomainError("attack targets nonexistent component " + std::to_string(component_index));
  state.components.toggle(component_index);
  return state;
}

struct StepInfo {
  long t = 0;         // timestep after the step
  long position = 0;  // position after the step
  std::optional<std::size_t> attacked;  // component hit after this step, if any
};

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool terminated = false;
  bool truncated = false;
  StepInfo info;
};

/// One row of the per-step trace.
struct StepTrace {
  long step = 0;  // index within the episode
  long t = 0;     // timestep after the step
  std::size_t obs_index = 0;  // observation the action was chosen from
  std::size_t action_id = 0;
  double reward = 0.0;
  bool terminated = false;
  bool truncated = false;
};

/// The fast discrete training environment.
///
/// Step order: apply the action, re-derive the vehicle state, advance one
/// position unit if driving, detect goal/timeout, compute the reward, advance
/// time, then apply any attack scheduled for the new timestep (skipped once the
/// episode has ended). The returned observation reflects the post-attack
/// components with the vehicle state re-derived from them.
class SimpleEnv {
 public:
  explicit SimpleEnv(ScenarioConfig cfg)
      : cfg_((cfg.validate(), cfg)), specs_(components_for(cfg_.experiment)), actions_(specs_) {}

  const ScenarioConfig& config() const noexcept { return cfg_; }
  const ActionSpace& action_space() const noexcept { return actions_; }
  std::size_t num_actions() const noexcept { return actions_.size(); }
  std::size_t num_observations() const noexcept { return ugvrl::num_observations(specs_.size()); }
  const EnvState& state() const noexcept { return state_; }
  bool episode_over() const noexcept { return done_; }

  /// Replays `schedule` on every subsequent reset instead of drawing a fresh one.
  void pin_schedule(AttackSchedule schedule) { pinned_ = std::move(schedule); }
  void unpin_schedule() { pinned_.reset(); }

  void set_trace(std::function<void(const StepTrace&)> sink) { trace_ = std::move(sink); }

  Observation reset(std::uint64_t seed) {
    rng_.seed(seed);
    state_ = EnvState{};
    state_.components = ComponentStateVector::nominal(specs_);
    state_.vehicle = VehicleState::Driving;
    if (pinned_) {
      for (const auto& [t, c] : *pinned_)
        if (t < 0 || t >= cfg_.max_timesteps || c >= specs_.size())
          throw ConfigError("pinned attack schedule has out-of-range entries");
      state_.schedule = *pinned_;
    } else {
      state_.schedule = make_attack_list(cfg_.attack_prob, cfg_.max_timesteps, specs_.size(), rng_);
    }
    done_ = false;
    step_index_ = 0;
    return observe();
  }
  Observation reset() { return reset(cfg_.seed); }

  StepResult step(std::size_t action_id) { return step_impl(actions_[action_id], action_id); }

  StepResult step(const Action& action) {
    const auto id = actions_.id_of(action);
    if (!id) throw DomainError("'" + describe(action, specs_) + "' is not in this action space");
    return step_impl(action, *id);
  }

  Observation observe() const { return make_observation(state_.components, state_.vehicle); }

 private:
  StepResult step_impl(const Action& action, std::size_t action_id) {
    if (done_) throw DomainError("step() called after the episode ended; call reset()");
    const std::size_t obs_before = encode_observation(state_.components, state_.vehicle);

    apply_action(state_.components, action);
    const VehicleState moved = derive_vehicle_state(state_.components, state_.position,
                                                    cfg_.goal_step, state_.vehicle);
    state_.vehicle = moved;
    if (moved == VehicleState::Driving) ++state_.position;

    StepResult out;
    Terminal terminal = Terminal::None;
    if (state_.position >= cfg_.goal_step) {
      state_.vehicle = VehicleState::GoalReached;
      out.terminated = true;
      terminal = Terminal::Goal;
    }
    ++state_.t;
    if (!out.terminated && state_.t >= cfg_.max_timesteps) {
      out.truncated = true;
      terminal = Terminal::Timeout;
    }
    out.reward = step_reward(state_.vehicle, action, terminal, cfg_.rewards);
    done_ = out.terminated || out.truncated;

    if (!done_) {
      if (auto it = state_.schedule.find(state_.t); it != state_.schedule.end()) {
        state_ = apply_attack(std::move(state_), it->second);
        state_.vehicle = derive_vehicle_state(state_.components, state_.position, cfg_.goal_step,
                                              state_.vehicle);
        out.info.attacked = it->second;
      }
    }

    out.info.t = state_.t;
    out.info.position = state_.position;
    out.observation = observe();
    if (trace_)
      trace_({step_index_, state_.t, obs_before, action_id, out.reward, out.terminated,
              out.truncated});
    ++step_index_;
    return out;
  }

  ScenarioConfig cfg_;
  std::span<const ComponentSpec> specs_;
  ActionSpace actions_;
  EnvState state_;
  Rng rng_;
  std::optional<AttackSchedule> pinned_;
  std::function<void(const StepTrace&)> trace_;
  bool done_ = true;
  long step_index_ = 0;
};

}  // namespace ugvrl
