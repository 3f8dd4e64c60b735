#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ugvrl/core/errors.hpp"

namespace ugvrl {

enum class Experiment { Exp1, Exp2 };

enum class ComponentKind { Toggleable, Publishable };

enum class Switch : std::uint8_t { Off = 0, On = 1 };

constexpr Switch flip(Switch s) noexcept { return s == Switch::On ? Switch::Off : Switch::On; }

struct ComponentSpec {
  std::string_view name;
  ComponentKind kind;
  Switch nominal;
};

namespace detail {
// Experiment 1 uses the first three entries; Experiment 2 uses all six.
inline constexpr std::array<ComponentSpec, 6> kComponentTable{{
    {"Force Brake", ComponentKind::Toggleable, Switch::Off},
    {"Generator", ComponentKind::Toggleable, Switch::On},
    {"High-voltage system", ComponentKind::Toggleable, Switch::On},
    {"Heading", ComponentKind::Publishable, Switch::On},
    {"Noise", ComponentKind::Publishable, Switch::On},
    {"Trajectory", ComponentKind::Publishable, Switch::On},
}};
}  // namespace detail

/// Component list for an experiment, in fixed table order. Backed by static storage.
constexpr std::span<const ComponentSpec> components_for(Experiment e) noexcept {
  return std::span<const ComponentSpec>(detail::kComponentTable)
      .first(e == Experiment::Exp1 ? 3 : 6);
}

constexpr std::string_view to_string(Experiment e) noexcept {
  return e == Experiment::Exp1 ? "Exp1" : "Exp2";
}

inline Experiment parse_experiment(std::string_view s) {
  if (s == "Exp1") return Experiment::Exp1;
  if (s == "Exp2") return Experiment::Exp2;
  throw ConfigError("unknown experiment '" + std::string(s) + "' (expected Exp1 or Exp2)");
}

class ComponentStateVector {
 public:
  ComponentStateVector() = default;
  ComponentStateVector(std::span<const ComponentSpec> specs, std::vector<Switch> states)
      : specs_(specs), states_(std::move(states)) {
    if (states_.size() != specs_.size())
      throw DomainError("component state vector length does not match component count");
  }

  static ComponentStateVector nominal(std::span<const ComponentSpec> specs) {
    std::vector<Switch> s;
    s.reserve(specs.size());
    for (const auto& c : specs) s.push_back(c.nominal);
    return {specs, std::move(s)};
  }

  std::size_t size() const noexcept { return states_.size(); }
  std::span<const ComponentSpec> specs() const noexcept { return specs_; }
  Switch operator[](std::size_t i) const { return states_.at(i); }
  void set(std::size_t i, Switch s) { states_.at(i) = s; }
  void toggle(std::size_t i) { states_.at(i) = flip(states_.at(i)); }

  bool is_nominal(std::size_t i) const { return states_.at(i) == specs_[i].nominal; }
  bool is_nominal() const noexcept {
    for (std::size_t i = 0; i < states_.size(); ++i)
      if (states_[i] != specs_[i].nominal) return false;
    return true;
  }

  /// Bit i set iff component i is ON.
  std::uint32_t bits() const noexcept {
    std::uint32_t b = 0;
    for (std::size_t i = 0; i < states_.size(); ++i)
      if (states_[i] == Switch::On) b |= (1u << i);
    return b;
  }

  friend bool operator==(const ComponentStateVector& a, const ComponentStateVector& b) noexcept {
    return a.specs_.data() == b.specs_.data() && a.specs_.size() == b.specs_.size() &&
           a.states_ == b.states_;
  }

 private:
  std::span<const ComponentSpec> specs_;
  std::vector<Switch> states_;
};

enum class VehicleState : std::uint8_t { Stationary = 0, Driving = 1, GoalReached = 2 };

constexpr std::string_view to_string(VehicleState v) noexcept {
  switch (v) {
    case VehicleState::Stationary: return "Stationary";
    case VehicleState::Driving: return "Driving";
    case VehicleState::GoalReached: return "Goal reached";
  }
  return "?";
}

/// Any non-nominal component halts the vehicle; reaching the goal is absorbing.
inline VehicleState derive_vehicle_state(const ComponentStateVector& components, long position,
                                         long goal_step, VehicleState prev) {
  if (position < 0) throw DomainError("position must be non-negative");
  if (prev == VehicleState::GoalReached || position >= goal_step) return VehicleState::GoalReached;
  return components.is_nominal() ? VehicleState::Driving : VehicleState::Stationary;
}

// ---------------------------------------------------------------------------
// Actions

enum class ActionKind : std::uint8_t { DoNothing, TurnOn, TurnOff, PublishCorrect };

struct Action {
  ActionKind kind = ActionKind::DoNothing;
  std::size_t target = 0;  // ignored for DoNothing

  static constexpr Action do_nothing() noexcept { return {}; }
  static constexpr Action turn_on(std::size_t i) noexcept { return {ActionKind::TurnOn, i}; }
  static constexpr Action turn_off(std::size_t i) noexcept { return {ActionKind::TurnOff, i}; }
  static constexpr Action publish_correct(std::size_t i) noexcept {
    return {ActionKind::PublishCorrect, i};
  }

  bool is_do_nothing() const noexcept { return kind == ActionKind::DoNothing; }

  friend bool operator==(const Action& a, const Action& b) noexcept {
    return a.kind == b.kind && (a.kind == ActionKind::DoNothing || a.target == b.target);
  }
};

inline std::string describe(const Action& a, std::span<const ComponentSpec> specs) {
  auto name = [&] {
    return a.target < specs.size() ? std::string(specs[a.target].name) : std::string("<invalid>");
  };
  switch (a.kind) {
    case ActionKind::DoNothing: return "Do nothing";
    case ActionKind::TurnOn: return "Turn on " + name();
    case ActionKind::TurnOff: return "Turn off " + name();
    case ActionKind::PublishCorrect: return "Publish correct " + name();
  }
  return "?";
}

/// Applies an action to the component vector. Targets are validated against component kind.
inline void apply_action(ComponentStateVector& components, const Action& a) {
  if (a.kind == ActionKind::DoNothing) return;
  if (a.target >= components.size())
    throw DomainError("action targets component " + std::to_string(a.target) +
                      " but only " + std::to_string(components.size()) + " exist");
  const auto kind = components.specs()[a.target].kind;
  const bool publish = a.kind == ActionKind::PublishCorrect;
  if (publish != (kind == ComponentKind::Publishable))
    throw DomainError("'" + describe(a, components.specs()) + "' is not valid for that component");
  components.set(a.target, a.kind == ActionKind::TurnOff ? Switch::Off : Switch::On);
}

/// Enumerated action space: DoNothing, TurnOn(each toggleable), TurnOff(each toggleable),
/// PublishCorrect(each publishable). Action ids are positions in this list.
class ActionSpace {
 public:
  explicit ActionSpace(std::span<const ComponentSpec> specs) : specs_(specs) {
    actions_.push_back(Action::do_nothing());
    for (std::size_t i = 0; i < specs.size(); ++i)
      if (specs[i].kind == ComponentKind::Toggleable) actions_.push_back(Action::turn_on(i));
    for (std::size_t i = 0; i < specs.size(); ++i)
      if (specs[i].kind == ComponentKind::Toggleable) actions_.push_back(Action::turn_off(i));
    for (std::size_t i = 0; i < specs.size(); ++i)
      if (specs[i].kind == ComponentKind::Publishable)
        actions_.push_back(Action::publish_correct(i));
  }
  explicit ActionSpace(Experiment e) : ActionSpace(components_for(e)) {}

  std::size_t size() const noexcept { return actions_.size(); }
  const Action& operator[](std::size_t id) const {
    if (id >= actions_.size()) throw DomainError("action id " + std::to_string(id) + " out of range");
    return actions_[id];
  }
  std::span<const Action> actions() const noexcept { return actions_; }
  std::span<const ComponentSpec> specs() const noexcept { return specs_; }

  std::optional<std::size_t> id_of(const Action& a) const noexcept {
    for (std::size_t i = 0; i < actions_.size(); ++i)
      if (actions_[i] == a) return i;
    return std::nullopt;
  }

 private:
  std::span<const ComponentSpec> specs_;
  std::vector<Action> actions_;
};

/// The single action that returns compromised component i to its nominal state.
inline Action restoring_action(std::span<const ComponentSpec> specs, std::size_t i) {
  const auto& c = specs[i];
  if (c.kind == ComponentKind::Publishable) return Action::publish_correct(i);
  return c.nominal == Switch::On ? Action::turn_on(i) : Action::turn_off(i);
}

// ---------------------------------------------------------------------------
// Observation encoding: index = vehicle * 2^k + bits, bijective onto [0, 3 * 2^k).

struct Observation {
  ComponentStateVector components;
  VehicleState vehicle = VehicleState::Driving;
  std::size_t index = 0;
};

constexpr std::size_t num_observations(std::size_t component_count) noexcept {
  return 3u * (std::size_t{1} << component_count);
}
inline std::size_t num_observations(Experiment e) { return num_observations(components_for(e).size()); }

inline std::size_t encode_observation(const ComponentStateVector& components, VehicleState vehicle) {
  const std::size_t k = components.size();
  return static_cast<std::size_t>(vehicle) * (std::size_t{1} << k) + components.bits();
}

inline Observation make_observation(ComponentStateVector components, VehicleState vehicle) {
  const auto idx = encode_observation(components, vehicle);
  return {std::move(components), vehicle, idx};
}

inline Observation decode_observation(std::span<const ComponentSpec> specs, std::size_t index) {
  const std::size_t k = specs.size();
  if (index >= num_observations(k))
    throw DomainError("observation index " + std::to_string(index) + " out of range");
  const std::size_t span = std::size_t{1} << k;
  std::vector<Switch> s(k);
  for (std::size_t i = 0; i < k; ++i) s[i] = ((index % span) >> i) & 1u ? Switch::On : Switch::Off;
  return {ComponentStateVector(specs, std::move(s)), static_cast<VehicleState>(index / span), index};
}

}  // namespace ugvrl
