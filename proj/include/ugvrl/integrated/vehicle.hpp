#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <variant>

#include "ugvrl/core/domain.hpp"
#include "ugvrl/core/errors.hpp"
#include "ugvrl/integrated/topic_bus.hpp"

namespace ugvrl {

enum class ControlCommand { Stop, FollowTrajectory };

constexpr const char* to_string(ControlCommand c) noexcept {
  return c == ControlCommand::Stop ? "stop" : "follow_trajectory";
}

struct ControlMessage {
  ControlCommand command = ControlCommand::Stop;
  double timestamp = 0.0;
};

/// New state of one component, as seen on that component's topic.
struct ComponentMessage {
  std::size_t component = 0;
  Switch state = Switch::Off;
  double timestamp = 0.0;
};

using BusMessage = std::variant<ControlMessage, ComponentMessage>;
using Bus = TopicBus<BusMessage>;

inline const std::string kControlTopic = "control";

/// "components/force_brake" style topic name for a component.
inline std::string component_topic(const ComponentSpec& spec) {
  std::string slug;
  for (char c : spec.name) {
    if (c == ' ' || c == '-') slug += '_';
    else slug += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return "components/" + slug;
}

enum class DriveMode { Stopped, Following };

struct VehicleSim {
  double distance_remaining = 0.0;  // m
  double speed = 0.0;               // m/s while following
  DriveMode mode = DriveMode::Following;
};

/// Remaining distances at or below this are treated as arrival.
inline constexpr double kArrivalTolerance = 1e-9;

inline VehicleSim tick(VehicleSim v, double dt) {
  if (!(dt > 0.0)) throw DomainError("tick requires dt > 0");
  if (v.mode == DriveMode::Following) {
    v.distance_remaining = std::max(0.0, v.distance_remaining - v.speed * dt);
    if (v.distance_remaining <= kArrivalTolerance) v.distance_remaining = 0.0;
  }
  return v;
}

/// The simulator side of the bus: obeys the most recent control message.
class VehicleNode {
 public:
  VehicleNode(Bus& bus, VehicleSim initial)
      : sim_(initial), control_(bus.subscribe(kControlTopic)) {}

  /// Applies pending control messages in order; the last one wins.
  void sync() {
    for (const auto& m : control_.poll())
      if (const auto* c = std::get_if<ControlMessage>(&m))
        sim_.mode = c->command == ControlCommand::Stop ? DriveMode::Stopped : DriveMode::Following;
  }

  void tick(double dt) {
    sync();
    sim_ = ugvrl::tick(sim_, dt);
  }

  const VehicleSim& sim() const noexcept { return sim_; }

 private:
  VehicleSim sim_;
  Bus::Subscription control_;
};

inline void publish_component(Bus& bus, const ComponentStateVector& components, std::size_t i,
                              double now) {
  bus.publish(component_topic(components.specs()[i]), ComponentMessage{i, components[i], now});
}

/// Applies the agent's action to the component model and tells the vehicle to
/// follow its trajectory (all components nominal) or stop. DoNothing publishes nothing.
inline void bridge_action(const Action& action, ComponentStateVector& components, Bus& bus,
                          double now) {
  if (action.is_do_nothing()) return;
  apply_action(components, action);
  publish_component(bus, components, action.target, now);
  bus.publish(kControlTopic,
              ControlMessage{components.is_nominal() ? ControlCommand::FollowTrajectory
                                                     : ControlCommand::Stop,
                             now});
}

}  // namespace ugvrl
