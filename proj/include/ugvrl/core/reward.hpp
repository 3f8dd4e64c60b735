#pragma once

#include "ugvrl/core/domain.hpp"

namespace ugvrl {

struct RewardConfig {
  double driving_base = 1.0;
  double driving_donothing_bonus = 1.0;
  double driving_wrong_action = -10.0;
  double stationary_base = -1.0;
  double stationary_donothing_extra = -1.0;
  double goal_bonus = 50.0;
  double timeout_penalty = -10.0;

  friend bool operator==(const RewardConfig&, const RewardConfig&) = default;
};

enum class Terminal { None, Goal, Timeout };

/// Per-step reward: a state term plus terminal bonuses, summed.
///
/// A step that ends at the goal was spent driving, so GoalReached takes the
/// Driving state term before the goal bonus is added.
inline double step_reward(VehicleState vehicle, const Action& action, Terminal terminal,
                          const RewardConfig& cfg) {
  if (terminal == Terminal::Goal && vehicle != VehicleState::GoalReached)
    throw DomainError("goal terminal requires the GoalReached vehicle state");
  double r = 0.0;
  if (vehicle == VehicleState::Stationary) {
    r += cfg.stationary_base;
    if (action.is_do_nothing()) r += cfg.stationary_donothing_extra;
  } else {
    r += cfg.driving_base;
    r += action.is_do_nothing() ? cfg.driving_donothing_bonus : cfg.driving_wrong_action;
  }
  if (terminal == Terminal::Goal) r += cfg.goal_bonus;
  if (terminal == Terminal::Timeout) r += cfg.timeout_penalty;
  return r;
}

}  // namespace ugvrl
