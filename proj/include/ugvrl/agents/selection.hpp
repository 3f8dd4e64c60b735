#pragma once

#include <cstddef>
#include <random>
#include <span>

#include "ugvrl/core/errors.hpp"
#include "ugvrl/core/random.hpp"

namespace ugvrl {

/// Index of the largest value; ties go to the lowest index.
template <class T>
std::size_t argmax(std::span<const T> values) {
  if (values.empty()) throw DomainError("argmax over an empty row");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

inline std::size_t select_random(std::size_t num_actions, Rng& rng) {
  if (num_actions == 0) throw DomainError("empty action space");
  return std::uniform_int_distribution<std::size_t>(0, num_actions - 1)(rng);
}

/// Uniform random action with probability epsilon, otherwise argmax.
/// The exploration coin is only drawn when 0 < epsilon < 1.
template <class T>
std::size_t select_epsilon_greedy(std::span<const T> q_row, double epsilon, Rng& rng) {
  if (epsilon >= 1.0) return select_random(q_row.size(), rng);
  if (epsilon > 0.0 && std::uniform_real_distribution<double>(0.0, 1.0)(rng) < epsilon)
    return select_random(q_row.size(), rng);
  return argmax(q_row);
}

}  // namespace ugvrl
