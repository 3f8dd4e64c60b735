#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "ugvrl/agents/selection.hpp"
#include "ugvrl/core/errors.hpp"
#include "ugvrl/core/random.hpp"
#include "ugvrl/env/simple_env.hpp"

namespace ugvrl {

/// Dense state x action table, zero-initialized, row-major.
class QTable {
 public:
  QTable() = default;
  QTable(std::size_t num_states, std::size_t num_actions)
      : states_(num_states), actions_(num_actions), values_(num_states * num_actions, 0.0) {}

  std::size_t num_states() const noexcept { return states_; }
  std::size_t num_actions() const noexcept { return actions_; }

  double& at(std::size_t s, std::size_t a) { return values_.at(s * actions_ + a); }
  double at(std::size_t s, std::size_t a) const { return values_.at(s * actions_ + a); }

  std::span<const double> row(std::size_t s) const {
    if (s >= states_) throw DomainError("state index out of range");
    return std::span<const double>(values_).subspan(s * actions_, actions_);
  }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  double max_row(std::size_t s) const {
    auto r = row(s);
    return *std::max_element(r.begin(), r.end());
  }

  friend bool operator==(const QTable&, const QTable&) = default;

 private:
  std::size_t states_ = 0;
  std::size_t actions_ = 0;
  std::vector<double> values_;
};

struct QLearningParams {
  double alpha = 0.1;
  double gamma = 0.9;
  double epsilon_initial = 0.9;
  double epsilon_final = 0.05;
  long episodes = 1000;

  void validate() const {
    auto unit = [](double v) { return v > 0.0 && v <= 1.0; };
    if (!unit(alpha) || !unit(gamma)) throw ConfigError("alpha and gamma must lie in (0, 1]");
    if (!(epsilon_initial >= 0.0 && epsilon_initial <= 1.0) ||
        !(epsilon_final >= 0.0 && epsilon_final <= 1.0))
      throw ConfigError("epsilons must lie in [0, 1]");
    if (epsilon_final > epsilon_initial)
      throw ConfigError("epsilon_final must not exceed epsilon_initial");
    if (episodes < 0) throw ConfigError("episodes must be non-negative");
  }

  /// Linear per-episode decay from epsilon_initial (first episode) to epsilon_final (last).
  double epsilon_at(long episode) const noexcept {
    if (episodes <= 1) return epsilon_initial;
    const double frac = std::clamp(static_cast<double>(episode) / static_cast<double>(episodes - 1),
                                   0.0, 1.0);
    return std::lerp(epsilon_initial, epsilon_final, frac);
  }
};

/// Tabular TD(0) control update. Only Q(s, a) changes.
inline void q_update(QTable& table, std::size_t s, std::size_t a, double r, std::size_t s_next,
                     bool done, double alpha, double gamma) {
  const double bootstrap = done ? 0.0 : gamma * table.max_row(s_next);
  double& q = table.at(s, a);
  q += alpha * (r + bootstrap - q);
}

inline void q_update(QTable& table, std::size_t s, std::size_t a, double r, std::size_t s_next,
                     bool done, const QLearningParams& p) {
  q_update(table, s, a, r, s_next, done, p.alpha, p.gamma);
}

/// How actions are chosen while training. Argmax always exploits the current
/// table (exploration only through tie-breaking among untried actions).
enum class QStrategy { EpsilonGreedy, Argmax };

struct EpisodeStats {
  double total_reward = 0.0;
  long timesteps = 0;
  bool reached_goal = false;
};

struct QTrainingResult {
  QTable table;
  std::vector<EpisodeStats> episodes;
};

/// Runs `params.episodes` episodes of on-line Q-learning in `env`.
/// Episode k resets the environment with derive_seed(seed, Episodes) child k.
inline QTrainingResult train_q(SimpleEnv& env, const QLearningParams& params, std::uint64_t seed,
                               QStrategy strategy = QStrategy::EpsilonGreedy) {
  params.validate();
  QTrainingResult out{QTable(env.num_observations(), env.num_actions()), {}};
  out.episodes.reserve(static_cast<std::size_t>(params.episodes));
  Rng explore(derive_seed(seed, Stream::Exploration));
  const auto episode_root = derive_seed(seed, Stream::Episodes);

  for (long ep = 0; ep < params.episodes; ++ep) {
    const double eps = strategy == QStrategy::EpsilonGreedy ? params.epsilon_at(ep) : 0.0;
    std::size_t s = env.reset(derive_seed(episode_root, static_cast<std::uint64_t>(ep))).index;
    EpisodeStats stats;
    while (true) {
      const std::size_t a = select_epsilon_greedy(out.table.row(s), eps, explore);
      const StepResult r = env.step(a);
      const bool done = r.terminated || r.truncated;
      q_update(out.table, s, a, r.reward, r.observation.index, done, params);
      stats.total_reward += r.reward;
      ++stats.timesteps;
      s = r.observation.index;
      if (done) {
        stats.reached_goal = r.terminated;
        break;
      }
    }
    out.episodes.push_back(stats);
  }
  return out;
}

inline QTrainingResult train_q(const ScenarioConfig& cfg, const QLearningParams& params,
                               std::uint64_t seed,
                               QStrategy strategy = QStrategy::EpsilonGreedy) {
  SimpleEnv env(cfg);
  return train_q(env, params, seed, strategy);
}

}  // namespace ugvrl
