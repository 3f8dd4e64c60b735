#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ugvrl/agents/mlp.hpp"
#include "ugvrl/agents/qlearning.hpp"
#include "ugvrl/agents/replay_buffer.hpp"
#include "ugvrl/agents/selection.hpp"
#include "ugvrl/env/simple_env.hpp"

namespace ugvrl {

struct DqnParams {
  double gamma = 0.9;
  double learning_rate = 1e-3;
  std::size_t batch_size = 64;
  std::size_t buffer_capacity = 50'000;
  long target_sync_interval = 1'000;
  long train_freq = 4;
  long learning_starts = 1'000;
  long total_timesteps = 1'800'000;
  double epsilon_initial = 1.0;
  double epsilon_final = 0.05;
  double exploration_fraction = 0.1;
  std::size_t hidden = 64;
  double divergence_limit = 1e6;

  void validate() const {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("dqn gamma must lie in (0, 1]");
    if (!(learning_rate > 0.0)) throw ConfigError("dqn learning_rate must be positive");
    if (batch_size == 0 || buffer_capacity == 0 || hidden == 0)
      throw ConfigError("dqn batch_size, buffer_capacity and hidden must be positive");
    if (target_sync_interval <= 0 || train_freq <= 0 || learning_starts < 0 || total_timesteps < 0)
      throw ConfigError("dqn intervals must be positive");
    if (!(exploration_fraction > 0.0 && exploration_fraction <= 1.0))
      throw ConfigError("dqn exploration_fraction must lie in (0, 1]");
    if (epsilon_final > epsilon_initial || epsilon_final < 0.0 || epsilon_initial > 1.0)
      throw ConfigError("dqn epsilons must satisfy 0 <= final <= initial <= 1");
  }

  /// Linear decay over the first exploration_fraction of training, then constant.
  double epsilon_at(long step) const noexcept {
    const double horizon = exploration_fraction * static_cast<double>(total_timesteps);
    if (horizon <= 0.0) return epsilon_final;
    const double frac = std::min(1.0, static_cast<double>(step) / horizon);
    return std::lerp(epsilon_initial, epsilon_final, frac);
  }
};

/// r + gamma * max_a' target(s', a'), cut to r on terminal transitions.
inline TdBatch dqn_targets(const Mlp& target, const std::vector<Transition>& transitions,
                           double gamma) {
  TdBatch b;
  b.inputs.reserve(transitions.size());
  b.actions.reserve(transitions.size());
  b.targets.reserve(transitions.size());
  for (const auto& t : transitions) {
    double y = t.reward;
    if (!t.done) {
      const auto q = target.forward_one_hot(t.next_obs);
      y += gamma * *std::max_element(q.begin(), q.end());
    }
    b.inputs.push_back(t.obs);
    b.actions.push_back(t.action);
    b.targets.push_back(y);
  }
  return b;
}

/// Online/target network pair with replay memory.
class DqnLearner {
 public:
  DqnLearner(std::size_t num_states, std::size_t num_actions, const DqnParams& params,
             std::uint64_t seed)
      : params_((params.validate(), params)),
        online_(Mlp::for_q_values(num_states, num_actions, params.hidden)),
        buffer_(params.buffer_capacity),
        adam_(params.learning_rate),
        rng_(derive_seed(seed, Stream::Replay)) {
    Rng init(derive_seed(seed, Stream::Init));
    online_.initialize(init);
    target_ = online_;
  }

  const Mlp& online() const noexcept { return online_; }
  const Mlp& target() const noexcept { return target_; }
  const ReplayBuffer& buffer() const noexcept { return buffer_; }
  long gradient_steps() const noexcept { return gradient_steps_; }
  double running_abs_q() const noexcept { return running_abs_q_; }

  std::size_t act(std::size_t obs, double epsilon, Rng& rng) const {
    const auto q = online_.forward_one_hot(obs);
    return select_epsilon_greedy(std::span<const double>(q), epsilon, rng);
  }

  void remember(const Transition& t) { buffer_.push(t); }

  void sync_target() { target_ = online_; }

  /// Samples a batch, regresses the online net onto target-net TD targets. Returns the loss.
  double train_step() {
    const auto sample = buffer_.sample(params_.batch_size, rng_);
    const TdBatch batch = dqn_targets(target_, sample, params_.gamma);
    const double loss = online_.gradient(batch, grad_);
    if (!std::isfinite(loss)) throw NumericError("DQN loss became non-finite");
    adam_.step(online_.parameters(), grad_);
    ++gradient_steps_;
    if (!online_.all_finite()) throw NumericError("DQN weights became non-finite");

    double mean_abs = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i)
      mean_abs += std::abs(online_.forward_one_hot(batch.inputs[i])[batch.actions[i]]);
    mean_abs /= static_cast<double>(batch.size());
    running_abs_q_ = gradient_steps_ == 1 ? mean_abs : 0.99 * running_abs_q_ + 0.01 * mean_abs;
    if (!(running_abs_q_ <= params_.divergence_limit))
      throw NumericError("DQN diverged: running mean |Q| = " + std::to_string(running_abs_q_) +
                         " after " + std::to_string(gradient_steps_) + " gradient steps");
    return loss;
  }

 private:
  DqnParams params_;
  Mlp online_;
  Mlp target_;
  ReplayBuffer buffer_;
  Adam adam_;
  Rng rng_;
  std::vector<double> grad_;
  long gradient_steps_ = 0;
  double running_abs_q_ = 0.0;
};

struct DqnTrainingResult {
  Mlp network;
  std::vector<EpisodeStats> episodes;  // completed episodes only
  long gradient_steps = 0;
};

/// Standard DQN loop over a fixed budget of environment steps.
inline DqnTrainingResult dqn_train(SimpleEnv& env, const DqnParams& params, std::uint64_t seed) {
  DqnLearner learner(env.num_observations(), env.num_actions(), params, seed);
  Rng explore(derive_seed(seed, Stream::Exploration));
  const auto episode_root = derive_seed(seed, Stream::Episodes);

  DqnTrainingResult out;
  std::uint64_t episode = 0;
  std::size_t obs = env.reset(derive_seed(episode_root, episode)).index;
  EpisodeStats stats;
  for (long step = 0; step < params.total_timesteps; ++step) {
    const std::size_t a = learner.act(obs, params.epsilon_at(step), explore);
    const StepResult r = env.step(a);
    const bool done = r.terminated || r.truncated;
    learner.remember({obs, a, r.reward, r.observation.index, done});
    stats.total_reward += r.reward;
    ++stats.timesteps;
    obs = r.observation.index;
    if (done) {
      stats.reached_goal = r.terminated;
      out.episodes.push_back(stats);
      stats = {};
      obs = env.reset(derive_seed(episode_root, ++episode)).index;
    }
    const long n = step + 1;
    if (n >= params.learning_starts && n % params.train_freq == 0) learner.train_step();
    if (n % params.target_sync_interval == 0) learner.sync_target();
  }
  out.network = learner.online();
  out.gradient_steps = learner.gradient_steps();
  return out;
}

inline DqnTrainingResult dqn_train(const ScenarioConfig& cfg, const DqnParams& params,
                                   std::uint64_t seed) {
  SimpleEnv env(cfg);
  return dqn_train(env, params, seed);
}

}  // namespace ugvrl
