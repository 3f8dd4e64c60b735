#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "ugvrl/agents/mlp.hpp"
#include "ugvrl/agents/qlearning.hpp"
#include "ugvrl/agents/selection.hpp"
#include "ugvrl/core/domain.hpp"
#include "ugvrl/env/simple_env.hpp"

namespace ugvrl {

/// Maps an observation index to an action id. Stochastic policies draw from the
/// caller-supplied generator, so a shared Policy is safe to use from several threads.
struct Policy {
  std::string name;
  Experiment experiment = Experiment::Exp1;
  std::function<std::size_t(std::size_t obs, Rng& rng)> choose;

  std::size_t operator()(std::size_t obs, Rng& rng) const { return choose(obs, rng); }
};

inline Policy greedy_policy(std::shared_ptr<const QTable> table, Experiment e) {
  if (table->num_states() != num_observations(e) || table->num_actions() != ActionSpace(e).size())
    throw ConfigError("Q-table shape does not match experiment " + std::string(to_string(e)));
  return {"q-greedy", e, [table](std::size_t obs, Rng&) { return argmax(table->row(obs)); }};
}

inline Policy greedy_policy(std::shared_ptr<const Mlp> net, Experiment e) {
  if (net->input_size() != num_observations(e) || net->output_size() != ActionSpace(e).size())
    throw ConfigError("network shape does not match experiment " + std::string(to_string(e)));
  return {"dqn-greedy", e, [net](std::size_t obs, Rng&) {
            const auto q = net->forward_one_hot(obs);
            return argmax(std::span<const double>(q));
          }};
}

inline Policy random_policy(Experiment e) {
  const std::size_t n = ActionSpace(e).size();
  return {"random", e, [n](std::size_t, Rng& rng) { return select_random(n, rng); }};
}

inline Policy do_nothing_policy(Experiment e) {
  return {"do-nothing", e, [](std::size_t, Rng&) -> std::size_t { return 0; }};
}

/// Plays one episode with `policy`. The environment is reset with `env_seed`;
/// the policy's generator is seeded independently from the same value.
inline EpisodeStats run_episode(SimpleEnv& env, const Policy& policy, std::uint64_t env_seed) {
  if (policy.experiment != env.config().experiment)
    throw ConfigError("policy was built for " + std::string(to_string(policy.experiment)) +
                      " but the environment runs " +
                      std::string(to_string(env.config().experiment)));
  Rng rng(derive_seed(env_seed, Stream::Exploration));
  std::size_t obs = env.reset(env_seed).index;
  EpisodeStats stats;
  while (true) {
    const StepResult r = env.step(policy(obs, rng));
    stats.total_reward += r.reward;
    ++stats.timesteps;
    obs = r.observation.index;
    if (r.terminated || r.truncated) {
      stats.reached_goal = r.terminated;
      return stats;
    }
  }
}

}  // namespace ugvrl
