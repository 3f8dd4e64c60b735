#include <chrono>

#include <gtest/gtest.h>

#include "ugvrl/agents/dqn.hpp"

using namespace ugvrl;

TEST(ReplayBuffer, EvictsOldestFirst) {
  ReplayBuffer buf(3);
  for (std::size_t i = 0; i < 5; ++i) buf.push({i, 0, static_cast<double>(i), 0, false});
  ASSERT_EQ(buf.size(), 3u);
  EXPECT_EQ(buf.at(0).obs, 2u);
  EXPECT_EQ(buf.at(1).obs, 3u);
  EXPECT_EQ(buf.at(2).obs, 4u);
  EXPECT_THROW(buf.at(3), DomainError);
  EXPECT_THROW(ReplayBuffer(0), ConfigError);
  Rng rng(0);
  EXPECT_THROW(ReplayBuffer(2).sample(1, rng), DomainError);
}

TEST(ReplayBuffer, SamplesUniformly) {
  ReplayBuffer buf(4);
  for (std::size_t i = 0; i < 4; ++i) buf.push({i, 0, 0.0, 0, false});
  Rng rng(12);
  std::vector<int> counts(4, 0);
  for (const auto& t : buf.sample(40000, rng)) ++counts[t.obs];
  for (int c : counts) EXPECT_NEAR(c / 40000.0, 0.25, 0.015);
}

TEST(DqnTargets, TerminalTransitionsYieldRewards) {
  Rng rng(1);
  auto net = Mlp::for_q_values(24, 7);
  net.initialize(rng);
  const std::vector<Transition> ts{{0, 1, 3.5, 5, true}, {4, 2, -10.0, 9, true}};
  const auto b = dqn_targets(net, ts, 0.9);
  EXPECT_EQ(b.targets, (std::vector<double>{3.5, -10.0}));
  EXPECT_EQ(b.actions, (std::vector<std::size_t>{1, 2}));
}

TEST(DqnTargets, BootstrapsFromTargetMax) {
  Rng rng(2);
  auto net = Mlp::for_q_values(24, 7);
  net.initialize(rng);
  const auto q = net.forward_one_hot(6);
  const double best = *std::max_element(q.begin(), q.end());
  const auto b = dqn_targets(net, {{1, 0, 2.0, 6, false}}, 0.9);
  EXPECT_DOUBLE_EQ(b.targets[0], 2.0 + 0.9 * best);
}

TEST(DqnLearner, TargetEqualsOnlineAfterSync) {
  DqnParams p;
  p.batch_size = 4;
  DqnLearner learner(24, 7, p, 9);
  EXPECT_EQ(learner.online(), learner.target());
  for (std::size_t i = 0; i < 10; ++i) learner.remember({i % 24, i % 7, 1.0, (i + 1) % 24, false});
  learner.train_step();
  EXPECT_NE(learner.online(), learner.target());
  learner.sync_target();
  EXPECT_EQ(learner.online(), learner.target());
}

TEST(DqnParams, EpsilonScheduleAndValidation) {
  DqnParams p;
  p.total_timesteps = 1000;
  EXPECT_DOUBLE_EQ(p.epsilon_at(0), 1.0);
  EXPECT_DOUBLE_EQ(p.epsilon_at(100), 0.05);
  EXPECT_DOUBLE_EQ(p.epsilon_at(900), 0.05);
  for (long s = 1; s < 200; ++s) EXPECT_LE(p.epsilon_at(s), p.epsilon_at(s - 1));
  p.train_freq = 0;
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(DqnTrain, DesktopRunIsDeterministicAndFinite) {
  ScenarioConfig cfg;
  cfg.max_timesteps = 200;
  cfg.goal_step = 50;
  DqnParams p;
  p.total_timesteps = 5000;
  const auto a = dqn_train(cfg, p, 21);
  const auto b = dqn_train(cfg, p, 21);
  EXPECT_EQ(a.network, b.network);
  EXPECT_TRUE(a.network.all_finite());
  EXPECT_EQ(a.gradient_steps, (5000 - 1000) / 4 + 1);
  EXPECT_FALSE(a.episodes.empty());
}

TEST(DqnTrain, FiftyThousandStepsWithinFiveMinutes) {
  DqnParams p;
  p.total_timesteps = 50'000;
  const auto start = std::chrono::steady_clock::now();
  const auto r = dqn_train(ScenarioConfig{}, p, 4);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(secs, 300.0);
  EXPECT_TRUE(r.network.all_finite());
}
