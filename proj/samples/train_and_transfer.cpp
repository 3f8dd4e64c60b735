// Trains tabular Q-learning on Experiment 1, checks it against the random
// baseline, saves the model, and flies it through a few integrated missions.
//
//   train_and_transfer [model_path]

#include <cstdio>
#include <memory>

#include "ugvrl/ugvrl.hpp"

int main(int argc, char** argv) {
  using namespace ugvrl;
  const std::string model_path = argc > 1 ? argv[1] : "exp1_q.json";

  ScenarioConfig scenario;  // Exp1, 1800 steps, goal at 800, attack_prob 0.1
  scenario.seed = 1;
  const auto trained = train_q(scenario, QLearningParams{}, scenario.seed);
  std::printf("trained %zu episodes, last return %.1f\n", trained.episodes.size(),
              trained.episodes.back().total_reward);

  const auto table = std::make_shared<const QTable>(trained.table);
  const Policy greedy = greedy_policy(table, scenario.experiment);
  const auto mean_of = [](const std::vector<EpisodeStats>& eps) {
    double s = 0;
    for (const auto& e : eps) s += e.total_reward;
    return s / static_cast<double>(eps.size());
  };
  std::printf("greedy mean return %.1f vs random %.1f over 50 episodes\n",
              mean_of(evaluate_policy(scenario, greedy, 50, 99)),
              mean_of(evaluate_policy(scenario, random_policy(scenario.experiment), 50, 99)));

  ModelFile model;
  model.experiment = scenario.experiment;
  model.algorithm = Algorithm::QLearning;
  model.payload = trained.table;
  model.training = {{"seed", scenario.seed}};
  save_model(model_path, model);

  // The reloaded policy drives the integrated simulator without pacing.
  const Policy reloaded = load_model(model_path, Experiment::Exp1).policy();
  const auto report = run_transfer(reloaded, IntegratedScenario{}, 5, 7, 50.0, /*paced=*/false);
  for (const auto& r : report.results)
    std::printf("mission: %s after %.1f s, %ld attacks, %ld responses\n",
                r.success ? "success" : "failure", r.elapsed, r.attacks_injected, r.responses);
  std::printf("success rate %.2f\n", report.success_rate);
  return 0;
}
