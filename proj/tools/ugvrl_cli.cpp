// Command-line front end: train | eval | compare | transfer.
//
// Exit codes: 0 success, 1 runtime error, 2 usage or configuration error.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "ugvrl/ugvrl.hpp"

namespace {

void print_summary(const ugvrl::RunSummary& s) {
  std::cout << "algorithm:          " << ugvrl::to_string(s.algorithm) << " (" << s.strategy << ")\n"
            << "experiment:         " << ugvrl::to_string(s.experiment) << "\n"
            << "attack_prob:        " << s.attack_prob << "\n"
            << "episodes:           " << s.episodes_evaluated << "\n"
            << "mean reward:        " << s.mean_reward << "\n"
            << "mean timesteps:     " << s.mean_timesteps << "\n"
            << "goal rate:          " << s.goal_rate << "\n";
  if (s.training_time_seconds > 0)
    std::cout << "training time (s):  " << s.training_time_seconds << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incident-response RL for a simulated unmanned ground vehicle"};
  app.require_subcommand(1);

  ugvrl::TrainOptions train;
  std::uint64_t train_seed = 0;
  auto* train_cmd = app.add_subcommand("train", "Train a policy in the simple environment");
  train_cmd->add_option("--config", train.config, "Training config (JSON)")->required();
  train_cmd->add_option("--algorithm", train.algorithm, "q_learning | q_argmax | dqn | random");
  train_cmd->add_option("--out", train.out, "Model file to write")->required();
  auto* train_seed_opt = train_cmd->add_option("--seed", train_seed, "Overrides the config seed");

  ugvrl::EvalOptions eval;
  std::string eval_model;
  std::string eval_out;
  std::uint64_t eval_seed = 0;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a greedy policy or a baseline");
  eval_cmd->add_option("--model", eval_model, "Model file");
  eval_cmd->add_option("--algorithm", eval.algorithm, "Baseline without a model: random | do_nothing");
  eval_cmd->add_option("--config", eval.config, "Scenario config (JSON)")->required();
  eval_cmd->add_option("--episodes", eval.episodes, "Evaluation episodes (default 100)");
  auto* eval_seed_opt = eval_cmd->add_option("--seed", eval_seed, "Overrides the config seed");
  eval_cmd->add_option("--out", eval_out, "Directory for episodes.csv and summary.json");

  ugvrl::CompareOptions compare;
  auto* compare_cmd =
      app.add_subcommand("compare", "Random vs Q-argmax vs Q-epsilon-greedy training curves");
  compare_cmd->add_option("--config", compare.config, "Training config (JSON)")->required();
  compare_cmd->add_option("--seed", compare.seeds, "One or more seeds")->expected(1, -1);
  compare_cmd->add_option("--out", compare.out_dir, "Output directory")->required();
  compare_cmd->add_flag("--force", compare.force, "Write into a non-empty directory");
  compare_cmd->add_flag("--with-dqn", compare.with_dqn, "Also train DQN");

  ugvrl::TransferOptions transfer;
  std::string transfer_model;
  std::string transfer_out;
  std::uint64_t transfer_seed = 0;
  auto* transfer_cmd =
      app.add_subcommand("transfer", "Run a trained policy in the integrated environment");
  transfer_cmd->add_option("--model", transfer_model, "Model file");
  transfer_cmd->add_option("--algorithm", transfer.algorithm,
                           "Baseline without a model: do_nothing | random");
  transfer_cmd->add_option("--config", transfer.config, "Integrated scenario config (JSON)")
      ->required();
  transfer_cmd->add_option("--missions,--episodes", transfer.missions, "Missions (default 20)");
  auto* transfer_seed_opt =
      transfer_cmd->add_option("--seed", transfer_seed, "Overrides the config seed");
  transfer_cmd->add_option("--out", transfer_out, "Directory for transfer.json and event logs");
  transfer_cmd->add_flag("--realtime", transfer.realtime, "Pace the simulated clock at 1x");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*train_cmd) {
      if (*train_seed_opt) train.seed = train_seed;
      print_summary(ugvrl::cmd_train(train));
      std::cout << "model written to " << train.out << "\n";
    } else if (*eval_cmd) {
      if (!eval_model.empty()) eval.model = eval_model;
      if (!eval_out.empty()) eval.out = eval_out;
      if (*eval_seed_opt) eval.seed = eval_seed;
      print_summary(ugvrl::cmd_eval(eval).summary);
    } else if (*compare_cmd) {
      const auto report = ugvrl::cmd_compare(compare);
      for (const auto& [name, value] : report.final_means)
        std::cout << name << ": final mean return " << value << "\n";
      std::cout << "curves and chart written to " << compare.out_dir << "\n";
    } else if (*transfer_cmd) {
      if (!transfer_model.empty()) transfer.model = transfer_model;
      if (!transfer_out.empty()) transfer.out = transfer_out;
      if (*transfer_seed_opt) transfer.seed = transfer_seed;
      const auto r = ugvrl::cmd_transfer(transfer);
      std::printf("success rate: %ld/%ld = %.3f (95%% CI %.3f-%.3f)\n", r.successes, r.missions,
                  r.success_rate, r.ci95.low, r.ci95.high);
      std::printf("mean elapsed: %.2f s, mean reward: %.2f, mean attacks: %.2f\n", r.mean_elapsed,
                  r.mean_reward, r.mean_attacks);
    }
  } catch (const ugvrl::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ugvrl::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
