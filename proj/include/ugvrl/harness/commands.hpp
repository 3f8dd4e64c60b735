#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ugvrl/agents/dqn.hpp"
#include "ugvrl/agents/policy.hpp"
#include "ugvrl/agents/qlearning.hpp"
#include "ugvrl/core/scenario.hpp"
#include "ugvrl/env/simple_env.hpp"
#include "ugvrl/harness/model_file.hpp"
#include "ugvrl/harness/report.hpp"
#include "ugvrl/integrated/mission.hpp"

namespace ugvrl {

namespace fs = std::filesystem;

/// Bad command-line usage. Reported with exit code 2, like configuration errors.
class UsageError : public ConfigError {
 public:
  explicit UsageError(const std::string& what) : ConfigError(what) {}
};

// --- configuration ---------------------------------------------------------

inline void to_json(nlohmann::json& j, const QLearningParams& p) {
  j = {{"alpha", p.alpha},
       {"gamma", p.gamma},
       {"epsilon_initial", p.epsilon_initial},
       {"epsilon_final", p.epsilon_final},
       {"episodes", p.episodes}};
}

inline QLearningParams q_params_from_json(const nlohmann::json& j) {
  detail::reject_unknown(j, {"alpha", "gamma", "epsilon_initial", "epsilon_final", "episodes"},
                         "q_learning");
  QLearningParams p;
  detail::read_key(j, "alpha", p.alpha);
  detail::read_key(j, "gamma", p.gamma);
  detail::read_key(j, "epsilon_initial", p.epsilon_initial);
  detail::read_key(j, "epsilon_final", p.epsilon_final);
  detail::read_key(j, "episodes", p.episodes);
  p.validate();
  return p;
}

inline void to_json(nlohmann::json& j, const DqnParams& p) {
  j = {{"gamma", p.gamma},
       {"learning_rate", p.learning_rate},
       {"batch_size", p.batch_size},
       {"buffer_capacity", p.buffer_capacity},
       {"target_sync_interval", p.target_sync_interval},
       {"train_freq", p.train_freq},
       {"learning_starts", p.learning_starts},
       {"total_timesteps", p.total_timesteps},
       {"epsilon_initial", p.epsilon_initial},
       {"epsilon_final", p.epsilon_final},
       {"exploration_fraction", p.exploration_fraction},
       {"hidden", p.hidden}};
}

inline DqnParams dqn_params_from_json(const nlohmann::json& j) {
  detail::reject_unknown(j,
                         {"gamma", "learning_rate", "batch_size", "buffer_capacity",
                          "target_sync_interval", "train_freq", "learning_starts",
                          "total_timesteps", "epsilon_initial", "epsilon_final",
                          "exploration_fraction", "hidden"},
                         "dqn");
  DqnParams p;
  detail::read_key(j, "gamma", p.gamma);
  detail::read_key(j, "learning_rate", p.learning_rate);
  detail::read_key(j, "batch_size", p.batch_size);
  detail::read_key(j, "buffer_capacity", p.buffer_capacity);
  detail::read_key(j, "target_sync_interval", p.target_sync_interval);
  detail::read_key(j, "train_freq", p.train_freq);
  detail::read_key(j, "learning_starts", p.learning_starts);
  detail::read_key(j, "total_timesteps", p.total_timesteps);
  detail::read_key(j, "epsilon_initial", p.epsilon_initial);
  detail::read_key(j, "epsilon_final", p.epsilon_final);
  detail::read_key(j, "exploration_fraction", p.exploration_fraction);
  detail::read_key(j, "hidden", p.hidden);
  p.validate();
  return p;
}

/// A training config file: the scenario keys at top level plus optional
/// "q_learning" and "dqn" hyperparameter sections.
struct TrainingConfig {
  ScenarioConfig scenario;
  QLearningParams q_learning;
  DqnParams dqn;
};

inline TrainingConfig training_config_from_json(const nlohmann::json& j) {
  TrainingConfig c;
  c.scenario = scenario_from_json(j, {"q_learning", "dqn"});
  if (j.contains("q_learning")) c.q_learning = q_params_from_json(j["q_learning"]);
  if (j.contains("dqn")) c.dqn = dqn_params_from_json(j["dqn"]);
  return c;
}

inline TrainingConfig load_training_config(const fs::path& path) {
  return training_config_from_json(read_json_file(path));
}

inline IntegratedScenario load_integrated_config(const fs::path& path) {
  return integrated_from_json(read_json_file(path));
}

// --- run summaries ---------------------------------------------------------

struct RunSummary {
  Algorithm algorithm = Algorithm::QLearning;
  std::string strategy;  // e.g. "epsilon_greedy", "argmax", "greedy"
  Experiment experiment = Experiment::Exp1;
  long episodes_evaluated = 0;
  double mean_reward = 0.0;
  double mean_timesteps = 0.0;
  double goal_rate = 0.0;
  double attack_prob = 0.0;
  double training_time_seconds = 0.0;
  std::uint64_t seed = 0;
};

/// Deterministic fields first; wall-clock measurements live under "metadata".
inline nlohmann::json to_json(const RunSummary& s) {
  return {{"algorithm", to_string(s.algorithm)},
          {"strategy", s.strategy},
          {"experiment", std::string(to_string(s.experiment))},
          {"episodes_evaluated", s.episodes_evaluated},
          {"mean_reward", s.mean_reward},
          {"mean_timesteps", s.mean_timesteps},
          {"goal_rate", s.goal_rate},
          {"attack_prob", s.attack_prob},
          {"seed", s.seed},
          {"metadata", {{"training_time_seconds", s.training_time_seconds}}}};
}

inline void summarize(RunSummary& s, const std::vector<EpisodeStats>& episodes) {
  if (episodes.empty()) throw UsageError("a run summary needs at least one episode");
  std::vector<double> r, t;
  long goals = 0;
  for (const auto& e : episodes) {
    r.push_back(e.total_reward);
    t.push_back(static_cast<double>(e.timesteps));
    goals += e.reached_goal ? 1 : 0;
  }
  s.episodes_evaluated = static_cast<long>(episodes.size());
  s.mean_reward = mean(r);
  s.mean_timesteps = mean(t);
  s.goal_rate = static_cast<double>(goals) / static_cast<double>(episodes.size());
}

inline void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

inline std::string returns_csv(const std::vector<EpisodeStats>& episodes) {
  std::string o = "episode,return,timesteps,reached_goal\n";
  for (std::size_t i = 0; i < episodes.size(); ++i)
    o += std::to_string(i) + "," + format_number(episodes[i].total_reward) + "," +
         std::to_string(episodes[i].timesteps) + "," + (episodes[i].reached_goal ? "1" : "0") +
         "\n";
  return o;
}

/// Rows for one episode in the step-log schema.
inline std::string step_rows(long episode, const std::vector<StepTrace>& trace) {
  std::string o;
  for (const auto& s : trace)
    o += std::to_string(episode) + "," + std::to_string(s.step) + "," + std::to_string(s.t) + "," +
         std::to_string(s.obs_index) + "," + std::to_string(s.action_id) + "," +
         format_number(s.reward) + "," + (s.terminated ? "1" : "0") + "," +
         (s.truncated ? "1" : "0") + "\n";
  return o;
}

inline constexpr const char* kStepCsvHeader =
    "episode,step,timestep,obs_index,action_id,reward,terminated,truncated\n";

// --- train -----------------------------------------------------------------

struct TrainOptions {
  fs::path config;
  std::string algorithm = "q_learning";  // q_learning | q_argmax | dqn | random
  fs::path out;
  std::optional<std::uint64_t> seed;
};

/// Files written next to a model: <stem>.returns.csv and <stem>.summary.json.
inline fs::path sibling(const fs::path& model, const std::string& suffix) {
  fs::path p = model;
  return p.replace_extension(suffix);
}

inline RunSummary cmd_train(const TrainOptions& opt) {
  if (opt.out.empty()) throw UsageError("train needs --out <model file>");
  static const std::vector<std::string> known{"q_learning", "q_argmax", "dqn", "random"};
  if (std::find(known.begin(), known.end(), opt.algorithm) == known.end())
    throw UsageError("unknown algorithm '" + opt.algorithm +
                     "' (expected q_learning, q_argmax, dqn or random)");
  TrainingConfig cfg = load_training_config(opt.config);
  if (opt.seed) cfg.scenario.seed = *opt.seed;
  const std::uint64_t seed = cfg.scenario.seed;

  ModelFile model;
  model.experiment = cfg.scenario.experiment;
  RunSummary summary;
  summary.experiment = cfg.scenario.experiment;
  summary.attack_prob = cfg.scenario.attack_prob;
  summary.seed = seed;
  std::vector<EpisodeStats> curve;
  nlohmann::json training = {{"seed", seed}, {"scenario", cfg.scenario}};

  const auto start = std::chrono::steady_clock::now();
  if (opt.algorithm == "q_learning" || opt.algorithm == "q_argmax") {
    const auto strategy = opt.algorithm == "q_argmax" ? QStrategy::Argmax : QStrategy::EpsilonGreedy;
    auto result = train_q(cfg.scenario, cfg.q_learning, seed, strategy);
    model.algorithm = Algorithm::QLearning;
    model.payload = std::move(result.table);
    curve = std::move(result.episodes);
    summary.strategy = opt.algorithm == "q_argmax" ? "argmax" : "epsilon_greedy";
    training["strategy"] = summary.strategy;
    training["params"] = cfg.q_learning;
  } else if (opt.algorithm == "dqn") {
    auto result = dqn_train(cfg.scenario, cfg.dqn, seed);
    model.algorithm = Algorithm::DQN;
    model.payload = std::move(result.network);
    curve = std::move(result.episodes);
    summary.strategy = "epsilon_greedy";
    training["params"] = cfg.dqn;
    training["gradient_steps"] = result.gradient_steps;
  } else {
    model.algorithm = Algorithm::Random;
    SimpleEnv env(cfg.scenario);
    const Policy p = random_policy(cfg.scenario.experiment);
    const auto root = derive_seed(seed, Stream::Episodes);
    for (long ep = 0; ep < cfg.q_learning.episodes; ++ep)
      curve.push_back(run_episode(env, p, derive_seed(root, static_cast<std::uint64_t>(ep))));
    summary.strategy = "uniform";
    training["episodes"] = cfg.q_learning.episodes;
  }
  summary.training_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  summary.algorithm = model.algorithm;
  model.training = std::move(training);

  if (curve.empty()) {
    summary.episodes_evaluated = 0;
  } else {
    summarize(summary, curve);
  }
  save_model(opt.out, model);
  write_text(sibling(opt.out, ".returns.csv"), returns_csv(curve));
  write_text(sibling(opt.out, ".summary.json"), to_json(summary).dump(2) + "\n");
  return summary;
}

// --- eval ------------------------------------------------------------------

struct EvalOptions {
  std::optional<fs::path> model;
  std::string algorithm;  // baseline when no model is given: random | do_nothing
  fs::path config;
  long episodes = 100;
  std::optional<std::uint64_t> seed;
  std::optional<fs::path> out;  // directory for episodes.csv and summary.json
  std::size_t workers = 0;
};

struct EvalResult {
  RunSummary summary;
  std::vector<EpisodeStats> episodes;
};

/// Seed for evaluation episode i. Independent of which worker runs it.
inline std::uint64_t eval_episode_seed(std::uint64_t root, std::size_t i) {
  return derive_seed(derive_seed(root, Stream::Evaluation), i);
}

/// Evaluates `policy` for `episodes` independent episodes; fills per-step traces when asked.
inline std::vector<EpisodeStats> evaluate_policy(const ScenarioConfig& scenario, const Policy& policy,
                                                 long episodes, std::uint64_t seed,
                                                 std::vector<std::string>* step_log = nullptr,
                                                 std::size_t workers = 0) {
  struct Out {
    EpisodeStats stats;
    std::string rows;
  };
  auto results = parallel_map<Out>(
      static_cast<std::size_t>(episodes),
      [&](std::size_t i) {
        SimpleEnv env(scenario);
        std::vector<StepTrace> trace;
        if (step_log) env.set_trace([&trace](const StepTrace& s) { trace.push_back(s); });
        Out o;
        o.stats = run_episode(env, policy, eval_episode_seed(seed, i));
        if (step_log) o.rows = step_rows(static_cast<long>(i), trace);
        return o;
      },
      workers);
  std::vector<EpisodeStats> stats;
  for (auto& r : results) {
    stats.push_back(r.stats);
    if (step_log) step_log->push_back(std::move(r.rows));
  }
  return stats;
}

inline EvalResult cmd_eval(const EvalOptions& opt) {
  if (opt.episodes <= 0) throw UsageError("--episodes must be at least 1");
  TrainingConfig cfg = load_training_config(opt.config);
  if (opt.seed) cfg.scenario.seed = *opt.seed;

  RunSummary summary;
  Policy policy;
  if (opt.model) {
    const ModelFile m = load_model(*opt.model, cfg.scenario.experiment);
    policy = m.policy();
    summary.algorithm = m.algorithm;
    summary.strategy = m.algorithm == Algorithm::Random ? "uniform" : "greedy";
  } else if (opt.algorithm == "random") {
    policy = random_policy(cfg.scenario.experiment);
    summary.algorithm = Algorithm::Random;
    summary.strategy = "uniform";
  } else if (opt.algorithm == "do_nothing") {
    policy = do_nothing_policy(cfg.scenario.experiment);
    summary.algorithm = Algorithm::Random;
    summary.strategy = "do_nothing";
  } else {
    throw UsageError("eval needs --model, or --algorithm random|do_nothing for a baseline");
  }
  summary.experiment = cfg.scenario.experiment;
  summary.attack_prob = cfg.scenario.attack_prob;
  summary.seed = cfg.scenario.seed;

  std::vector<std::string> rows;
  EvalResult out;
  out.episodes = evaluate_policy(cfg.scenario, policy, opt.episodes, cfg.scenario.seed,
                                 opt.out ? &rows : nullptr, opt.workers);
  summarize(summary, out.episodes);
  out.summary = summary;
  if (opt.out) {
    std::string csv = kStepCsvHeader;
    for (const auto& r : rows) csv += r;
    write_text(*opt.out / "episodes.csv", csv);
    write_text(*opt.out / "summary.json", to_json(summary).dump(2) + "\n");
  }
  return out;
}

// --- compare ---------------------------------------------------------------

struct CompareOptions {
  fs::path config;
  std::vector<std::uint64_t> seeds;
  fs::path out_dir;
  bool force = false;
  bool with_dqn = false;
  std::size_t tail = 100;  // episodes in the "final" window
};

struct CompareReport {
  // strategy -> seed-averaged per-episode returns
  std::map<std::string, std::vector<double>> mean_curves;
  // strategy -> mean return over the last `tail` episodes, averaged over seeds
  std::map<std::string, double> final_means;
};

inline void ensure_output_dir(const fs::path& dir, bool force) {
  if (dir.empty()) throw UsageError("--out <directory> is required");
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir)) throw UsageError("'" + dir.string() + "' is not a directory");
    if (!fs::is_empty(dir) && !force)
      throw UsageError("output directory '" + dir.string() + "' is not empty (use --force)");
  }
  fs::create_directories(dir);
}

inline CompareReport cmd_compare(const CompareOptions& opt) {
  ensure_output_dir(opt.out_dir, opt.force);
  TrainingConfig cfg = load_training_config(opt.config);
  std::vector<std::uint64_t> seeds = opt.seeds;
  if (seeds.empty()) seeds.push_back(cfg.scenario.seed);

  std::vector<std::string> order{"random", "q_argmax", "q_epsilon_greedy"};
  if (opt.with_dqn) order.push_back("dqn");
  std::map<std::string, std::vector<std::vector<EpisodeStats>>> runs;

  for (const auto seed : seeds) {
    ScenarioConfig sc = cfg.scenario;
    sc.seed = seed;
    {
      SimpleEnv env(sc);
      const Policy p = random_policy(sc.experiment);
      const auto root = derive_seed(seed, Stream::Episodes);
      std::vector<EpisodeStats> curve;
      for (long ep = 0; ep < cfg.q_learning.episodes; ++ep)
        curve.push_back(run_episode(env, p, derive_seed(root, static_cast<std::uint64_t>(ep))));
      runs["random"].push_back(std::move(curve));
    }
    runs["q_argmax"].push_back(train_q(sc, cfg.q_learning, seed, QStrategy::Argmax).episodes);
    runs["q_epsilon_greedy"].push_back(
        train_q(sc, cfg.q_learning, seed, QStrategy::EpsilonGreedy).episodes);
    if (opt.with_dqn) runs["dqn"].push_back(dqn_train(sc, cfg.dqn, seed).episodes);
  }

  CompareReport report;
  std::string csv = "strategy,seed,episode,return,timesteps\n";
  std::vector<Series> series;
  nlohmann::json summary = {{"experiment", std::string(to_string(cfg.scenario.experiment))},
                            {"attack_prob", cfg.scenario.attack_prob},
                            {"seeds", seeds},
                            {"tail_episodes", opt.tail},
                            {"strategies", nlohmann::json::object()}};
  for (const auto& name : order) {
    const auto& per_seed = runs[name];
    std::size_t len = 0;
    for (const auto& c : per_seed) len = std::max(len, c.size());
    std::vector<double> avg(len, 0.0);
    std::vector<double> counts(len, 0.0);
    double tail_sum = 0.0;
    for (std::size_t s = 0; s < per_seed.size(); ++s) {
      const auto& c = per_seed[s];
      std::vector<double> tail_vals;
      for (std::size_t i = 0; i < c.size(); ++i) {
        csv += name + "," + std::to_string(seeds[s]) + "," + std::to_string(i) + "," +
               format_number(c[i].total_reward) + "," + std::to_string(c[i].timesteps) + "\n";
        avg[i] += c[i].total_reward;
        counts[i] += 1.0;
        if (i + opt.tail >= c.size()) tail_vals.push_back(c[i].total_reward);
      }
      tail_sum += mean(tail_vals);
    }
    for (std::size_t i = 0; i < len; ++i) avg[i] /= counts[i];
    report.final_means[name] = tail_sum / static_cast<double>(per_seed.size());
    report.mean_curves[name] = avg;
    summary["strategies"][name] = {{"final_mean_return", report.final_means[name]},
                                   {"episodes", len}};
    series.push_back({name, avg});
  }

  write_text(opt.out_dir / "curves.csv", csv);
  write_text(opt.out_dir / "returns.svg",
             svg_line_chart(series,
                            "Total reward per episode (" +
                                std::string(to_string(cfg.scenario.experiment)) + ")",
                            "episode", "total reward"));
  write_text(opt.out_dir / "summary.json", summary.dump(2) + "\n");
  return report;
}

// --- transfer --------------------------------------------------------------

struct TransferOptions {
  std::optional<fs::path> model;
  std::string algorithm;  // baseline when no model: do_nothing | random
  fs::path config;
  long missions = 20;
  std::optional<std::uint64_t> seed;
  std::optional<fs::path> out;
  bool realtime = false;
  bool paced = true;  // false: run the simulated clock without waiting
  std::size_t workers = 0;
};

struct TransferReport {
  long missions = 0;
  long successes = 0;
  double success_rate = 0.0;
  Interval ci95;
  double mean_elapsed = 0.0;
  double mean_reward = 0.0;
  double mean_attacks = 0.0;
  std::vector<MissionResult> results;
};

inline nlohmann::json to_json(const TransferReport& r) {
  return {{"missions", r.missions},
          {"successes", r.successes},
          {"success_rate", r.success_rate},
          {"success_rate_ci95", {r.ci95.low, r.ci95.high}},
          {"mean_elapsed_seconds", r.mean_elapsed},
          {"mean_reward", r.mean_reward},
          {"mean_attacks", r.mean_attacks}};
}

inline std::uint64_t mission_seed(std::uint64_t root, std::size_t i) {
  return derive_seed(derive_seed(root, Stream::Missions), i);
}

inline TransferReport run_transfer(const Policy& policy, const IntegratedScenario& scenario,
                                   long missions, std::uint64_t seed, double clock_scale,
                                   bool paced, std::vector<std::string>* logs = nullptr,
                                   std::size_t workers = 0) {
  if (missions <= 0) throw UsageError("--missions must be at least 1");
  struct Out {
    MissionResult result;
    std::string log;
  };
  // Paced missions mostly sleep, so they overlap well even on few cores.
  if (workers == 0) workers = paced ? std::min<std::size_t>(static_cast<std::size_t>(missions), 16) : 0;
  auto outs = parallel_map<Out>(
      static_cast<std::size_t>(missions),
      [&](std::size_t i) {
        IntegratedScenario sc = scenario;
        sc.seed = mission_seed(seed, i);
        Out o;
        MissionEventSink sink;
        if (logs) sink = [&o](const MissionEvent& e) { o.log += to_jsonl(e) + "\n"; };
        if (paced) {
          PacedClock clock(clock_scale);
          o.result = run_mission(policy, sc, clock, sink);
        } else {
          SteppedClock clock;
          o.result = run_mission(policy, sc, clock, sink);
        }
        return o;
      },
      workers);

  TransferReport r;
  r.missions = missions;
  std::vector<double> elapsed, reward, attacks;
  for (auto& o : outs) {
    r.successes += o.result.success ? 1 : 0;
    elapsed.push_back(o.result.elapsed);
    reward.push_back(o.result.total_reward);
    attacks.push_back(static_cast<double>(o.result.attacks_injected));
    r.results.push_back(o.result);
    if (logs) logs->push_back(std::move(o.log));
  }
  r.success_rate = static_cast<double>(r.successes) / static_cast<double>(missions);
  r.ci95 = wilson_interval(r.successes, missions);
  r.mean_elapsed = mean(elapsed);
  r.mean_reward = mean(reward);
  r.mean_attacks = mean(attacks);
  return r;
}

inline TransferReport cmd_transfer(const TransferOptions& opt) {
  if (opt.missions <= 0) throw UsageError("--missions must be at least 1");
  IntegratedScenario sc = load_integrated_config(opt.config);
  if (opt.seed) sc.seed = *opt.seed;

  Policy policy;
  if (opt.model) {
    policy = load_model(*opt.model, sc.experiment).policy();
  } else if (opt.algorithm == "do_nothing") {
    policy = do_nothing_policy(sc.experiment);
  } else if (opt.algorithm == "random") {
    policy = random_policy(sc.experiment);
  } else {
    throw UsageError("transfer needs --model, or --algorithm do_nothing|random for a baseline");
  }

  std::vector<std::string> logs;
  const double scale = opt.realtime ? 1.0 : sc.clock_scale;
  TransferReport r = run_transfer(policy, sc, opt.missions, sc.seed, scale, opt.paced,
                                  opt.out ? &logs : nullptr, opt.workers);
  if (opt.out) {
    fs::create_directories(*opt.out);
    for (std::size_t i = 0; i < logs.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "mission_%03zu.jsonl", i);
      write_text(*opt.out / name, logs[i]);
    }
    nlohmann::json j = to_json(r);
    j["policy"] = policy.name;
    j["scenario"] = sc;
    write_text(*opt.out / "transfer.json", j.dump(2) + "\n");
  }
  return r;
}

}  // namespace ugvrl
