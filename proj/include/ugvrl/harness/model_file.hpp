#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "ugvrl/agents/mlp.hpp"
#include "ugvrl/agents/policy.hpp"
#include "ugvrl/agents/qlearning.hpp"
#include "ugvrl/core/domain.hpp"
#include "ugvrl/core/errors.hpp"

namespace ugvrl {

enum class Algorithm { Random, QLearning, DQN };

inline const char* to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::Random: return "random";
    case Algorithm::QLearning: return "q_learning";
    case Algorithm::DQN: return "dqn";
  }
  return "?";
}

inline Algorithm parse_algorithm(const std::string& s) {
  if (s == "random") return Algorithm::Random;
  if (s == "q_learning") return Algorithm::QLearning;
  if (s == "dqn") return Algorithm::DQN;
  throw ParseError("unknown algorithm tag '" + s + "'");
}

inline constexpr int kModelFormatVersion = 1;

/// Self-describing persisted policy. `training` holds only deterministic
/// metadata (seed, scenario, hyperparameters) so equal runs give equal files.
struct ModelFile {
  int format_version = kModelFormatVersion;
  Experiment experiment = Experiment::Exp1;
  Algorithm algorithm = Algorithm::QLearning;
  std::variant<std::monostate, QTable, Mlp> payload;
  nlohmann::json training = nlohmann::json::object();

  /// Greedy policy for learned payloads, uniform random for Algorithm::Random.
  Policy policy() const {
    switch (algorithm) {
      case Algorithm::Random: return random_policy(experiment);
      case Algorithm::QLearning:
        return greedy_policy(std::make_shared<const QTable>(std::get<QTable>(payload)), experiment);
      case Algorithm::DQN:
        return greedy_policy(std::make_shared<const Mlp>(std::get<Mlp>(payload)), experiment);
    }
    throw DomainError("unhandled algorithm");
  }
};

inline nlohmann::json model_to_json(const ModelFile& m) {
  nlohmann::json payload = nlohmann::json::object();
  if (const auto* q = std::get_if<QTable>(&m.payload)) {
    payload = {{"num_states", q->num_states()},
               {"num_actions", q->num_actions()},
               {"values", std::vector<double>(q->values().begin(), q->values().end())}};
  } else if (const auto* n = std::get_if<Mlp>(&m.payload)) {
    payload = {{"layer_sizes", n->layer_sizes()},
               {"activation", "relu"},
               {"parameters",
                std::vector<double>(n->parameters().begin(), n->parameters().end())}};
  }
  return {{"format_version", m.format_version},
          {"experiment", std::string(to_string(m.experiment))},
          {"algorithm", to_string(m.algorithm)},
          {"payload", payload},
          {"training", m.training}};
}

inline std::string serialize_model(const ModelFile& m) { return model_to_json(m).dump(1) + "\n"; }

namespace detail {
inline void require_finite(const std::vector<double>& v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw ParseError(std::string(what) + " contains non-finite values");
}
}  // namespace detail

/// Parses and validates a model. Shapes must match the experiment's state/action counts.
inline ModelFile model_from_json(const nlohmann::json& j) {
  try {
    ModelFile m;
    m.format_version = j.at("format_version").get<int>();
    if (m.format_version != kModelFormatVersion)
      throw ParseError("unsupported model format_version " + std::to_string(m.format_version));
    try {
      m.experiment = parse_experiment(j.at("experiment").get<std::string>());
    } catch (const ConfigError& e) {
      throw ParseError(e.what());
    }
    m.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    m.training = j.value("training", nlohmann::json::object());
    const auto& p = j.at("payload");
    const std::size_t states = num_observations(m.experiment);
    const std::size_t actions = ActionSpace(m.experiment).size();

    switch (m.algorithm) {
      case Algorithm::Random: m.payload = std::monostate{}; break;
      case Algorithm::QLearning: {
        const auto ns = p.at("num_states").get<std::size_t>();
        const auto na = p.at("num_actions").get<std::size_t>();
        if (ns != states || na != actions)
          throw ConfigError("Q-table is " + std::to_string(ns) + "x" + std::to_string(na) +
                            " but " + std::string(to_string(m.experiment)) + " needs " +
                            std::to_string(states) + "x" + std::to_string(actions));
        const auto values = p.at("values").get<std::vector<double>>();
        if (values.size() != ns * na) throw ParseError("Q-table value count does not match its shape");
        detail::require_finite(values, "Q-table");
        QTable t(ns, na);
        std::copy(values.begin(), values.end(), t.values().begin());
        m.payload = std::move(t);
        break;
      }
      case Algorithm::DQN: {
        const auto sizes = p.at("layer_sizes").get<std::vector<std::size_t>>();
        if (sizes.size() < 2 || sizes.front() != states || sizes.back() != actions)
          throw ConfigError("network shape does not match " + std::string(to_string(m.experiment)));
        Mlp net(sizes);
        const auto params = p.at("parameters").get<std::vector<double>>();
        if (params.size() != net.parameters().size())
          throw ParseError("network parameter count does not match its layer sizes");
        detail::require_finite(params, "network");
        std::copy(params.begin(), params.end(), net.parameters().begin());
        m.payload = std::move(net);
        break;
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed model file: ") + e.what());
  }
}

inline void save_model(const std::filesystem::path& path, const ModelFile& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write model file '" + path.string() + "'");
  out << serialize_model(m);
  if (!out) throw std::runtime_error("failed writing model file '" + path.string() + "'");
}

inline ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open model file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("cannot parse model file '" + path.string() + "': " + e.what());
  }
  return model_from_json(j);
}

/// Loads a model and refuses it unless it was trained for `expected`.
inline ModelFile load_model(const std::filesystem::path& path, Experiment expected) {
  ModelFile m = load_model(path);
  if (m.experiment != expected)
    throw ConfigError("model was trained for " + std::string(to_string(m.experiment)) +
                      " but " + std::string(to_string(expected)) + " was requested");
  return m;
}

}  // namespace ugvrl
