#pragma once

// Central finite-difference probe of Mlp::gradient.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ugvrl/agents/mlp.hpp"

namespace gradcheck {

struct Probe {
  std::size_t index;
  double analytic;
  double numeric;
  double rel_error;
};

inline ugvrl::TdBatch random_batch(const ugvrl::Mlp& net, std::size_t n, ugvrl::Rng& rng) {
  std::uniform_int_distribution<std::size_t> s(0, net.input_size() - 1), a(0, net.output_size() - 1);
  std::uniform_real_distribution<double> y(-20.0, 20.0);
  ugvrl::TdBatch b;
  for (std::size_t i = 0; i < n; ++i) {
    b.inputs.push_back(s(rng));
    b.actions.push_back(a(rng));
    b.targets.push_back(y(rng));
  }
  return b;
}

/// Relative error |a - n| / max(|a|, |n|), with a 1e-7 floor on the denominator
/// so that parameters whose true gradient is zero (dead units) compare as equal.
inline double relative_error(double a, double n) {
  return std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-7});
}

/// Probes `probes` parameters, each on a freshly initialised network and batch.
inline std::vector<Probe> run(std::size_t probes, std::uint64_t seed, double h = 1e-4) {
  ugvrl::Rng rng(seed);
  std::vector<Probe> out;
  std::vector<double> grad;
  for (std::size_t k = 0; k < probes; ++k) {
    auto net = ugvrl::Mlp::for_q_values(24, 7);
    net.initialize(rng);
    const auto batch = random_batch(net, 16, rng);
    net.gradient(batch, grad);
    // Only parameters the batch can reach: pick among nonzero-gradient entries when possible.
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < grad.size(); ++i)
      if (grad[i] != 0.0) live.push_back(i);
    std::uniform_int_distribution<std::size_t> pick(0, (live.empty() ? grad.size() : live.size()) - 1);
    const std::size_t idx = live.empty() ? pick(rng) : live[pick(rng)];

    auto p = net.parameters();
    const double orig = p[idx];
    p[idx] = orig + h;
    const double up = net.loss(batch);
    p[idx] = orig - h;
    const double down = net.loss(batch);
    p[idx] = orig;
    const double numeric = (up - down) / (2.0 * h);
    out.push_back({idx, grad[idx], numeric, relative_error(grad[idx], numeric)});
  }
  return out;
}

}  // namespace gradcheck
