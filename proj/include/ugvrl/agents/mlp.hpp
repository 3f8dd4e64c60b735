#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "ugvrl/core/errors.hpp"
#include "ugvrl/core/random.hpp"

namespace ugvrl {

/// A batch of (one-hot input index, taken action) pairs with regression targets.
struct TdBatch {
  std::vector<std::size_t> inputs;
  std::vector<std::size_t> actions;
  std::vector<double> targets;

  std::size_t size() const noexcept { return inputs.size(); }
};

/// Fully connected network with ReLU hidden layers and a linear output layer.
///
/// Parameters are stored flat, layer by layer: the weight matrix
/// (outputs x inputs, row-major) followed by the bias vector.
class Mlp {
 public:
  Mlp() = default;

  explicit Mlp(std::vector<std::size_t> layer_sizes) : sizes_(std::move(layer_sizes)) {
    if (sizes_.size() < 2) throw ConfigError("an approximator needs at least two layer sizes");
    for (auto s : sizes_)
      if (s == 0) throw ConfigError("layer sizes must be positive");
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
      w_off_.push_back(n);
      n += sizes_[l] * sizes_[l + 1];
      b_off_.push_back(n);
      n += sizes_[l + 1];
    }
    params_.assign(n, 0.0);
  }

  /// Input = one-hot of the state index, two hidden layers, one output per action.
  static Mlp for_q_values(std::size_t num_states, std::size_t num_actions, std::size_t hidden = 64) {
    return Mlp({num_states, hidden, hidden, num_actions});
  }

  /// U(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases.
  void initialize(Rng& rng) {
    for (std::size_t l = 0; l < num_layers(); ++l) {
      const double bound = 1.0 / std::sqrt(static_cast<double>(sizes_[l]));
      std::uniform_real_distribution<double> u(-bound, bound);
      auto w = weights(l);
      auto b = biases(l);
      for (auto& x : w) x = u(rng);
      for (auto& x : b) x = u(rng);
    }
  }

  const std::vector<std::size_t>& layer_sizes() const noexcept { return sizes_; }
  std::size_t num_layers() const noexcept { return sizes_.size() - 1; }
  std::size_t input_size() const noexcept { return sizes_.front(); }
  std::size_t output_size() const noexcept { return sizes_.back(); }

  std::span<double> parameters() noexcept { return params_; }
  std::span<const double> parameters() const noexcept { return params_; }

  std::span<double> weights(std::size_t l) {
    return std::span<double>(params_).subspan(w_off_[l], sizes_[l] * sizes_[l + 1]);
  }
  std::span<double> biases(std::size_t l) {
    return std::span<double>(params_).subspan(b_off_[l], sizes_[l + 1]);
  }

  bool all_finite() const noexcept {
    return std::all_of(params_.begin(), params_.end(), [](double x) { return std::isfinite(x); });
  }

  /// Dense forward pass.
  std::vector<double> forward(std::span<const double> input) const {
    if (input.size() != input_size()) throw DomainError("input length does not match the network");
    std::vector<double> act(input.begin(), input.end());
    for (std::size_t l = 0; l < num_layers(); ++l) act = layer(l, act, l + 1 < num_layers());
    return act;
  }

  /// Forward pass for a one-hot input; the first layer reduces to a column lookup.
  std::vector<double> forward_one_hot(std::size_t index) const {
    std::vector<double> h = first_layer_one_hot(index);
    for (std::size_t l = 1; l < num_layers(); ++l) h = layer(l, h, l + 1 < num_layers());
    return h;
  }

  /// Mean squared error between Q(input, action) and the target over the batch.
  double loss(const TdBatch& batch) const {
    check_batch(batch);
    double sum = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const double d = forward_one_hot(batch.inputs[i]).at(batch.actions[i]) - batch.targets[i];
      sum += d * d;
    }
    return sum / static_cast<double>(batch.size());
  }

  /// Gradient of loss(batch) with respect to parameters(), by backpropagation.
  /// Returns the loss alongside.
  double gradient(const TdBatch& batch, std::vector<double>& grad) const {
    check_batch(batch);
    grad.assign(params_.size(), 0.0);
    const double scale = 2.0 / static_cast<double>(batch.size());
    const std::size_t L = num_layers();
    std::vector<std::vector<double>> acts(L + 1);  // acts[l] = output of layer l-1 (post-ReLU)
    std::vector<double> delta, prev_delta;
    double sum = 0.0;

    for (std::size_t i = 0; i < batch.size(); ++i) {
      const std::size_t idx = batch.inputs[i];
      acts[1] = first_layer_one_hot(idx);
      for (std::size_t l = 1; l < L; ++l) acts[l + 1] = layer(l, acts[l], l + 1 < L);
      const std::size_t a = batch.actions[i];
      if (a >= output_size()) throw DomainError("batch action out of range");
      const double err = acts[L][a] - batch.targets[i];
      sum += err * err;

      // Only the taken action's output carries error.
      delta.assign(output_size(), 0.0);
      delta[a] = scale * err;
      for (std::size_t l = L; l-- > 0;) {
        const std::size_t in = sizes_[l], out = sizes_[l + 1];
        double* gw = grad.data() + w_off_[l];
        double* gb = grad.data() + b_off_[l];
        for (std::size_t o = 0; o < out; ++o) gb[o] += delta[o];
        if (l == 0) {
          for (std::size_t o = 0; o < out; ++o) gw[o * in + idx] += delta[o];
          break;
        }
        const std::vector<double>& x = acts[l];
        for (std::size_t o = 0; o < out; ++o) {
          const double d = delta[o];
          if (d == 0.0) continue;
          double* row = gw + o * in;
          for (std::size_t j = 0; j < in; ++j) row[j] += d * x[j];
        }
        prev_delta.assign(in, 0.0);
        const double* w = params_.data() + w_off_[l];
        for (std::size_t o = 0; o < out; ++o) {
          const double d = delta[o];
          if (d == 0.0) continue;
          const double* row = w + o * in;
          for (std::size_t j = 0; j < in; ++j) prev_delta[j] += d * row[j];
        }
        for (std::size_t j = 0; j < in; ++j)
          if (x[j] <= 0.0) prev_delta[j] = 0.0;  // ReLU
        delta.swap(prev_delta);
      }
    }
    return sum / static_cast<double>(batch.size());
  }

  friend bool operator==(const Mlp&, const Mlp&) = default;

 private:
  std::vector<double> first_layer_one_hot(std::size_t index) const {
    if (index >= input_size()) throw DomainError("one-hot index out of range");
    const std::size_t in = sizes_[0], out = sizes_[1];
    const double* w = params_.data() + w_off_[0];
    const double* b = params_.data() + b_off_[0];
    std::vector<double> h(out);
    const bool hidden = num_layers() > 1;
    for (std::size_t o = 0; o < out; ++o) {
      const double z = w[o * in + index] + b[o];
      h[o] = hidden ? std::max(0.0, z) : z;
    }
    return h;
  }

  std::vector<double> layer(std::size_t l, const std::vector<double>& x, bool relu) const {
    const std::size_t in = sizes_[l], out = sizes_[l + 1];
    const double* w = params_.data() + w_off_[l];
    const double* b = params_.data() + b_off_[l];
    std::vector<double> y(out);
    for (std::size_t o = 0; o < out; ++o) {
      double z = b[o];
      const double* row = w + o * in;
      for (std::size_t j = 0; j < in; ++j) z += row[j] * x[j];
      y[o] = relu ? std::max(0.0, z) : z;
    }
    return y;
  }

  void check_batch(const TdBatch& batch) const {
    if (batch.inputs.empty()) throw DomainError("empty batch");
    if (batch.actions.size() != batch.size() || batch.targets.size() != batch.size())
      throw DomainError("batch inputs, actions and targets must be aligned");
  }

  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> w_off_, b_off_;
  std::vector<double> params_;
};

/// Forward pass that refuses non-finite weights.
inline std::vector<double> approx_forward(const Mlp& net, std::span<const double> state_one_hot) {
  if (!net.all_finite()) throw NumericError("approximator has non-finite weights");
  return net.forward(state_one_hot);
}

/// One plain gradient-descent step on the batch's mean squared error. Returns the pre-step loss.
/// ReLU maps NaN to 0, so weights are checked explicitly as well as the loss.
inline double approx_gradient_step(Mlp& net, const TdBatch& batch, double learning_rate) {
  if (!net.all_finite()) throw NumericError("approximator has non-finite weights");
  std::vector<double> grad;
  const double loss = net.gradient(batch, grad);
  if (!std::isfinite(loss)) throw NumericError("non-finite loss in gradient step");
  auto p = net.parameters();
  for (std::size_t i = 0; i < p.size(); ++i) p[i] -= learning_rate * grad[i];
  if (!net.all_finite()) throw NumericError("gradient step produced non-finite weights");
  return loss;
}

/// Adam with the usual defaults (beta1 = 0.9, beta2 = 0.999, eps = 1e-8).
class Adam {
 public:
  explicit Adam(double learning_rate, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : lr_(learning_rate), b1_(beta1), b2_(beta2), eps_(eps) {}

  void step(std::span<double> params, std::span<const double> grad) {
    if (m_.size() != params.size()) {
      m_.assign(params.size(), 0.0);
      v_.assign(params.size(), 0.0);
      t_ = 0;
    }
    ++t_;
    const double c1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
      m_[i] = b1_ * m_[i] + (1.0 - b1_) * grad[i];
      v_[i] = b2_ * v_[i] + (1.0 - b2_) * grad[i] * grad[i];
      params[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
    }
  }

 private:
  double lr_, b1_, b2_, eps_;
  std::vector<double> m_, v_;
  long t_ = 0;
};

}  // namespace ugvrl
