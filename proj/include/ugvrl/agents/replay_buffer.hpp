#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "ugvrl/core/errors.hpp"
#include "ugvrl/core/random.hpp"

namespace ugvrl {

struct Transition {
  std::size_t obs = 0;
  std::size_t action = 0;
  double reward = 0.0;
  std::size_t next_obs = 0;
  bool done = false;
};

/// Fixed-capacity ring; the oldest entry is evicted first. Sampling is uniform with replacement.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw ConfigError("replay buffer capacity must be positive");
    data_.reserve(std::min<std::size_t>(capacity, 1u << 16));
  }

  void push(const Transition& t) {
    if (data_.size() < capacity_) {
      data_.push_back(t);
    } else {
      data_[head_] = t;
    }
    head_ = (head_ + 1) % capacity_;
  }

  std::size_t size() const noexcept { return data_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  bool empty() const noexcept { return data_.empty(); }

  /// i-th oldest stored transition.
  const Transition& at(std::size_t i) const {
    if (i >= data_.size()) throw DomainError("replay index out of range");
    return data_[data_.size() < capacity_ ? i : (head_ + i) % capacity_];
  }

  std::vector<Transition> sample(std::size_t batch_size, Rng& rng) const {
    if (data_.empty()) throw DomainError("cannot sample from an empty replay buffer");
    std::uniform_int_distribution<std::size_t> pick(0, data_.size() - 1);
    std::vector<Transition> out;
    out.reserve(batch_size);
    for (std::size_t i = 0; i < batch_size; ++i) out.push_back(data_[pick(rng)]);
    return out;
  }

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;
  std::vector<Transition> data_;
};

}  // namespace ugvrl
