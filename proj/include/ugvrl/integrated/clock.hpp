#pragma once

#include <chrono>
#include <thread>

#include "ugvrl/core/errors.hpp"

namespace ugvrl {

/// Simulated mission time. Mission logic only ever reads the simulated time, so
/// outcomes do not depend on how (or whether) a clock paces against the wall.
class MissionClock {
 public:
  virtual ~MissionClock() = default;
  virtual double now() const = 0;
  virtual void advance(double dt) = 0;
};

/// Advances instantly.
class SteppedClock final : public MissionClock {
 public:
  double now() const override { return now_; }
  void advance(double dt) override { now_ += dt; }

 private:
  double now_ = 0.0;
};

/// Keeps simulated time at `scale` x wall-clock time (scale 1 is real time).
class PacedClock final : public MissionClock {
 public:
  explicit PacedClock(double scale) : scale_(scale), start_(std::chrono::steady_clock::now()) {
    if (!(scale >= 1.0)) throw ConfigError("clock_scale must be >= 1");
  }

  double now() const override { return now_; }

  void advance(double dt) override {
    now_ += dt;
    const auto wall = std::chrono::duration<double>(now_ / scale_);
    std::this_thread::sleep_until(start_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(wall));
  }

  double scale() const noexcept { return scale_; }

 private:
  double scale_;
  std::chrono::steady_clock::time_point start_;
  double now_ = 0.0;
};

}  // namespace ugvrl
