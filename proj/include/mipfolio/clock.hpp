/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <chrono>
#include <cstdint>

namespace mipfolio {

/// Time source shared by the search layers. `tick()` marks one unit of
/// search work (a branch-and-bound node or an LNS iteration).
class Clock {
 public:
  virtual ~Clock() = default;
  virtual double now() const = 0;
  virtual void tick() {}
};

class WallClock final : public Clock {
 public:
  using time_point = std::chrono::steady_clock::time_point;

  WallClock() : start_(std::chrono::steady_clock::now()) {}
  explicit WallClock(time_point start) : start_(start) {}

  double now() const override
  {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  time_point start_;
};

/// Virtual time advanced only by work ticks, so runs are reproducible.
class SimulatedClock final : public Clock {
 public:
  explicit SimulatedClock(double seconds_per_tick = 0.01) : seconds_per_tick_(seconds_per_tick) {}

  double now() const override { return static_cast<double>(ticks_) * seconds_per_tick_; }
  void tick() override { ++ticks_; }

  std::uint64_t ticks() const { return ticks_; }
  double seconds_per_tick() const { return seconds_per_tick_; }

 private:
  double seconds_per_tick_;
  std::uint64_t ticks_ = 0;
};

}  // namespace mipfolio
