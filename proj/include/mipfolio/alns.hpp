/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <mipfolio/bandit.hpp>
#include <mipfolio/clock.hpp>
#include <mipfolio/configspace.hpp>
#include <mipfolio/metrics.hpp>
#include <mipfolio/model.hpp>
#include <mipfolio/subsolver.hpp>

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stop_token>
#include <string>
#include <vector>

namespace mipfolio {

inline constexpr std::size_t kArchiveCapacity   = 20;
inline constexpr std::size_t kRepairNodeLimit   = 5000;
inline constexpr double kInitialPhaseCap        = 60.0;
inline constexpr double kInitialPhaseFraction   = 0.2;

/// Repair budget per iteration: wall_seconds / 60 clamped to [0.5, 30].
double repair_seconds(double wall_seconds);

struct IterationRecord {
  std::size_t iteration = 0;
  std::size_t arm       = 0;
  Outcome outcome       = Outcome::reject;
  double current        = 0.0;  // objective after the iteration
  double best           = 0.0;
};

struct WorkerOptions {
  double wall_seconds = 0.0;
  std::uint64_t seed  = 0;
  Clock* clock        = nullptr;  // a fresh WallClock when null
  std::stop_token stop;
  Backend* backend = nullptr;  // the reference backend when null
  int thread_hint  = 1;
  /// Best-known objective for the gap trace; the worker's own best if unset.
  std::optional<double> reference_objective;
  std::function<void(const ObjectiveEvent&)> on_best;
  std::function<void(const IterationRecord&)> on_iteration;
};

enum class WorkerStatus { completed, no_feasible_solution };

std::string_view to_string(WorkerStatus status);

struct WorkerResult {
  std::string config_id;
  WorkerStatus status = WorkerStatus::completed;
  std::optional<Solution> best;
  std::vector<ObjectiveEvent> events;  // one per new global best, relative time
  GapTrace trace;
  std::size_t iterations = 0;
  std::vector<std::size_t> pulls;                    // per arm
  std::vector<std::array<std::size_t, 4>> outcomes;  // per arm, indexed by Outcome
};

/// Adaptive LNS loop: first feasible solution, then select an operator,
/// destroy, repair with the backend, accept and learn until the wall budget
/// runs out. Times are measured from the call.
WorkerResult run_worker(const MipModel& model, const Configuration& config, const WorkerOptions& options);

}  // namespace mipfolio
