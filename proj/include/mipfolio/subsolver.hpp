/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <mipfolio/clock.hpp>
#include <mipfolio/model.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stop_token>
#include <string_view>

namespace mipfolio {

struct SolveBudget {
  double wall_seconds = kInf;
  std::optional<std::size_t> node_limit;
  double gap_limit = 1e-6;
  /// Threads reserved for the solve. The reference backend runs on one of
  /// them; the orchestrator still accounts for all of them.
  int thread_hint = 1;

  /// Throws Errc::invalid_argument unless at least one limit is finite and
  /// every field is in range.
  void validate() const;
};

enum class MipStatus { optimal, feasible, infeasible, unknown };

struct MipResult {
  MipStatus status = MipStatus::unknown;
  std::optional<Solution> incumbent;
  double dual_bound = -kInf;  // model's own sense
  std::size_t nodes = 0;
  double elapsed = 0.0;
};

/// Per-call plumbing: time source, cooperative cancellation (checked at node
/// boundaries) and an optional hook fired on every new incumbent.
struct SolveControl {
  Clock* clock = nullptr;  // a fresh WallClock when null
  std::stop_token stop;
  std::function<void(const Solution&)> on_incumbent;
};

/// Sub-MIP repair backend. Implementations must be safe to run concurrently
/// in separate workers and share no state between instances.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string_view name() const = 0;

  virtual MipResult solve_mip(const MipModel& model,
                              const std::optional<Solution>& warm_start,
                              const SolveBudget& budget,
                              std::uint64_t seed,
                              const SolveControl& control) = 0;

  /// Stops at the first integral feasible solution.
  virtual MipResult find_first_feasible(const MipModel& model,
                                        const SolveBudget& budget,
                                        std::uint64_t seed,
                                        const SolveControl& control) = 0;
};

/// LP-based branch-and-bound: most-fractional branching (ties to the lowest
/// index), depth-first plunging until the first incumbent, best-bound after.
/// Single-threaded and deterministic; the seed does not change its path.
class ReferenceBackend final : public Backend {
 public:
  std::string_view name() const override { return "reference"; }

  MipResult solve_mip(const MipModel& model,
                      const std::optional<Solution>& warm_start,
                      const SolveBudget& budget,
                      std::uint64_t seed,
                      const SolveControl& control) override;

  MipResult find_first_feasible(const MipModel& model,
                                const SolveBudget& budget,
                                std::uint64_t seed,
                                const SolveControl& control) override;
};

/// Backend by configuration name; "reference" is the only built-in.
std::unique_ptr<Backend> make_backend(std::string_view name);

MipResult solve_mip(const MipModel& model,
                    const std::optional<Solution>& warm_start,
                    const SolveBudget& budget,
                    std::uint64_t seed,
                    const SolveControl& control = {});

MipResult find_first_feasible(const MipModel& model,
                              const SolveBudget& budget,
                              std::uint64_t seed,
                              const SolveControl& control = {});

std::string_view to_string(MipStatus status);

}  // namespace mipfolio
