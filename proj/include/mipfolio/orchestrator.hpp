/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <mipfolio/alns.hpp>
#include <mipfolio/configspace.hpp>
#include <mipfolio/metrics.hpp>
#include <mipfolio/model.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mipfolio {

/// N workers with T reserved threads each; N * T may not exceed core_cap.
struct PortfolioPlan {
  std::vector<Configuration> configs;
  std::size_t threads_per_worker = 1;
  std::size_t core_cap           = 1;
  double wall_seconds            = 0.0;
  std::uint64_t master_seed      = 0;

  /// Throws Errc::plan_invalid.
  void validate() const;
};

/// N = min(core_cap / T, number of candidates), taking configurations in
/// `ranking` order when given (ids must exist in the pool), pool order
/// otherwise.
PortfolioPlan plan_for_threads(const std::vector<Configuration>& pool,
                               std::size_t threads_per_worker,
                               std::size_t core_cap,
                               const std::optional<std::vector<std::string>>& ranking = std::nullopt,
                               double wall_seconds                                    = 0.0,
                               std::uint64_t master_seed                              = 0);

enum class ClockMode { wall, simulated };

struct PortfolioOptions {
  ClockMode clock         = ClockMode::simulated;
  double seconds_per_tick = 0.01;
  /// Run simulated-clock workers on OpenMP threads. Results match the serial
  /// run exactly; wall-clock workers always run concurrently.
  bool parallel       = false;
  std::string backend = "reference";
};

struct PortfolioResult {
  std::vector<WorkerResult> workers;  // plan order
  GapTrace aggregate;
  std::string best_config_id;
  double reference_objective = 0.0;

  const WorkerResult& worker(const std::string& config_id) const;
};

/// Seed of the worker running `config_id` under `master_seed`.
std::uint64_t worker_seed(std::uint64_t master_seed, const std::string& config_id);

/// Runs every worker and aggregates their gap traces by pointwise minimum.
/// Without a reference objective the best objective found by any worker is
/// used. Throws Errc::plan_invalid and Errc::all_workers_infeasible.
PortfolioResult run_portfolio(const MipModel& model,
                              const PortfolioPlan& plan,
                              std::optional<double> reference_objective = std::nullopt,
                              const PortfolioOptions& options           = {});

}  // namespace mipfolio
