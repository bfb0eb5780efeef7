/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <mipfolio/orchestrator.hpp>

#include <mipfolio/error.hpp>
#include <mipfolio/subsolver.hpp>

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <memory>
#include <mutex>
#include <set>
#include <thread>

namespace mipfolio {

namespace {

/// The one synchronization point between workers: timestamped best-objective
/// updates tagged with the worker slot.
class Collector {
 public:
  explicit Collector(std::size_t workers) : events_(workers) {}

  void append(std::size_t worker, const ObjectiveEvent& ev)
  {
    std::lock_guard lock(mutex_);
    events_[worker].push_back(ev);
  }

  std::vector<ObjectiveEvent> take(std::size_t worker)
  {
    std::lock_guard lock(mutex_);
    return std::move(events_[worker]);
  }

 private:
  std::mutex mutex_;
  std::vector<std::vector<ObjectiveEvent>> events_;
};

}  // namespace

void PortfolioPlan::validate() const
{
  if (configs.empty()) { fail(Errc::plan_invalid, "a plan needs at least one configuration"); }
  if (threads_per_worker < 1) { fail(Errc::plan_invalid, "threads per worker must be >= 1"); }
  if (configs.size() * threads_per_worker > core_cap) {
    fail(Errc::plan_invalid, std::to_string(configs.size()) + " workers x " + std::to_string(threads_per_worker) +
                               " threads exceeds the core cap of " + std::to_string(core_cap));
  }
  if (!(wall_seconds > 0.0) || !std::isfinite(wall_seconds)) {
    fail(Errc::plan_invalid, "wall_seconds must be finite and > 0");
  }
  std::set<std::string> ids;
  for (const auto& c : configs) {
    if (!ids.insert(c.id).second) { fail(Errc::plan_invalid, "configuration id " + c.id + " appears twice"); }
    c.validate();
  }
}

PortfolioPlan plan_for_threads(const std::vector<Configuration>& pool,
                               std::size_t threads_per_worker,
                               std::size_t core_cap,
                               const std::optional<std::vector<std::string>>& ranking,
                               double wall_seconds,
                               std::uint64_t master_seed)
{
  if (pool.empty()) { fail(Errc::invalid_argument, "configuration pool is empty"); }
  if (threads_per_worker < 1) { fail(Errc::plan_invalid, "threads per worker must be >= 1"); }
  std::vector<Configuration> order;
  if (ranking) {
    for (const auto& id : *ranking) {
      auto it = std::find_if(pool.begin(), pool.end(), [&](const Configuration& c) { return c.id == id; });
      if (it == pool.end()) { fail(Errc::invalid_argument, "ranked id " + id + " is not in the pool"); }
      order.push_back(*it);
    }
  } else {
    order = pool;
  }
  const std::size_t n = std::min(core_cap / threads_per_worker, order.size());
  if (n == 0) { fail(Errc::plan_invalid, "core cap leaves room for no worker"); }
  order.resize(n);
  return PortfolioPlan{std::move(order), threads_per_worker, core_cap, wall_seconds, master_seed};
}

const WorkerResult& PortfolioResult::worker(const std::string& config_id) const
{
  for (const auto& w : workers) {
    if (w.config_id == config_id) { return w; }
  }
  fail(Errc::invalid_argument, "no worker ran " + config_id);
}

std::uint64_t worker_seed(std::uint64_t master_seed, const std::string& config_id)
{
  return mix_seed(master_seed, hash_text(config_id));
}

PortfolioResult run_portfolio(const MipModel& model,
                              const PortfolioPlan& plan,
                              std::optional<double> reference_objective,
                              const PortfolioOptions& options)
{
  plan.validate();
  make_backend(options.backend);  // reject unknown names before launching anything
  const std::size_t n = plan.configs.size();

  Collector collector(n);
  std::vector<WorkerResult> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::stop_source stop;
  const auto start = std::chrono::steady_clock::now();

  auto run_one = [&](std::size_t i) {
    try {
      const auto& cfg = plan.configs[i];
      std::unique_ptr<Clock> clock;
      if (options.clock == ClockMode::simulated) {
        clock = std::make_unique<SimulatedClock>(options.seconds_per_tick);
      } else {
        clock = std::make_unique<WallClock>(start);
      }
      auto backend = make_backend(options.backend);
      WorkerOptions wo;
      wo.wall_seconds = plan.wall_seconds;
      wo.seed         = worker_seed(plan.master_seed, cfg.id);
      wo.clock        = clock.get();
      wo.stop         = stop.get_token();
      wo.backend      = backend.get();
      wo.thread_hint  = static_cast<int>(plan.threads_per_worker);
      wo.on_best      = [&collector, i](const ObjectiveEvent& ev) { collector.append(i, ev); };
      results[i]      = run_worker(model, cfg, wo);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  if (options.clock == ClockMode::wall) {
    // watchdog: cancel every worker once the wall budget has passed
    std::mutex m;
    std::condition_variable_any cv;
    std::jthread watchdog([&](std::stop_token quit) {
      std::unique_lock lock(m);
      cv.wait_for(lock, quit, std::chrono::duration<double>(plan.wall_seconds), [] { return false; });
      stop.request_stop();
    });
#pragma omp parallel for schedule(static, 1) num_threads(static_cast<int>(n))
    for (std::size_t i = 0; i < n; ++i) { run_one(i); }
    watchdog.request_stop();
  } else if (options.parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = 0; i < n; ++i) { run_one(i); }
  } else {
    for (std::size_t i = 0; i < n; ++i) { run_one(i); }
  }

  for (const auto& e : errors) {
    if (e) { std::rethrow_exception(e); }
  }
  if (std::all_of(results.begin(), results.end(),
                  [](const WorkerResult& r) { return r.status == WorkerStatus::no_feasible_solution; })) {
    fail(Errc::all_workers_infeasible, "no worker found a feasible solution");
  }

  PortfolioResult out;
  if (reference_objective) {
    out.reference_objective = *reference_objective;
  } else {
    bool have = false;
    for (const auto& r : results) {
      if (r.best && (!have || model.to_min(r.best->objective) < model.to_min(out.reference_objective))) {
        out.reference_objective = r.best->objective;
        have                    = true;
      }
    }
  }

  std::vector<GapTrace> traces;
  for (std::size_t i = 0; i < n; ++i) {
    const auto events = collector.take(i);
    results[i].trace  = make_trace(events, out.reference_objective, plan.wall_seconds);
    traces.push_back(results[i].trace);
  }
  out.aggregate = aggregate_min(traces);

  // lowest final gap, reached earliest, then plan order
  std::size_t best = 0;
  auto reached     = [&](std::size_t i) {
    const auto& pts = results[i].trace.points();
    return pts.empty() ? plan.wall_seconds : pts.back().t;
  };
  for (std::size_t i = 1; i < n; ++i) {
    const double gi = results[i].trace.final_gap();
    const double gb = results[best].trace.final_gap();
    if (gi < gb || (gi == gb && reached(i) < reached(best))) { best = i; }
  }
  out.best_config_id = results[best].config_id;
  out.workers        = std::move(results);
  return out;
}

}  // namespace mipfolio
