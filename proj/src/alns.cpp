/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <mipfolio/alns.hpp>

#include <mipfolio/error.hpp>
#include <mipfolio/lp.hpp>
#include <mipfolio/operators.hpp>

#include <algorithm>
#include <cmath>
#include <deque>

namespace mipfolio {

namespace {

double improve_tol(double v) { return 1e-9 * std::max(1.0, std::abs(v)); }

}  // namespace

double repair_seconds(double wall_seconds) { return std::clamp(wall_seconds / 60.0, 0.5, 30.0); }

std::string_view to_string(WorkerStatus status)
{
  return status == WorkerStatus::completed ? "Completed" : "NoFeasibleSolution";
}

WorkerResult run_worker(const MipModel& model, const Configuration& config, const WorkerOptions& options)
{
  if (!(options.wall_seconds > 0.0) || !std::isfinite(options.wall_seconds)) {
    fail(Errc::invalid_argument, "worker wall_seconds must be finite and > 0");
  }
  if (config.destroy_ops.empty()) { fail(Errc::invalid_config, "configuration has no destroy operators"); }
  config.policy.validate();
  config.acceptance.validate();

  WallClock own_clock;
  Clock& clock = options.clock ? *options.clock : own_clock;
  ReferenceBackend own_backend;
  Backend& backend = options.backend ? *options.backend : own_backend;

  const double t0       = clock.now();
  const double deadline = t0 + options.wall_seconds;
  auto elapsed          = [&] { return clock.now() - t0; };

  WorkerResult out;
  out.config_id = config.id;
  out.pulls.assign(config.destroy_ops.size(), 0);
  out.outcomes.assign(config.destroy_ops.size(), {0, 0, 0, 0});

  SolveControl control;
  control.clock = &clock;
  control.stop  = options.stop;

  SolveBudget first;
  first.wall_seconds = std::min(kInitialPhaseFraction * options.wall_seconds, kInitialPhaseCap);
  first.thread_hint  = options.thread_hint;
  const MipResult init = backend.find_first_feasible(model, first, mix_seed(options.seed, 0), control);
  if (!init.incumbent) {
    out.status = WorkerStatus::no_feasible_solution;
    out.trace  = GapTrace({}, options.wall_seconds);
    return out;
  }

  Solution current = *init.incumbent;
  Solution best    = current;
  std::deque<Solution> archive{current};

  auto record_best = [&] {
    const ObjectiveEvent ev{std::min(elapsed(), options.wall_seconds), best.objective};
    out.events.push_back(ev);
    if (options.on_best) { options.on_best(ev); }
  };
  record_best();

  const auto relaxation = lp::solve_lp(model);
  std::optional<std::span<const double>> lp_values;
  if (relaxation.status == lp::Status::optimal) { lp_values = std::span<const double>(relaxation.values); }

  Rng rng(options.seed);
  PolicyState policy(config.policy, config.destroy_ops.size());
  AcceptanceCriterion acceptance = config.acceptance;

  while (!options.stop.stop_requested() && clock.now() < deadline) {
    clock.tick();
    ++out.iterations;
    const std::size_t arm = policy.select_arm(rng);
    Outcome outcome       = Outcome::reject;
    std::optional<Solution> accepted;

    try {
      const std::vector<Solution> snapshot(archive.begin(), archive.end());
      const OperatorContext ctx{current, snapshot, lp_values, rng};
      const NeighborhoodSpec spec = build_neighborhood(config.destroy_ops[arm], ctx, model);
      const MipModel sub          = apply_neighborhood(model, spec);

      std::optional<Solution> warm;
      if (evaluate(sub, current.values).feasible) { warm = current; }

      SolveBudget budget;
      budget.wall_seconds = std::max(0.0, std::min(repair_seconds(options.wall_seconds), deadline - clock.now()));
      budget.node_limit   = kRepairNodeLimit;
      budget.thread_hint  = options.thread_hint;
      const MipResult res = backend.solve_mip(sub, warm, budget, mix_seed(options.seed, out.iterations), control);

      if (res.incumbent) {
        Solution cand = evaluate(model, res.incumbent->values);
        if (cand.feasible && cand.integral) {
          const double c   = model.to_min(cand.objective);
          const double cur = model.to_min(current.objective);
          const double b   = model.to_min(best.objective);
          const bool ok    = acceptance.accept(c, cur, rng);
          if (c < b - improve_tol(b)) {
            outcome = Outcome::best;
          } else if (c < cur - improve_tol(cur)) {
            outcome = Outcome::better;
          } else if (ok) {
            outcome = Outcome::accept;
          }
          if (outcome != Outcome::reject) { accepted = std::move(cand); }
        }
      }
    } catch (const Error& e) {
      if (e.code() != Errc::empty_neighborhood && e.code() != Errc::missing_relaxation) { throw; }
    }

    policy.update(arm, outcome, config.rewards);
    ++out.outcomes[arm][static_cast<std::size_t>(outcome)];
    if (accepted) {
      current = *accepted;
      archive.push_back(current);
      if (archive.size() > kArchiveCapacity) { archive.pop_front(); }
      if (outcome == Outcome::best) {
        best = current;
        record_best();
      }
    }
    if (options.on_iteration) {
      options.on_iteration(IterationRecord{out.iterations, arm, outcome, current.objective, best.objective});
    }
  }

  for (std::size_t i = 0; i < out.pulls.size(); ++i) { out.pulls[i] = policy.arm(i).pulls; }
  out.best = best;
  const double ref = options.reference_objective.value_or(best.objective);
  out.trace        = make_trace(out.events, ref, options.wall_seconds);
  return out;
}

}  // namespace mipfolio
