/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <mipfolio/subsolver.hpp>

#include <mipfolio/error.hpp>
#include <mipfolio/lp.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace mipfolio {

void SolveBudget::validate() const
{
  if (std::isnan(wall_seconds) || wall_seconds < 0.0) {
    fail(Errc::invalid_argument, "wall_seconds must be >= 0");
  }
  if (!std::isfinite(wall_seconds) && !node_limit) {
    fail(Errc::invalid_argument, "budget needs a finite wall_seconds or a node_limit");
  }
  if (!(gap_limit >= 0.0)) { fail(Errc::invalid_argument, "gap_limit must be >= 0"); }
  if (thread_hint < 1) { fail(Errc::invalid_argument, "thread_hint must be >= 1"); }
}

namespace {

struct Node {
  std::vector<double> lower;
  std::vector<double> upper;
  double bound;  // parent LP value, minimization form
  std::size_t id;
};

double prune_tol(double incumbent) { return 1e-9 * std::max(1.0, std::abs(incumbent)); }

class BranchAndBound {
 public:
  BranchAndBound(const MipModel& model, const SolveBudget& budget, const SolveControl& control, bool first_only)
    : model_(model), budget_(budget), control_(control), first_only_(first_only)
  {
    if (control_.clock == nullptr) { control_.clock = &own_clock_; }
  }

  MipResult run(const std::optional<Solution>& warm_start)
  {
    budget_.validate();
    Clock& clock   = *control_.clock;
    const double t0 = clock.now();
    const auto integral = model_.integral_variables();

    if (warm_start) {
      if (warm_start->values.size() != model_.num_variables()) {
        fail(Errc::dimension_mismatch, "warm start has the wrong dimension");
      }
      Solution s = evaluate(model_, warm_start->values);
      if (s.feasible && s.integral) { incumbent_ = std::move(s); }
    }

    std::vector<Node> open;
    {
      Node root;
      for (const auto& v : model_.variables()) {
        root.lower.push_back(v.lower);
        root.upper.push_back(v.upper);
      }
      root.bound = -kInf;
      root.id    = next_id_++;
      open.push_back(std::move(root));
    }

    bool limit_hit  = false;
    bool incomplete = false;
    bool gap_closed = false;
    bool stopped_at_first = false;
    std::size_t nodes = 0;

    while (!open.empty()) {
      if (control_.stop.stop_requested() || clock.now() - t0 >= budget_.wall_seconds ||
          (budget_.node_limit && nodes >= *budget_.node_limit)) {
        limit_hit = true;
        break;
      }
      if (incumbent_) {
        const double lb = lowest_bound(open);
        const double inc = inc_value();
        if (inc - lb <= budget_.gap_limit * std::max(std::abs(inc), 1e-10)) {
          gap_closed = true;
          closed_bound_ = std::min(lb, inc);
          break;
        }
      }

      Node node = take_next(open);
      if (incumbent_ && node.bound >= inc_value() - prune_tol(inc_value())) { continue; }

      clock.tick();
      ++nodes;
      const auto lp = lp::solve_lp(model_, node.lower, node.upper, lp::default_iteration_limit(model_));
      if (lp.status == lp::Status::infeasible) { continue; }
      if (lp.status != lp::Status::optimal) {
        incomplete = true;
        continue;
      }
      const double obj = model_.to_min(lp.objective);
      if (incumbent_ && obj >= inc_value() - prune_tol(inc_value())) { continue; }

      std::size_t branch_var = SIZE_MAX;
      double best_frac       = kIntegralityTol;
      for (std::size_t j : integral) {
        const double v    = lp.values[j];
        const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
        if (frac > best_frac + 1e-12) {
          best_frac  = frac;
          branch_var = j;
        }
      }

      if (branch_var == SIZE_MAX) {
        std::vector<double> x = lp.values;
        for (std::size_t j : integral) { x[j] = std::round(x[j]); }
        Solution cand = evaluate(model_, x);
        if (!(cand.feasible && cand.integral)) {
          cand = evaluate(model_, lp.values);
          if (!(cand.feasible && cand.integral)) {
            incomplete = true;
            continue;
          }
        }
        if (!incumbent_ || model_.to_min(cand.objective) < inc_value() - prune_tol(inc_value())) {
          incumbent_ = std::move(cand);
          if (control_.on_incumbent) { control_.on_incumbent(*incumbent_); }
          if (first_only_) {
            stopped_at_first = true;
            break;
          }
        }
        continue;
      }

      const double v  = lp.values[branch_var];
      Node down{node.lower, node.upper, obj, 0};
      Node up{std::move(node.lower), std::move(node.upper), obj, 0};
      down.upper[branch_var] = std::floor(v);
      up.lower[branch_var]   = std::ceil(v);
      const bool up_first    = v - std::floor(v) >= 0.5;
      Node& preferred = up_first ? up : down;
      Node& other     = up_first ? down : up;
      preferred.id    = next_id_++;
      other.id        = next_id_++;
      // LIFO pops the preferred child next; best-first ties favor lower ids.
      open.push_back(std::move(other));
      open.push_back(std::move(preferred));
    }

    MipResult res;
    res.nodes   = nodes;
    res.elapsed = clock.now() - t0;
    res.incumbent = incumbent_;

    double dual;
    if (stopped_at_first) {
      const bool proven = open.empty() && !incomplete;
      res.status        = proven ? MipStatus::optimal : MipStatus::feasible;
      dual = proven ? inc_value() : incomplete ? -kInf : std::min(lowest_bound(open), inc_value());
    } else if (gap_closed) {
      dual       = closed_bound_;
      res.status = MipStatus::optimal;
    } else if (limit_hit || incomplete) {
      dual       = incomplete ? -kInf : lowest_bound(open);
      if (incumbent_) { dual = std::min(dual, inc_value()); }
      res.status = incumbent_ ? MipStatus::feasible : MipStatus::unknown;
    } else {
      // tree exhausted
      dual       = incumbent_ ? inc_value() : kInf;
      res.status = incumbent_ ? MipStatus::optimal : MipStatus::infeasible;
    }
    res.dual_bound = model_.to_min(dual);  // to_min is its own inverse
    return res;
  }

 private:
  double inc_value() const { return model_.to_min(incumbent_->objective); }

  static double lowest_bound(const std::vector<Node>& open)
  {
    double lb = kInf;
    for (const auto& n : open) { lb = std::min(lb, n.bound); }
    return lb;
  }

  Node take_next(std::vector<Node>& open) const
  {
    std::size_t pick = open.size() - 1;
    if (incumbent_) {
      for (std::size_t i = 0; i < open.size(); ++i) {
        const auto& a = open[i];
        const auto& b = open[pick];
        if (a.bound < b.bound || (a.bound == b.bound && a.id < b.id)) { pick = i; }
      }
    }
    Node out = std::move(open[pick]);
    open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
    return out;
  }

  const MipModel& model_;
  SolveBudget budget_;
  SolveControl control_;
  bool first_only_;
  WallClock own_clock_;
  std::optional<Solution> incumbent_;
  std::size_t next_id_  = 0;
  double closed_bound_  = -kInf;
};

}  // namespace

MipResult ReferenceBackend::solve_mip(const MipModel& model,
                                      const std::optional<Solution>& warm_start,
                                      const SolveBudget& budget,
                                      std::uint64_t /*seed*/,
                                      const SolveControl& control)
{
  return BranchAndBound(model, budget, control, false).run(warm_start);
}

MipResult ReferenceBackend::find_first_feasible(const MipModel& model,
                                                const SolveBudget& budget,
                                                std::uint64_t /*seed*/,
                                                const SolveControl& control)
{
  return BranchAndBound(model, budget, control, true).run(std::nullopt);
}

std::unique_ptr<Backend> make_backend(std::string_view name)
{
  if (name == "reference") { return std::make_unique<ReferenceBackend>(); }
  fail(Errc::invalid_argument, "unknown backend '" + std::string(name) + "'");
}

MipResult solve_mip(const MipModel& model,
                    const std::optional<Solution>& warm_start,
                    const SolveBudget& budget,
                    std::uint64_t seed,
                    const SolveControl& control)
{
  return ReferenceBackend{}.solve_mip(model, warm_start, budget, seed, control);
}

MipResult find_first_feasible(const MipModel& model,
                              const SolveBudget& budget,
                              std::uint64_t seed,
                              const SolveControl& control)
{
  return ReferenceBackend{}.find_first_feasible(model, budget, seed, control);
}

std::string_view to_string(MipStatus status)
{
  switch (status) {
    case MipStatus::optimal: return "Optimal";
    case MipStatus::feasible: return "Feasible";
    case MipStatus::infeasible: return "Infeasible";
    case MipStatus::unknown: return "Unknown";
  }
  return "Unknown";
}

}  // namespace mipfolio
