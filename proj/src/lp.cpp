/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <mipfolio/lp.hpp>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>

namespace mipfolio::lp {

namespace {

constexpr double kPivotTol   = 1e-9;
constexpr double kCostTol    = 1e-9;
constexpr double kDegenerate = 1e-12;
constexpr double kPhase1Tol  = 1e-7;
// Switch to Bland's rule after this many degenerate pivots.
constexpr std::size_t kBlandAfter = 1000;

enum class At : std::uint8_t { basic, lower, upper, zero };

/// Bounded-variable primal simplex on a dense tableau.
///
/// Every row is turned into an equality with a bounded slack. Fixed
/// structural variables are substituted into the right-hand side. Rows whose
/// slack cannot absorb the initial residual receive an artificial, and phase 1
/// minimizes the artificial sum. The slack block of the tableau is B^-1, which
/// is used to recompute basic values from scratch at the end of each phase.
class Simplex {
 public:
  Simplex(const MipModel& model, std::span<const double> lower, std::span<const double> upper)
    : model_(model), lower_(lower), upper_(upper)
  {
  }

  LpResult run(std::size_t limit)
  {
    LpResult res;
    if (!build()) {
      res.status = Status::infeasible;
      return res;
    }
    limit_ = limit;

    if (num_art_ > 0) {
      std::fill(cost_.begin(), cost_.end(), 0.0);
      for (std::size_t j = art_begin_; j < ncols_; ++j) { cost_[j] = 1.0; }
      const Status s1 = iterate();
      res.iterations = iters_;
      if (s1 == Status::iteration_limit) {
        res.status = s1;
        return res;
      }
      refresh_basic_values();
      double infeas = 0.0;
      for (std::size_t j = art_begin_; j < ncols_; ++j) { infeas += std::abs(x_[j]); }
      if (infeas > kPhase1Tol) {
        res.status = Status::infeasible;
        return res;
      }
      retire_artificials();
    }

    std::fill(cost_.begin(), cost_.end(), 0.0);
    for (std::size_t k = 0; k < ns_; ++k) { cost_[k] = min_cost_[struct_var_[k]]; }
    const Status s2 = iterate();
    res.iterations = iters_;
    if (s2 != Status::optimal) {
      res.status = s2;
      return res;
    }
    refresh_basic_values();

    const std::size_t n = model_.num_variables();
    res.values.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (col_of_var_[j] == SIZE_MAX) {
        res.values[j] = lower_[j];
      } else {
        double v = x_[col_of_var_[j]];
        // Snap tiny bound violations left by floating-point drift.
        if (v < lower_[j] && v > lower_[j] - 1e-7) { v = lower_[j]; }
        if (v > upper_[j] && v < upper_[j] + 1e-7) { v = upper_[j]; }
        res.values[j] = v;
      }
    }
    for (const auto& c : model_.constraints()) {
      const double a = c.activity(res.values);
      const bool ok = c.relation == Relation::le   ? a <= c.rhs + kFeasibilityTol
                      : c.relation == Relation::ge ? a >= c.rhs - kFeasibilityTol
                                                   : std::abs(a - c.rhs) <= kFeasibilityTol;
      if (!ok) {
        // Accumulated drift; report as a numerical failure.
        res.values.clear();
        res.status = Status::iteration_limit;
        return res;
      }
    }
    res.objective = model_.objective().value(res.values);
    res.status = Status::optimal;
    return res;
  }

 private:
  double& tab(std::size_t i, std::size_t j) { return tab_[i * ncols_ + j]; }
  double tab(std::size_t i, std::size_t j) const { return tab_[i * ncols_ + j]; }

  bool build()
  {
    const std::size_t n = model_.num_variables();
    const auto& rows    = model_.constraints();
    m_                  = rows.size();
    min_cost_           = model_.min_costs();

    col_of_var_.assign(n, SIZE_MAX);
    for (std::size_t j = 0; j < n; ++j) {
      const double lo = lower_[j];
      const double up = upper_[j];
      if (lo > up + kBoundTol || lo == kInf || up == -kInf) { return false; }
      if (up - lo > kBoundTol) {
        col_of_var_[j] = struct_var_.size();
        struct_var_.push_back(j);
      }
    }
    ns_ = struct_var_.size();

    // rhs after substituting fixed variables, and the initial residual with
    // every structural column at its starting bound
    std::vector<double> start(ns_);
    for (std::size_t k = 0; k < ns_; ++k) {
      const std::size_t j = struct_var_[k];
      start[k] = std::isfinite(lower_[j]) ? lower_[j] : std::isfinite(upper_[j]) ? upper_[j] : 0.0;
    }
    b_.assign(m_, 0.0);
    std::vector<double> residual(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      double rhs = rows[i].rhs;
      double act = 0.0;
      for (const auto& t : rows[i].terms) {
        const std::size_t k = col_of_var_[t.var];
        if (k == SIZE_MAX) {
          rhs -= t.coef * lower_[t.var];
        } else {
          act += t.coef * start[k];
        }
      }
      b_[i]       = rhs;
      residual[i] = rhs - act;
    }

    std::vector<double> slack_lo(m_), slack_up(m_);
    std::vector<double> art_sign(m_, 0.0);
    num_art_ = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      switch (rows[i].relation) {
        case Relation::le: slack_lo[i] = 0.0, slack_up[i] = kInf; break;
        case Relation::ge: slack_lo[i] = -kInf, slack_up[i] = 0.0; break;
        case Relation::eq: slack_lo[i] = 0.0, slack_up[i] = 0.0; break;
      }
      const double r = residual[i];
      if (r < slack_lo[i] - kPivotTol || r > slack_up[i] + kPivotTol) {
        art_sign[i] = r - (r < slack_lo[i] ? slack_lo[i] : slack_up[i]) > 0.0 ? 1.0 : -1.0;
        ++num_art_;
      }
    }

    art_begin_ = ns_ + m_;
    ncols_     = art_begin_ + num_art_;
    tab_.assign(m_ * ncols_, 0.0);
    lo_.assign(ncols_, 0.0);
    up_.assign(ncols_, 0.0);
    x_.assign(ncols_, 0.0);
    state_.assign(ncols_, At::lower);
    cost_.assign(ncols_, 0.0);
    basis_.assign(m_, 0);
    art_row_sign_.assign(m_, 0.0);
    art_col_.assign(m_, SIZE_MAX);

    for (std::size_t k = 0; k < ns_; ++k) {
      const std::size_t j = struct_var_[k];
      lo_[k]              = lower_[j];
      up_[k]              = upper_[j];
      x_[k]               = start[k];
      state_[k] = std::isfinite(lo_[k]) ? At::lower : std::isfinite(up_[k]) ? At::upper : At::zero;
    }

    std::size_t art = art_begin_;
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t s = ns_ + i;
      lo_[s]              = slack_lo[i];
      up_[s]              = slack_up[i];
      const double sigma  = art_sign[i] != 0.0 ? art_sign[i] : 1.0;
      for (const auto& t : rows[i].terms) {
        const std::size_t k = col_of_var_[t.var];
        if (k != SIZE_MAX) { tab(i, k) = sigma * t.coef; }
      }
      tab(i, s) = sigma;
      if (art_sign[i] == 0.0) {
        basis_[i] = s;
        state_[s] = At::basic;
        x_[s]     = std::clamp(residual[i], slack_lo[i], slack_up[i]);
      } else {
        const bool below = residual[i] < slack_lo[i];
        x_[s]            = below ? slack_lo[i] : slack_up[i];
        state_[s]        = below ? At::lower : At::upper;
        tab(i, art)      = 1.0;
        lo_[art]         = 0.0;
        up_[art]         = kInf;
        x_[art]          = std::abs(residual[i] - x_[s]);
        state_[art]      = At::basic;
        basis_[i]        = art;
        art_row_sign_[i] = sigma;
        art_col_[i]      = art;
        ++art;
      }
    }
    return true;
  }

  Status iterate()
  {
    std::vector<double> d(ncols_);
    for (;;) {
      if (iters_ >= limit_) { return Status::iteration_limit; }

      // reduced costs
      for (std::size_t j = 0; j < ncols_; ++j) { d[j] = cost_[j]; }
      for (std::size_t i = 0; i < m_; ++i) {
        const double cb = cost_[basis_[i]];
        if (cb == 0.0) { continue; }
        const double* row = &tab_[i * ncols_];
        for (std::size_t j = 0; j < ncols_; ++j) { d[j] -= cb * row[j]; }
      }

      std::size_t enter = SIZE_MAX;
      double dir        = 0.0;
      double best       = 0.0;
      for (std::size_t j = 0; j < ncols_; ++j) {
        if (state_[j] == At::basic || up_[j] - lo_[j] <= 0.0) { continue; }
        double cand_dir = 0.0;
        if (state_[j] == At::lower && d[j] < -kCostTol) {
          cand_dir = 1.0;
        } else if (state_[j] == At::upper && d[j] > kCostTol) {
          cand_dir = -1.0;
        } else if (state_[j] == At::zero && std::abs(d[j]) > kCostTol) {
          cand_dir = d[j] < 0.0 ? 1.0 : -1.0;
        }
        if (cand_dir == 0.0) { continue; }
        if (bland_) {
          enter = j;
          dir   = cand_dir;
          break;
        }
        if (std::abs(d[j]) > best) {
          best  = std::abs(d[j]);
          enter = j;
          dir   = cand_dir;
        }
      }
      if (enter == SIZE_MAX) { return Status::optimal; }

      // ratio test
      double theta      = kInf;
      std::size_t leave = SIZE_MAX;
      double leave_alpha = 0.0;
      if (std::isfinite(lo_[enter]) && std::isfinite(up_[enter])) { theta = up_[enter] - lo_[enter]; }
      for (std::size_t i = 0; i < m_; ++i) {
        const double alpha = dir * tab(i, enter);
        const std::size_t b = basis_[i];
        double t;
        if (alpha > kPivotTol) {
          if (!std::isfinite(lo_[b])) { continue; }
          t = std::max(0.0, (x_[b] - lo_[b]) / alpha);
        } else if (alpha < -kPivotTol) {
          if (!std::isfinite(up_[b])) { continue; }
          t = std::max(0.0, (up_[b] - x_[b]) / -alpha);
        } else {
          continue;
        }
        bool take;
        if (t < theta - kDegenerate) {
          take = true;
        } else if (t <= theta + kDegenerate && leave != SIZE_MAX) {
          take = bland_ ? b < basis_[leave] : std::abs(alpha) > std::abs(leave_alpha);
        } else {
          take = false;
        }
        if (take) {
          theta       = t;
          leave       = i;
          leave_alpha = alpha;
        }
      }
      if (!std::isfinite(theta)) { return Status::unbounded; }

      x_[enter] += dir * theta;
      for (std::size_t i = 0; i < m_; ++i) { x_[basis_[i]] -= dir * theta * tab(i, enter); }

      if (leave == SIZE_MAX) {
        state_[enter] = dir > 0.0 ? At::upper : At::lower;
        x_[enter]     = dir > 0.0 ? up_[enter] : lo_[enter];
      } else {
        const std::size_t out = basis_[leave];
        if (leave_alpha > 0.0) {
          state_[out] = At::lower;
          x_[out]     = lo_[out];
        } else {
          state_[out] = At::upper;
          x_[out]     = up_[out];
        }
        pivot(leave, enter);
      }

      if (theta <= kDegenerate && ++degenerate_ >= kBlandAfter) { bland_ = true; }
      ++iters_;
    }
  }

  void pivot(std::size_t r, std::size_t q)
  {
    double* prow    = &tab_[r * ncols_];
    const double pv = prow[q];
    for (std::size_t j = 0; j < ncols_; ++j) { prow[j] /= pv; }
    prow[q] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) { continue; }
      double* row     = &tab_[i * ncols_];
      const double f  = row[q];
      if (f == 0.0) { continue; }
      for (std::size_t j = 0; j < ncols_; ++j) { row[j] -= f * prow[j]; }
      row[q] = 0.0;
    }
    basis_[r]     = q;
    state_[q]     = At::basic;
  }

  /// x_B = B^-1 (b - N x_N), with B^-1 read off the slack columns.
  void refresh_basic_values()
  {
    const auto& rows = model_.constraints();
    std::vector<double> w = b_;
    for (std::size_t i = 0; i < m_; ++i) {
      for (const auto& t : rows[i].terms) {
        const std::size_t k = col_of_var_[t.var];
        if (k != SIZE_MAX && state_[k] != At::basic) { w[i] -= t.coef * x_[k]; }
      }
      const std::size_t s = ns_ + i;
      if (state_[s] != At::basic) { w[i] -= x_[s]; }
    }
    // artificial columns are sigma * e_row
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t a = art_col_[i];
      if (a != SIZE_MAX && state_[a] != At::basic) { w[i] -= art_row_sign_[i] * x_[a]; }
    }
    for (std::size_t r = 0; r < m_; ++r) {
      double v = 0.0;
      for (std::size_t i = 0; i < m_; ++i) { v += tab(r, ns_ + i) * w[i]; }
      x_[basis_[r]] = v;
    }
  }

  /// Fixes artificials at zero and pivots basic ones out where possible.
  /// A basic artificial that cannot leave marks a redundant row.
  void retire_artificials()
  {
    for (std::size_t j = art_begin_; j < ncols_; ++j) {
      lo_[j] = 0.0;
      up_[j] = 0.0;
      if (state_[j] != At::basic) {
        x_[j] = 0.0;
        state_[j] = At::lower;
      }
    }
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < art_begin_) { continue; }
      std::size_t best = SIZE_MAX;
      double mag       = 1e-7;
      for (std::size_t j = 0; j < art_begin_; ++j) {
        if (state_[j] == At::basic) { continue; }
        if (std::abs(tab(r, j)) > mag) {
          mag  = std::abs(tab(r, j));
          best = j;
        }
      }
      if (best == SIZE_MAX) { continue; }
      const std::size_t out = basis_[r];
      pivot(r, best);
      state_[out] = At::lower;
      x_[out]     = 0.0;
    }
    refresh_basic_values();
  }

  const MipModel& model_;
  std::span<const double> lower_;
  std::span<const double> upper_;

  std::size_t m_ = 0, ns_ = 0, ncols_ = 0, art_begin_ = 0, num_art_ = 0;
  std::vector<double> min_cost_;
  std::vector<std::size_t> struct_var_;
  std::vector<std::size_t> col_of_var_;
  std::vector<double> b_;
  std::vector<double> tab_;
  std::vector<double> lo_, up_, x_, cost_;
  std::vector<At> state_;
  std::vector<std::size_t> basis_;
  std::vector<double> art_row_sign_;
  std::vector<std::size_t> art_col_;

  std::size_t limit_      = 0;
  std::size_t iters_      = 0;
  std::size_t degenerate_ = 0;
  bool bland_             = false;
};

}  // namespace

std::size_t default_iteration_limit(const MipModel& model)
{
  return 50 * (model.num_variables() + model.num_constraints()) + 1000;
}

LpResult solve_lp(const MipModel& model, std::size_t iteration_limit)
{
  std::vector<double> lo, up;
  lo.reserve(model.num_variables());
  up.reserve(model.num_variables());
  for (const auto& v : model.variables()) {
    lo.push_back(v.lower);
    up.push_back(v.upper);
  }
  return solve_lp(model, lo, up, iteration_limit);
}

LpResult solve_lp(const MipModel& model) { return solve_lp(model, default_iteration_limit(model)); }

LpResult solve_lp(const MipModel& model,
                  std::span<const double> lower,
                  std::span<const double> upper,
                  std::size_t iteration_limit)
{
  assert(lower.size() == model.num_variables() && upper.size() == model.num_variables());
  return Simplex(model, lower, upper).run(iteration_limit);
}

std::string_view to_string(Status status)
{
  switch (status) {
    case Status::optimal: return "Optimal";
    case Status::infeasible: return "Infeasible";
    case Status::unbounded: return "Unbounded";
    case Status::iteration_limit: return "IterationLimit";
  }
  return "Unknown";
}

}  // namespace mipfolio::lp
