/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <mipfolio/model.hpp>

#include <cstddef>
#include <span>
#include <vector>

namespace mipfolio::lp {

enum class Status { optimal, infeasible, unbounded, iteration_limit };

struct LpResult {
  Status status = Status::iteration_limit;
  std::vector<double> values;  // empty unless optimal
  double objective = 0.0;      // model's own sense, including the offset
  std::size_t iterations = 0;
};

/// Default iteration cap scaled to the problem size.
std::size_t default_iteration_limit(const MipModel& model);

/// Solves the LP relaxation of `model` (integrality ignored).
LpResult solve_lp(const MipModel& model, std::size_t iteration_limit);
LpResult solve_lp(const MipModel& model);

/// Same relaxation with the variable bounds replaced by `lower`/`upper`.
/// Used by branch-and-bound to avoid rebuilding the model per node.
LpResult solve_lp(const MipModel& model,
                  std::span<const double> lower,
                  std::span<const double> upper,
                  std::size_t iteration_limit);

std::string_view to_string(Status status);

}  // namespace mipfolio::lp
