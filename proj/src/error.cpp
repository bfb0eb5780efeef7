/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <mipfolio/error.hpp>

namespace mipfolio {

std::string_view to_string(Errc code)
{
  switch (code) {
    case Errc::malformed_section: return "MalformedSection";
    case Errc::duplicate_name: return "DuplicateName";
    case Errc::dangling_reference: return "DanglingReference";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::conflicting_fixing: return "ConflictingFixing";
    case Errc::invalid_model: return "InvalidModel";
    case Errc::missing_relaxation: return "MissingRelaxation";
    case Errc::empty_neighborhood: return "EmptyNeighborhood";
    case Errc::non_binary_reward_for_thompson: return "NonBinaryRewardForThompson";
    case Errc::invalid_config: return "InvalidConfig";
    case Errc::pool_exhausted: return "PoolExhausted";
    case Errc::plan_invalid: return "PlanInvalid";
    case Errc::all_workers_infeasible: return "AllWorkersInfeasible";
    case Errc::no_feasible_solution: return "NoFeasibleSolution";
    case Errc::horizon_mismatch: return "HorizonMismatch";
    case Errc::not_rectangular: return "NotRectangular";
    case Errc::too_many_subsets: return "TooManySubsets";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::io_error: return "IoError";
  }
  return "Unknown";
}

void fail(Errc code, const std::string& message)
{
  throw Error(code, std::string(to_string(code)) + ": " + message);
}

}  // namespace mipfolio
