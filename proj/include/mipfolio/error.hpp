/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mipfolio {

enum class Errc {
  malformed_section,
  duplicate_name,
  dangling_reference,
  dimension_mismatch,
  conflicting_fixing,
  invalid_model,
  missing_relaxation,
  empty_neighborhood,
  non_binary_reward_for_thompson,
  invalid_config,
  pool_exhausted,
  plan_invalid,
  all_workers_infeasible,
  no_feasible_solution,
  horizon_mismatch,
  not_rectangular,
  too_many_subsets,
  invalid_argument,
  io_error,
};

std::string_view to_string(Errc code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& message);

}  // namespace mipfolio
