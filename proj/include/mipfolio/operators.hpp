/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <mipfolio/model.hpp>
#include <mipfolio/rng.hpp>

#include <array>
#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mipfolio {

/// Destroy-operator families. Each builds a restricted sub-MIP around the
/// incumbent; the repair step re-solves it.
///
///  - crossover: fix integer variables on which the incumbent and a random
///    archived solution agree.
///  - mutation: free a random p% of the integer variables, fix the rest.
///  - local branching: Hamming-distance ball of radius p% around the
///    incumbent over the binaries (Fischetti and Lodi, 2003).
///  - proximity: objective cutoff of p% below the incumbent, minimizing the
///    Hamming distance to it (Fischetti and Monaci, 2014).
///  - rens: fix integers whose LP value is integral, restrict fractional
///    ones to their floor/ceil (Berthold, 2014).
///  - rins: fix integers on which LP and incumbent agree (Danna, Rothberg
///    and Le Pape, 2005).
///
/// rens and rins cap the number of free variables at p% of the integers,
/// re-fixing a random excess at incumbent values.
enum class Family { crossover, mutation, local_branching, proximity, rens, rins };

inline constexpr std::array<Family, 6> kFamilies{Family::crossover,       Family::mutation,
                                                 Family::local_branching, Family::proximity,
                                                 Family::rens,            Family::rins};

std::string_view to_string(Family family);

/// Percentages each family may carry; empty for crossover.
std::span<const int> allowed_percentages(Family family);

struct OperatorSpec {
  Family family = Family::crossover;
  std::optional<int> percentage;

  /// Config-file identifier: "c", "m_30", "lb_20", "p_05", "r_40", "ri_10".
  std::string id() const;
  /// Inverse of id(); throws Errc::invalid_config for unknown identifiers.
  static OperatorSpec parse(std::string_view id);
  void validate() const;

  friend bool operator==(const OperatorSpec&, const OperatorSpec&) = default;
};

/// Every valid operator, grouped by family in kFamilies order.
const std::vector<OperatorSpec>& operator_catalog();

/// Members of one family in catalog order.
std::vector<OperatorSpec> family_members(Family family);

struct OperatorContext {
  const Solution& incumbent;                       // feasible and integral
  std::span<const Solution> archive;               // recently accepted, oldest first
  std::optional<std::span<const double>> lp_values;  // relaxation of the original model
  Rng& rng;
};

/// Destroy step. Throws Errc::missing_relaxation for rens/rins without LP
/// values and Errc::empty_neighborhood when nothing would be left to repair.
NeighborhoodSpec build_neighborhood(const OperatorSpec& spec, const OperatorContext& ctx, const MipModel& model);

}  // namespace mipfolio
