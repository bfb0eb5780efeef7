/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <mipfolio/rng.hpp>

#include <string_view>

namespace mipfolio {

enum class AcceptKind { hill_climbing, simulated_annealing };

std::string_view to_string(AcceptKind kind);

/// Move acceptance on minimization-form objectives.
///
/// Simulated annealing works on the relative change
/// d = (candidate - current) / max(|current|, 1e-10), accepts a worse
/// candidate with probability exp(-d / T), then cools T <- max(1e-6, T * step).
struct AcceptanceCriterion {
  AcceptKind kind    = AcceptKind::hill_climbing;
  double step        = 1.0;  // simulated annealing only, in [0.01, 1]
  double temperature = 1.0;

  static AcceptanceCriterion hill_climbing() { return {}; }
  static AcceptanceCriterion simulated_annealing(double step) { return {AcceptKind::simulated_annealing, step, 1.0}; }

  /// Throws Errc::invalid_config.
  void validate() const;

  /// Draws from `rng` only for a worsening candidate under annealing.
  bool accept(double candidate, double current, Rng& rng);

  friend bool operator==(const AcceptanceCriterion&, const AcceptanceCriterion&) = default;
};

}  // namespace mipfolio
