/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <mipfolio/acceptance.hpp>

#include <mipfolio/error.hpp>

#include <algorithm>
#include <cmath>

namespace mipfolio {

std::string_view to_string(AcceptKind kind)
{
  return kind == AcceptKind::hill_climbing ? "hill_climbing" : "simulated_annealing";
}

void AcceptanceCriterion::validate() const
{
  if (kind == AcceptKind::hill_climbing) { return; }
  if (!(step >= 0.01 && step <= 1.0)) { fail(Errc::invalid_config, "annealing step outside [0.01, 1]"); }
  if (!(temperature > 0.0)) { fail(Errc::invalid_config, "annealing temperature must be > 0"); }
}

bool AcceptanceCriterion::accept(double candidate, double current, Rng& rng)
{
  if (kind == AcceptKind::hill_climbing) { return candidate <= current; }
  bool ok = candidate <= current;
  if (!ok) {
    const double delta = (candidate - current) / std::max(std::abs(current), 1e-10);
    ok                 = rng.uniform01() < std::exp(-delta / temperature);
  }
  temperature = std::max(1e-6, temperature * step);
  return ok;
}

}  // namespace mipfolio
