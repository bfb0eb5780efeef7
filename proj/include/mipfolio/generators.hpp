/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <mipfolio/model.hpp>

#include <cstddef>
#include <cstdint>

// Seeded generators for small binary benchmark families.
namespace mipfolio::gen {

/// max profit·x s.t. weight·x <= capacity, x binary. Integer data; the
/// capacity is half the total weight.
MipModel knapsack(std::size_t items, std::uint64_t seed);

/// min cost·x s.t. every row covered at least once, x binary. Each row is
/// covered by at least two columns. `unit_costs` gives the all-ones objective.
MipModel set_cover(std::size_t rows, std::size_t columns, std::uint64_t seed, bool unit_costs = false);

/// max weight·x s.t. x_u + x_v <= 1 for every edge of G(n, p), x binary.
MipModel independent_set(std::size_t nodes, double edge_probability, std::uint64_t seed);

}  // namespace mipfolio::gen
