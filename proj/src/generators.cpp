/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <mipfolio/generators.hpp>

#include <mipfolio/rng.hpp>

#include <cmath>
#include <string>

namespace mipfolio::gen {

namespace {

std::vector<Variable> binaries(std::size_t n, const char* prefix)
{
  std::vector<Variable> vars;
  vars.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    vars.push_back(Variable{prefix + std::to_string(j), VarKind::binary, 0.0, 1.0});
  }
  return vars;
}

}  // namespace

MipModel knapsack(std::size_t items, std::uint64_t seed)
{
  Rng rng(seed);
  Objective obj;
  LinearConstraint cap{"capacity", {}, Relation::le, 0.0};
  double total = 0.0;
  for (std::size_t j = 0; j < items; ++j) {
    const double w = static_cast<double>(rng.integer(5, 60));
    const double p = static_cast<double>(rng.integer(5, 60));
    cap.terms.push_back(Term{j, w});
    obj.terms.push_back(Term{j, p});
    total += w;
  }
  cap.rhs = std::floor(total / 2.0);
  return MipModel("knapsack_" + std::to_string(items) + "_" + std::to_string(seed), Sense::maximize,
                  binaries(items, "x"), {cap}, obj);
}

MipModel set_cover(std::size_t rows, std::size_t columns, std::uint64_t seed, bool unit_costs)
{
  Rng rng(seed);
  Objective obj;
  for (std::size_t j = 0; j < columns; ++j) {
    obj.terms.push_back(Term{j, unit_costs ? 1.0 : static_cast<double>(rng.integer(1, 20))});
  }
  std::vector<LinearConstraint> cons;
  for (std::size_t i = 0; i < rows; ++i) {
    LinearConstraint c{"cover" + std::to_string(i), {}, Relation::ge, 1.0};
    for (std::size_t j = 0; j < columns; ++j) {
      if (rng.bernoulli(0.2)) { c.terms.push_back(Term{j, 1.0}); }
    }
    while (c.terms.size() < 2 && columns >= 2) {
      const std::size_t j = rng.index(columns);
      bool present = false;
      for (const auto& t : c.terms) { present = present || t.var == j; }
      if (!present) { c.terms.push_back(Term{j, 1.0}); }
    }
    cons.push_back(std::move(c));
  }
  return MipModel("setcover_" + std::to_string(rows) + "x" + std::to_string(columns) + "_" + std::to_string(seed),
                  Sense::minimize, binaries(columns, "y"), std::move(cons), obj);
}

MipModel independent_set(std::size_t nodes, double edge_probability, std::uint64_t seed)
{
  Rng rng(seed);
  Objective obj;
  for (std::size_t v = 0; v < nodes; ++v) {
    obj.terms.push_back(Term{v, static_cast<double>(rng.integer(1, 10))});
  }
  std::vector<LinearConstraint> cons;
  for (std::size_t u = 0; u < nodes; ++u) {
    for (std::size_t v = u + 1; v < nodes; ++v) {
      if (rng.bernoulli(edge_probability)) {
        cons.push_back(LinearConstraint{"e" + std::to_string(u) + "_" + std::to_string(v),
                                        {Term{u, 1.0}, Term{v, 1.0}}, Relation::le, 1.0});
      }
    }
  }
  return MipModel("indset_" + std::to_string(nodes) + "_" + std::to_string(seed), Sense::maximize,
                  binaries(nodes, "v"), std::move(cons), obj);
}

}  // namespace mipfolio::gen
