/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <mipfolio/operators.hpp>

#include <mipfolio/error.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace mipfolio {

namespace {

constexpr std::array<int, 5> kStandardPercentages{10, 20, 30, 40, 50};
constexpr std::array<int, 5> kProximityPercentages{5, 10, 15, 20, 30};
constexpr double kAgreementTol = 1e-6;

std::string_view prefix_of(Family f)
{
  switch (f) {
    case Family::crossover: return "c";
    case Family::mutation: return "m";
    case Family::local_branching: return "lb";
    case Family::proximity: return "p";
    case Family::rens: return "r";
    case Family::rins: return "ri";
  }
  return "?";
}

std::size_t share(int percentage, std::size_t count)
{
  return (static_cast<std::size_t>(percentage) * count + 99) / 100;
}

std::vector<double> rounded_incumbent(const Solution& s, const std::vector<std::size_t>& integral)
{
  std::vector<double> x = s.values;
  for (std::size_t j : integral) { x[j] = std::round(x[j]); }
  return x;
}

/// Hamming distance to `x` over the binaries as (terms, offset):
/// sum_{x_v=0} y_v + sum_{x_v=1} (1 - y_v).
Objective distance_expression(const std::vector<std::size_t>& binaries, const std::vector<double>& x)
{
  Objective d;
  for (std::size_t v : binaries) {
    if (x[v] > 0.5) {
      d.terms.push_back(Term{v, -1.0});
      d.offset += 1.0;
    } else {
      d.terms.push_back(Term{v, 1.0});
    }
  }
  return d;
}

NeighborhoodSpec mutation(int p, const std::vector<std::size_t>& integral, const std::vector<double>& x, Rng& rng)
{
  NeighborhoodSpec spec;
  const std::size_t d = integral.size();
  const auto freed    = rng.sample_without_replacement(d, std::min(d, share(p, d)));
  std::vector<bool> is_free(d, false);
  for (std::size_t k : freed) { is_free[k] = true; }
  for (std::size_t k = 0; k < d; ++k) {
    if (!is_free[k]) { spec.fixings[integral[k]] = x[integral[k]]; }
  }
  return spec;
}

/// Re-fixes a uniform random subset of `free_vars` at incumbent values so
/// that at most `cap` remain free.
void cap_free(NeighborhoodSpec& spec, const std::vector<std::size_t>& free_vars, std::size_t cap,
              const std::vector<double>& x, Rng& rng)
{
  if (free_vars.size() <= cap) { return; }
  for (std::size_t k : rng.sample_without_replacement(free_vars.size(), free_vars.size() - cap)) {
    const std::size_t v = free_vars[k];
    spec.bound_overrides.erase(v);
    spec.fixings[v] = x[v];
  }
}

}  // namespace

std::string_view to_string(Family family)
{
  switch (family) {
    case Family::crossover: return "crossover";
    case Family::mutation: return "mutation";
    case Family::local_branching: return "local_branching";
    case Family::proximity: return "proximity";
    case Family::rens: return "rens";
    case Family::rins: return "rins";
  }
  return "unknown";
}

std::span<const int> allowed_percentages(Family family)
{
  switch (family) {
    case Family::crossover: return {};
    case Family::proximity: return kProximityPercentages;
    default: return kStandardPercentages;
  }
}

std::string OperatorSpec::id() const
{
  if (family == Family::crossover) { return "c"; }
  char buf[16];
  std::snprintf(buf, sizeof buf, "%s_%02d", std::string(prefix_of(family)).c_str(), percentage.value_or(0));
  return buf;
}

OperatorSpec OperatorSpec::parse(std::string_view id)
{
  if (id == "c") { return OperatorSpec{Family::crossover, std::nullopt}; }
  const auto us = id.find('_');
  if (us != std::string_view::npos) {
    const auto head = id.substr(0, us);
    const auto tail = id.substr(us + 1);
    for (Family f : kFamilies) {
      if (f == Family::crossover || head != prefix_of(f)) { continue; }
      int p = 0;
      const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), p);
      if (ec == std::errc{} && ptr == tail.data() + tail.size()) {
        OperatorSpec spec{f, p};
        if (spec.id() == id) {
          spec.validate();
          return spec;
        }
      }
    }
  }
  fail(Errc::invalid_config, "unknown operator identifier '" + std::string(id) + "'");
}

void OperatorSpec::validate() const
{
  const auto allowed = allowed_percentages(family);
  if (family == Family::crossover) {
    if (percentage) { fail(Errc::invalid_config, "crossover takes no percentage"); }
    return;
  }
  if (!percentage || std::find(allowed.begin(), allowed.end(), *percentage) == allowed.end()) {
    fail(Errc::invalid_config, std::string(to_string(family)) + " percentage outside its pool");
  }
}

const std::vector<OperatorSpec>& operator_catalog()
{
  static const std::vector<OperatorSpec> catalog = [] {
    std::vector<OperatorSpec> out;
    for (Family f : kFamilies) {
      if (f == Family::crossover) {
        out.push_back(OperatorSpec{f, std::nullopt});
        continue;
      }
      for (int p : allowed_percentages(f)) { out.push_back(OperatorSpec{f, p}); }
    }
    return out;
  }();
  return catalog;
}

std::vector<OperatorSpec> family_members(Family family)
{
  std::vector<OperatorSpec> out;
  for (const auto& op : operator_catalog()) {
    if (op.family == family) { out.push_back(op); }
  }
  return out;
}

NeighborhoodSpec build_neighborhood(const OperatorSpec& spec, const OperatorContext& ctx, const MipModel& model)
{
  spec.validate();
  const auto integral    = model.integral_variables();
  const std::size_t d    = integral.size();
  const std::vector<double> x = rounded_incumbent(ctx.incumbent, integral);
  const int p            = spec.percentage.value_or(0);

  NeighborhoodSpec out;
  switch (spec.family) {
    case Family::mutation: out = mutation(p, integral, x, ctx.rng); break;

    case Family::crossover: {
      std::vector<std::size_t> partners;
      for (std::size_t a = 0; a < ctx.archive.size(); ++a) {
        const auto& other = ctx.archive[a].values;
        const bool differs = std::any_of(integral.begin(), integral.end(), [&](std::size_t j) {
          return std::abs(std::round(other[j]) - x[j]) > 0.5;
        });
        if (differs) { partners.push_back(a); }
      }
      if (partners.empty()) {
        out = mutation(30, integral, x, ctx.rng);
        break;
      }
      const auto& other = ctx.archive[partners[ctx.rng.index(partners.size())]].values;
      for (std::size_t j : integral) {
        if (std::abs(std::round(other[j]) - x[j]) < 0.5) { out.fixings[j] = x[j]; }
      }
      break;
    }

    case Family::local_branching: {
      const auto binaries = model.binary_variables();
      if (binaries.empty()) { break; }
      const Objective dist = distance_expression(binaries, x);
      const double radius  = static_cast<double>(share(p, binaries.size()));
      out.extra_constraints.push_back(
        LinearConstraint{"__local_branching", dist.terms, Relation::le, radius - dist.offset});
      break;
    }

    case Family::proximity: {
      const auto costs = model.min_costs();
      LinearConstraint cutoff{"__proximity_cutoff", {}, Relation::le, 0.0};
      double current = 0.0;
      for (std::size_t j = 0; j < costs.size(); ++j) {
        if (costs[j] == 0.0) { continue; }
        cutoff.terms.push_back(Term{j, costs[j]});
        current += costs[j] * x[j];
      }
      if (cutoff.terms.empty()) {
        fail(Errc::empty_neighborhood, "proximity needs a non-constant objective");
      }
      const double objective = model.objective().value(x);
      const double delta     = (p / 100.0) * std::max(std::abs(objective), 1.0);
      cutoff.rhs             = current - delta;
      out.extra_constraints.push_back(std::move(cutoff));
      out.objective_override = distance_expression(model.binary_variables(), x);
      break;
    }

    case Family::rens:
    case Family::rins: {
      if (!ctx.lp_values) {
        fail(Errc::missing_relaxation, std::string(to_string(spec.family)) + " needs LP relaxation values");
      }
      const auto lpv = *ctx.lp_values;
      if (lpv.size() != model.num_variables()) {
        fail(Errc::dimension_mismatch, "LP values do not match the model");
      }
      std::vector<std::size_t> free_vars;
      for (std::size_t j : integral) {
        const auto& var = model.variables()[j];
        if (spec.family == Family::rens) {
          const double r = std::round(lpv[j]);
          if (std::abs(lpv[j] - r) <= kIntegralityTol) {
            out.fixings[j] = std::clamp(r, var.lower, var.upper);
          } else {
            out.bound_overrides[j] = BoundPair{std::max(std::floor(lpv[j]), var.lower),
                                               std::min(std::ceil(lpv[j]), var.upper)};
            free_vars.push_back(j);
          }
        } else if (std::abs(lpv[j] - x[j]) <= kAgreementTol) {
          out.fixings[j] = x[j];
        } else {
          free_vars.push_back(j);
        }
      }
      if (free_vars.empty()) {
        fail(Errc::empty_neighborhood, std::string(to_string(spec.family)) + " would fix every integer variable");
      }
      cap_free(out, free_vars, share(p, d), x, ctx.rng);
      break;
    }
  }
  out.tag = spec.id();
  return out;
}

}  // namespace mipfolio
