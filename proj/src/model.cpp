/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <mipfolio/model.hpp>

#include <mipfolio/error.hpp>

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace mipfolio {

double LinearConstraint::activity(std::span<const double> values) const
{
  double sum = 0.0;
  for (const auto& t : terms) { sum += t.coef * values[t.var]; }
  return sum;
}

double Objective::value(std::span<const double> values) const
{
  double sum = offset;
  for (const auto& t : terms) { sum += t.coef * values[t.var]; }
  return sum;
}

std::vector<Term> normalize_terms(std::vector<Term> terms)
{
  std::stable_sort(
    terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> out;
  out.reserve(terms.size());
  for (const auto& t : terms) {
    if (!out.empty() && out.back().var == t.var) {
      out.back().coef += t.coef;
    } else {
      out.push_back(t);
    }
  }
  std::erase_if(out, [](const Term& t) { return t.coef == 0.0; });
  return out;
}

MipModel::MipModel(std::string name,
                   Sense sense,
                   std::vector<Variable> variables,
                   std::vector<LinearConstraint> constraints,
                   Objective objective)
  : name_(std::move(name)),
    sense_(sense),
    variables_(std::move(variables)),
    constraints_(std::move(constraints)),
    objective_(std::move(objective))
{
  const std::size_t n = variables_.size();
  std::unordered_set<std::string> seen;
  for (auto& v : variables_) {
    if (!seen.insert(v.name).second) { fail(Errc::duplicate_name, "variable '" + v.name + "'"); }
    if (std::isnan(v.lower) || std::isnan(v.upper)) {
      fail(Errc::invalid_model, "NaN bound on variable '" + v.name + "'");
    }
    if (v.kind == VarKind::binary) {
      v.lower = std::max(v.lower, 0.0);
      v.upper = std::min(v.upper, 1.0);
    }
    if (v.is_integral()) {
      if (std::isfinite(v.lower)) { v.lower = std::ceil(v.lower - kIntegralityTol); }
      if (std::isfinite(v.upper)) { v.upper = std::floor(v.upper + kIntegralityTol); }
    }
    if (v.lower > v.upper) {
      fail(Errc::invalid_model, "variable '" + v.name + "' has lower > upper");
    }
  }

  auto check_terms = [n](std::vector<Term>& terms, const std::string& owner) {
    for (const auto& t : terms) {
      if (t.var >= n) { fail(Errc::dangling_reference, owner + " references variable index " + std::to_string(t.var)); }
      if (!std::isfinite(t.coef)) { fail(Errc::invalid_model, owner + " has a non-finite coefficient"); }
    }
    terms = normalize_terms(std::move(terms));
  };

  seen.clear();
  for (auto& c : constraints_) {
    if (!seen.insert(c.name).second) { fail(Errc::duplicate_name, "constraint '" + c.name + "'"); }
    check_terms(c.terms, "constraint '" + c.name + "'");
    if (c.terms.empty()) { fail(Errc::invalid_model, "constraint '" + c.name + "' has no nonzero coefficient"); }
    if (!std::isfinite(c.rhs)) { fail(Errc::invalid_model, "constraint '" + c.name + "' has a non-finite rhs"); }
  }
  check_terms(objective_.terms, "objective");
}

std::optional<std::size_t> MipModel::find_variable(std::string_view name) const
{
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    if (variables_[j].name == name) { return j; }
  }
  return std::nullopt;
}

std::vector<double> MipModel::min_costs() const
{
  std::vector<double> c(variables_.size(), 0.0);
  for (const auto& t : objective_.terms) { c[t.var] = sense_sign() * t.coef; }
  return c;
}

std::vector<std::size_t> MipModel::integral_variables() const
{
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    if (variables_[j].is_integral()) { out.push_back(j); }
  }
  return out;
}

std::vector<std::size_t> MipModel::binary_variables() const
{
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    if (variables_[j].kind == VarKind::binary) { out.push_back(j); }
  }
  return out;
}

Solution evaluate(const MipModel& model, std::span<const double> values)
{
  if (values.size() != model.num_variables()) {
    fail(Errc::dimension_mismatch,
         "expected " + std::to_string(model.num_variables()) + " values, got " +
           std::to_string(values.size()));
  }
  Solution sol;
  sol.values.assign(values.begin(), values.end());
  sol.objective = model.objective().value(values);

  bool feasible = true;
  bool integral = true;
  const auto& vars = model.variables();
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const double x = values[j];
    if (std::isnan(x) || x < vars[j].lower - kBoundTol || x > vars[j].upper + kBoundTol) {
      feasible = false;
    }
    if (vars[j].is_integral() && !(std::abs(x - std::round(x)) <= kIntegralityTol)) {
      integral = false;
    }
  }
  for (const auto& c : model.constraints()) {
    if (!feasible) { break; }
    const double a = c.activity(values);
    switch (c.relation) {
      case Relation::le: feasible = a <= c.rhs + kFeasibilityTol; break;
      case Relation::ge: feasible = a >= c.rhs - kFeasibilityTol; break;
      case Relation::eq: feasible = std::abs(a - c.rhs) <= kFeasibilityTol; break;
    }
  }
  sol.feasible = feasible && !std::isnan(sol.objective);
  sol.integral = integral;
  return sol;
}

MipModel apply_neighborhood(const MipModel& model, const NeighborhoodSpec& spec)
{
  auto vars = model.variables();
  const auto& original = model.variables();

  for (const auto& [j, b] : spec.bound_overrides) {
    if (j >= vars.size()) { fail(Errc::dimension_mismatch, "bound override on unknown variable index " + std::to_string(j)); }
    if (b.lower > b.upper || b.lower < original[j].lower - kBoundTol ||
        b.upper > original[j].upper + kBoundTol) {
      fail(Errc::conflicting_fixing, "bound override on '" + original[j].name + "' leaves the original bounds");
    }
    vars[j].lower = std::max(b.lower, original[j].lower);
    vars[j].upper = std::min(b.upper, original[j].upper);
  }
  for (const auto& [j, value] : spec.fixings) {
    if (j >= vars.size()) { fail(Errc::dimension_mismatch, "fixing on unknown variable index " + std::to_string(j)); }
    const auto& v = vars[j];
    double x = value;
    if (v.is_integral()) {
      if (std::abs(x - std::round(x)) > kIntegralityTol) {
        fail(Errc::conflicting_fixing, "fractional fixing on integer variable '" + v.name + "'");
      }
      x = std::round(x);
    }
    if (!(x >= v.lower - kBoundTol && x <= v.upper + kBoundTol)) {
      fail(Errc::conflicting_fixing, "fixing of '" + v.name + "' lies outside its bounds");
    }
    x = std::clamp(x, v.lower, v.upper);
    vars[j].lower = x;
    vars[j].upper = x;
  }

  auto rows = model.constraints();
  rows.insert(rows.end(), spec.extra_constraints.begin(), spec.extra_constraints.end());

  if (spec.objective_override) {
    return MipModel(model.name(), Sense::minimize, std::move(vars), std::move(rows), *spec.objective_override);
  }
  return MipModel(model.name(), model.sense(), std::move(vars), std::move(rows), model.objective());
}

}  // namespace mipfolio
