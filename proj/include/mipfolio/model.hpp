/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstddef>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mipfolio {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline constexpr double kFeasibilityTol = 1e-7;
inline constexpr double kBoundTol       = 1e-9;
inline constexpr double kIntegralityTol = 1e-6;

enum class Sense { minimize, maximize };
enum class VarKind { continuous, integer, binary };
enum class Relation { le, ge, eq };

struct Variable {
  std::string name;
  VarKind kind = VarKind::continuous;
  double lower = 0.0;
  double upper = kInf;

  bool is_integral() const { return kind != VarKind::continuous; }
  friend bool operator==(const Variable&, const Variable&) = default;
};

struct Term {
  std::size_t var;
  double coef;
  friend bool operator==(const Term&, const Term&) = default;
};

/// Sparse row with terms sorted by variable index, no duplicates, no zeros.
struct LinearConstraint {
  std::string name;
  std::vector<Term> terms;
  Relation relation = Relation::le;
  double rhs = 0.0;

  double activity(std::span<const double> values) const;
  friend bool operator==(const LinearConstraint&, const LinearConstraint&) = default;
};

/// Linear objective in the model's own sense.
struct Objective {
  std::vector<Term> terms;
  double offset = 0.0;

  double value(std::span<const double> values) const;
  friend bool operator==(const Objective&, const Objective&) = default;
};

/// Sorts terms by index, merges duplicates and drops exact zeros.
std::vector<Term> normalize_terms(std::vector<Term> terms);

class MipModel {
 public:
  MipModel() = default;

  /// Validates every invariant (unique names, index ranges, bound order,
  /// binary normalization) and throws Error on violation.
  MipModel(std::string name,
           Sense sense,
           std::vector<Variable> variables,
           std::vector<LinearConstraint> constraints,
           Objective objective);

  const std::string& name() const { return name_; }
  Sense sense() const { return sense_; }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<LinearConstraint>& constraints() const { return constraints_; }
  const Objective& objective() const { return objective_; }

  std::size_t num_variables() const { return variables_.size(); }
  std::size_t num_constraints() const { return constraints_.size(); }
  std::optional<std::size_t> find_variable(std::string_view name) const;

  /// +1 for minimize, -1 for maximize. Multiplying a reported objective by
  /// this gives the value every search component minimizes.
  double sense_sign() const { return sense_ == Sense::minimize ? 1.0 : -1.0; }
  double to_min(double reported) const { return sense_sign() * reported; }

  /// Dense objective coefficients in minimization form.
  std::vector<double> min_costs() const;

  std::vector<std::size_t> integral_variables() const;
  std::vector<std::size_t> binary_variables() const;

  friend bool operator==(const MipModel&, const MipModel&) = default;

 private:
  std::string name_;
  Sense sense_ = Sense::minimize;
  std::vector<Variable> variables_;
  std::vector<LinearConstraint> constraints_;
  Objective objective_;
};

struct Solution {
  std::vector<double> values;
  double objective = 0.0;  // reported in the model's own sense
  bool feasible = false;
  bool integral = false;
};

/// Computes objective, feasibility and integrality. Only throws on a
/// dimension mismatch; infeasible input is reported, not rejected.
Solution evaluate(const MipModel& model, std::span<const double> values);

struct BoundPair {
  double lower;
  double upper;
  friend bool operator==(const BoundPair&, const BoundPair&) = default;
};

/// A restricted sub-problem around an incumbent.
struct NeighborhoodSpec {
  std::map<std::size_t, double> fixings;
  std::map<std::size_t, BoundPair> bound_overrides;
  std::vector<LinearConstraint> extra_constraints;
  std::optional<Objective> objective_override;  // minimized when present
  std::string tag;
};

/// Materializes `spec` as a new model. Fixings become lower == upper;
/// overrides must lie inside the original bounds. Throws
/// Errc::conflicting_fixing otherwise.
MipModel apply_neighborhood(const MipModel& model, const NeighborhoodSpec& spec);

// MPS ingestion and serialization. Free format; names may not contain
// whitespace. Errors carry the 1-based line number.
MipModel parse_mps(std::istream& in);
MipModel parse_mps_string(std::string_view text);
MipModel read_mps_file(const std::string& path);
std::string write_mps(const MipModel& model);

/// Debug dump, see docs/formats.md for the schema.
std::string model_to_json(const MipModel& model);

}  // namespace mipfolio
