/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <mipfolio/rng.hpp>

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace mipfolio {

enum class Outcome { best, better, accept, reject };

std::string_view to_string(Outcome outcome);

/// Reward paid for each iteration outcome.
struct RewardVector {
  double best   = 0.0;
  double better = 0.0;
  double accept = 0.0;
  double reject = 0.0;

  double operator[](Outcome o) const;
  double max() const;
  bool is_binary() const;

  /// The eight admissible vectors, in catalog order.
  static std::span<const RewardVector> pool();
  /// The binary vectors Thompson sampling may use: [1,1,1,0] and [1,1,0,0].
  static std::span<const RewardVector> binary_pool();
  bool in_pool() const;

  friend bool operator==(const RewardVector&, const RewardVector&) = default;
};

enum class PolicyKind { epsilon_greedy, softmax, thompson };

std::string_view to_string(PolicyKind kind);

/// Policy kind plus its single hyperparameter (epsilon or tau; unused for
/// Thompson sampling).
struct PolicyParams {
  PolicyKind kind = PolicyKind::epsilon_greedy;
  double value    = 0.0;

  /// epsilon in [0, 0.5], tau in [1, 3]; throws Errc::invalid_config.
  void validate() const;
  friend bool operator==(const PolicyParams&, const PolicyParams&) = default;
};

struct ArmStats {
  std::size_t pulls     = 0;
  double reward_sum     = 0.0;  // rewards divided by the vector's max
  std::size_t successes = 0;
  std::size_t failures  = 0;
};

/// exp(mean_i / tau) / sum_j exp(mean_j / tau), computed stably.
std::vector<double> softmax_distribution(std::span<const double> means, double tau);

/// Per-worker bandit state. select_arm never mutates; update is the only
/// mutator. Each arm is pulled once in index order before the policy acts.
class PolicyState {
 public:
  PolicyState(PolicyParams params, std::size_t arms);

  std::size_t select_arm(Rng& rng) const;

  /// Throws Errc::non_binary_reward_for_thompson when a Thompson policy is
  /// paid from a non-binary vector.
  void update(std::size_t arm, Outcome outcome, const RewardVector& rewards);

  std::size_t num_arms() const { return arms_.size(); }
  const ArmStats& arm(std::size_t i) const { return arms_[i]; }
  const PolicyParams& params() const { return params_; }
  double mean(std::size_t i) const;
  std::vector<double> means() const;

 private:
  PolicyParams params_;
  std::vector<ArmStats> arms_;
};

}  // namespace mipfolio
