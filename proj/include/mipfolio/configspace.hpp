/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <mipfolio/acceptance.hpp>
#include <mipfolio/bandit.hpp>
#include <mipfolio/operators.hpp>
#include <mipfolio/rng.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mipfolio {

inline constexpr std::size_t kMinDestroyOps = 4;
inline constexpr std::size_t kMaxDestroyOps = 16;
inline constexpr std::size_t kMaxPoolSize   = 1000000;

/// One worker's full parameterization.
struct Configuration {
  std::string id;
  std::vector<OperatorSpec> destroy_ops;
  AcceptanceCriterion acceptance;
  PolicyParams policy;
  RewardVector rewards;

  /// Checks operator count and uniqueness, family coverage for six or more
  /// operators, hyperparameter ranges and the Thompson reward restriction.
  /// Throws Errc::invalid_config.
  void validate() const;

  /// Structural identity: sorted operator ids plus hyperparameters rounded
  /// to six decimals. The id is not part of it.
  std::string fingerprint() const;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// Destroy set of `forced_count` operators, or a uniform count in [4, 16].
/// Six or more: one per family, then the rest from the leftover catalog
/// without replacement. Fewer: that many distinct families, one each.
std::vector<OperatorSpec> sample_destroy_set(Rng& rng, std::optional<std::size_t> forced_count = std::nullopt);

/// Independent uniform draws for each parameter; Thompson sampling draws its
/// rewards from the binary pair.
Configuration sample_config(Rng& rng);

/// `size` structurally distinct configurations, ids "cfg_000", "cfg_001", ...
/// Throws Errc::pool_exhausted after 1000 failed draws for one slot and
/// Errc::invalid_argument for sizes outside [1, 10^6].
std::vector<Configuration> generate_pool(std::size_t size, std::uint64_t seed);

/// Hand-picked configuration used when no pool entry is named.
Configuration default_config();

std::string config_to_json(const Configuration& config);
Configuration config_from_json(std::string_view text);
std::string pool_to_json(const std::vector<Configuration>& pool);
std::vector<Configuration> pool_from_json(std::string_view text);
std::vector<Configuration> read_pool_file(const std::string& path);
void write_pool_file(const std::vector<Configuration>& pool, const std::string& path);

}  // namespace mipfolio
