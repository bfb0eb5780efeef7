/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <mipfolio/metrics.hpp>

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mipfolio {

inline constexpr std::size_t kMaxExhaustiveSubsets = 1000000;

/// Recorded traces, config id -> instance id -> trace. Every trace of one
/// instance shares that instance's horizon.
class TraceDb {
 public:
  /// Throws Errc::horizon_mismatch when the instance already has another
  /// horizon and Errc::invalid_argument on a duplicate entry.
  void add(const std::string& config_id, const std::string& instance_id, GapTrace trace);

  /// Reads `<dir>/<config_id>/<instance_id>.csv`. Horizons come from
  /// `<dir>/horizons.json` ({"instance": seconds}) when present, otherwise
  /// from `default_horizon`. Throws Errc::not_rectangular on a missing trace.
  static TraceDb load(const std::string& dir, std::optional<double> default_horizon = std::nullopt);
  void save(const std::string& dir) const;

  const std::vector<std::string>& configs() const { return configs_; }      // sorted
  const std::vector<std::string>& instances() const { return instances_; }  // sorted
  double horizon(const std::string& instance_id) const;
  const GapTrace& trace(std::size_t config, std::size_t instance) const;

  bool rectangular() const;
  /// Throws Errc::not_rectangular naming the first missing pair.
  void require_rectangular() const;

 private:
  std::vector<std::string> configs_;
  std::vector<std::string> instances_;
  std::map<std::string, double> horizons_;
  std::map<std::pair<std::string, std::string>, GapTrace> traces_;
  std::vector<std::vector<const GapTrace*>> grid_;  // [config][instance]
  void rebuild();
};

/// Evaluation window; t1 defaults to each instance's horizon and is
/// clamped to it.
struct SimWindow {
  double t0 = 0.0;
  std::optional<double> t1;
};

/// Instance-averaged final gap and primal integral (gap-seconds) of the
/// min-aggregate of one configuration subset.
struct SubsetScore {
  std::vector<std::string> ids;  // sorted
  double gap = 0.0;
  double pi  = 0.0;
};

SubsetScore score_subset(const TraceDb& db, const std::vector<std::size_t>& configs, const SimWindow& window);

struct Summary {
  double mean = 0.0;
  double std  = 0.0;  // population
};

struct SimulationReport {
  std::size_t n    = 0;
  std::size_t runs = 0;
  Summary gap;
  Summary pi;
  SubsetScore best;   // lowest gap, then PI, then ids
  SubsetScore worst;  // highest gap, then PI, then ids
  std::vector<SubsetScore> records;
};

struct SimulateOptions {
  SimWindow window;
  /// Cycle through all n-subsets in lexicographic order instead of sampling.
  bool stratified = false;
  bool parallel   = false;
};

/// `runs` independent n-subsets drawn uniformly without replacement; run r
/// uses its own generator seeded from (seed, r), so serial and parallel
/// evaluation agree bit for bit.
SimulationReport simulate(const TraceDb& db, std::size_t n, std::size_t runs, std::uint64_t seed,
                          const SimulateOptions& options = {});

struct ExhaustiveReport {
  std::size_t n       = 0;
  std::size_t subsets = 0;
  Summary gap;  // exact expectation and spread over all subsets
  Summary pi;
  std::vector<SubsetScore> ranking;  // gap, then PI, then ids
};

/// Every n-subset. Throws Errc::too_many_subsets above 10^6 subsets.
ExhaustiveReport exhaustive(const TraceDb& db, std::size_t n, const SimWindow& window = {}, bool parallel = false);

/// Config ids by average final gap, then PI, then id.
std::vector<std::string> rank_configs(const TraceDb& db, const SimWindow& window = {});

/// C(n, k), saturating at SIZE_MAX.
std::size_t binomial(std::size_t n, std::size_t k);

/// Strict weak order used by every ranking: gap, then PI, then ids.
bool ranks_before(const SubsetScore& a, const SubsetScore& b);

std::string report_to_json(const SimulationReport& report);
std::string report_to_json(const ExhaustiveReport& report);
/// One-line-per-n CSV: n,runs,pg_mean_pct,pg_std_pct,pi_mean,pi_std (PI in
/// percent-minutes).
std::string summary_csv_header();
std::string summary_csv_row(const SimulationReport& report);

}  // namespace mipfolio
