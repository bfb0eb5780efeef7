/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <mipfolio/simulator.hpp>

#include <mipfolio/error.hpp>
#include <mipfolio/rng.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace mipfolio {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Summary summarize(const std::vector<double>& v)
{
  Summary s;
  if (v.empty()) { return s; }
  const double count = static_cast<double>(v.size());
  for (double x : v) { s.mean += x; }
  s.mean /= count;
  double residual = 0.0;
  for (double x : v) { residual += x - s.mean; }
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  s.mean              = std::clamp(s.mean + residual / count, *lo, *hi);
  double ss = 0.0;
  for (double x : v) { ss += (x - s.mean) * (x - s.mean); }
  s.std = std::sqrt(ss / count);
  return s;
}

/// Advances a sorted k-subset of [0, n) to its lexicographic successor.
bool next_combination(std::vector<std::size_t>& c, std::size_t n)
{
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) { c[j] = c[j - 1] + 1; }
      return true;
    }
  }
  return false;
}

std::vector<std::vector<std::size_t>> all_combinations(std::size_t n, std::size_t k)
{
  if (binomial(n, k) > kMaxExhaustiveSubsets) {
    fail(Errc::too_many_subsets, "C(" + std::to_string(n) + ", " + std::to_string(k) + ") exceeds 10^6 subsets");
  }
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> c(k);
  for (std::size_t i = 0; i < k; ++i) { c[i] = i; }
  do { out.push_back(c); } while (next_combination(c, n));
  return out;
}

void check_subset_size(const TraceDb& db, std::size_t n)
{
  db.require_rectangular();
  if (n < 1 || n > db.configs().size()) {
    fail(Errc::invalid_argument, "subset size must be in [1, " + std::to_string(db.configs().size()) + "]");
  }
}

json score_json(const SubsetScore& s) { return json{{"ids", s.ids}, {"gap", s.gap}, {"pi", s.pi}}; }

json summary_json(const Summary& s) { return json{{"mean", s.mean}, {"std", s.std}}; }

}  // namespace

std::size_t binomial(std::size_t n, std::size_t k)
{
  if (k > n) { return 0; }
  k = std::min(k, n - k);
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::size_t num = n - k + i;
    if (r > std::numeric_limits<std::size_t>::max() / num) { return std::numeric_limits<std::size_t>::max(); }
    r = r * num / i;  // exact: r * num is divisible by i at every step
  }
  return r;
}

bool ranks_before(const SubsetScore& a, const SubsetScore& b)
{
  if (a.gap != b.gap) { return a.gap < b.gap; }
  if (a.pi != b.pi) { return a.pi < b.pi; }
  return a.ids < b.ids;
}

void TraceDb::add(const std::string& config_id, const std::string& instance_id, GapTrace trace)
{
  auto h = horizons_.find(instance_id);
  if (h != horizons_.end() && h->second != trace.horizon()) {
    fail(Errc::horizon_mismatch, "instance " + instance_id + " already has another horizon");
  }
  if (!traces_.emplace(std::make_pair(config_id, instance_id), std::move(trace)).second) {
    fail(Errc::invalid_argument, "duplicate trace for " + config_id + "/" + instance_id);
  }
  horizons_[instance_id] = traces_.at({config_id, instance_id}).horizon();
  rebuild();
}

void TraceDb::rebuild()
{
  std::set<std::string> cs, is;
  for (const auto& [key, _] : traces_) {
    cs.insert(key.first);
    is.insert(key.second);
  }
  configs_.assign(cs.begin(), cs.end());
  instances_.assign(is.begin(), is.end());
  grid_.assign(configs_.size(), std::vector<const GapTrace*>(instances_.size(), nullptr));
  for (std::size_t c = 0; c < configs_.size(); ++c) {
    for (std::size_t i = 0; i < instances_.size(); ++i) {
      auto it = traces_.find({configs_[c], instances_[i]});
      if (it != traces_.end()) { grid_[c][i] = &it->second; }
    }
  }
}

double TraceDb::horizon(const std::string& instance_id) const
{
  auto it = horizons_.find(instance_id);
  if (it == horizons_.end()) { fail(Errc::invalid_argument, "unknown instance " + instance_id); }
  return it->second;
}

const GapTrace& TraceDb::trace(std::size_t config, std::size_t instance) const
{
  const GapTrace* t = grid_.at(config).at(instance);
  if (t == nullptr) {
    fail(Errc::not_rectangular, "no trace for " + configs_[config] + "/" + instances_[instance]);
  }
  return *t;
}

bool TraceDb::rectangular() const
{
  for (const auto& row : grid_) {
    for (const auto* t : row) {
      if (t == nullptr) { return false; }
    }
  }
  return !grid_.empty();
}

void TraceDb::require_rectangular() const
{
  if (grid_.empty()) { fail(Errc::not_rectangular, "trace database is empty"); }
  for (std::size_t c = 0; c < configs_.size(); ++c) {
    for (std::size_t i = 0; i < instances_.size(); ++i) {
      if (grid_[c][i] == nullptr) {
        fail(Errc::not_rectangular, "missing trace " + configs_[c] + "/" + instances_[i]);
      }
    }
  }
}

TraceDb TraceDb::load(const std::string& dir, std::optional<double> default_horizon)
{
  if (!fs::is_directory(dir)) { fail(Errc::io_error, "'" + dir + "' is not a directory"); }
  std::map<std::string, double> horizons;
  const fs::path hfile = fs::path(dir) / "horizons.json";
  if (fs::exists(hfile)) {
    std::ifstream in(hfile);
    try {
      horizons = json::parse(in).get<std::map<std::string, double>>();
    } catch (const json::exception& e) {
      fail(Errc::malformed_section, hfile.string() + ": " + e.what());
    }
  }

  std::vector<fs::path> config_dirs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory()) { config_dirs.push_back(entry.path()); }
  }
  std::sort(config_dirs.begin(), config_dirs.end());

  TraceDb db;
  for (const auto& cdir : config_dirs) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(cdir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") { files.push_back(entry.path()); }
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      const std::string instance = f.stem().string();
      double h;
      if (auto it = horizons.find(instance); it != horizons.end()) {
        h = it->second;
      } else if (default_horizon) {
        h = *default_horizon;
      } else {
        fail(Errc::invalid_argument, "no horizon for instance " + instance);
      }
      try {
        db.traces_.emplace(std::make_pair(cdir.filename().string(), instance), read_trace_csv(f.string(), h));
      } catch (const Error& e) {
        fail(e.code(), f.string() + ": " + e.what());
      }
      db.horizons_[instance] = h;
    }
  }
  db.rebuild();
  db.require_rectangular();
  return db;
}

void TraceDb::save(const std::string& dir) const
{
  for (const auto& [key, trace] : traces_) {
    const fs::path cdir = fs::path(dir) / key.first;
    fs::create_directories(cdir);
    write_trace_csv(trace, (cdir / (key.second + ".csv")).string());
  }
  std::ofstream out(fs::path(dir) / "horizons.json", std::ios::binary);
  if (!out) { fail(Errc::io_error, "cannot write horizons.json in '" + dir + "'"); }
  out << json(horizons_).dump(2) << "\n";
}

SubsetScore score_subset(const TraceDb& db, const std::vector<std::size_t>& configs, const SimWindow& window)
{
  SubsetScore s;
  for (std::size_t c : configs) { s.ids.push_back(db.configs().at(c)); }
  std::sort(s.ids.begin(), s.ids.end());
  const std::size_t m = db.instances().size();
  std::vector<GapTrace> members;
  for (std::size_t i = 0; i < m; ++i) {
    members.clear();
    for (std::size_t c : configs) { members.push_back(db.trace(c, i)); }
    const GapTrace agg = aggregate_min(members);
    const double t1    = std::min(window.t1.value_or(agg.horizon()), agg.horizon());
    const double t0    = std::min(window.t0, t1);
    s.gap += agg.gap_at(t1);
    s.pi += primal_integral(agg, t0, t1);
  }
  s.gap /= static_cast<double>(m);
  s.pi /= static_cast<double>(m);
  return s;
}

SimulationReport simulate(const TraceDb& db, std::size_t n, std::size_t runs, std::uint64_t seed,
                          const SimulateOptions& options)
{
  check_subset_size(db, n);
  if (runs < 1) { fail(Errc::invalid_argument, "runs must be >= 1"); }
  const std::size_t k = db.configs().size();

  std::vector<std::vector<std::size_t>> strata;
  if (options.stratified) { strata = all_combinations(k, n); }

  SimulationReport rep;
  rep.n    = n;
  rep.runs = runs;
  rep.records.resize(runs);

  auto run_one = [&](std::size_t r) {
    std::vector<std::size_t> subset;
    if (options.stratified) {
      subset = strata[r % strata.size()];
    } else {
      Rng rng(mix_seed(seed, r));
      subset = rng.sample_without_replacement(k, n);
      std::sort(subset.begin(), subset.end());
    }
    rep.records[r] = score_subset(db, subset, options.window);
  };

  if (options.parallel) {
    std::vector<std::exception_ptr> errors(runs);
#pragma omp parallel for schedule(dynamic, 64)
    for (std::size_t r = 0; r < runs; ++r) {
      try {
        run_one(r);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
    for (const auto& e : errors) {
      if (e) { std::rethrow_exception(e); }
    }
  } else {
    for (std::size_t r = 0; r < runs; ++r) { run_one(r); }
  }

  std::vector<double> gaps, pis;
  for (const auto& rec : rep.records) {
    gaps.push_back(rec.gap);
    pis.push_back(rec.pi);
  }
  rep.gap   = summarize(gaps);
  rep.pi    = summarize(pis);
  rep.best  = *std::min_element(rep.records.begin(), rep.records.end(), ranks_before);
  rep.worst = *std::max_element(rep.records.begin(), rep.records.end(), ranks_before);
  return rep;
}

ExhaustiveReport exhaustive(const TraceDb& db, std::size_t n, const SimWindow& window, bool parallel)
{
  check_subset_size(db, n);
  const auto combos = all_combinations(db.configs().size(), n);
  ExhaustiveReport rep;
  rep.n       = n;
  rep.subsets = combos.size();
  rep.ranking.resize(combos.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (std::size_t s = 0; s < combos.size(); ++s) { rep.ranking[s] = score_subset(db, combos[s], window); }
  } else {
    for (std::size_t s = 0; s < combos.size(); ++s) { rep.ranking[s] = score_subset(db, combos[s], window); }
  }
  std::vector<double> gaps, pis;
  for (const auto& s : rep.ranking) {
    gaps.push_back(s.gap);
    pis.push_back(s.pi);
  }
  rep.gap = summarize(gaps);
  rep.pi  = summarize(pis);
  std::sort(rep.ranking.begin(), rep.ranking.end(), ranks_before);
  return rep;
}

std::vector<std::string> rank_configs(const TraceDb& db, const SimWindow& window)
{
  db.require_rectangular();
  std::vector<SubsetScore> scores;
  for (std::size_t c = 0; c < db.configs().size(); ++c) { scores.push_back(score_subset(db, {c}, window)); }
  std::sort(scores.begin(), scores.end(), ranks_before);
  std::vector<std::string> ids;
  for (const auto& s : scores) { ids.push_back(s.ids.front()); }
  return ids;
}

std::string report_to_json(const SimulationReport& report)
{
  json records = json::array();
  for (const auto& r : report.records) { records.push_back(score_json(r)); }
  const json j{{"n", report.n},
               {"runs", report.runs},
               {"gap", summary_json(report.gap)},
               {"pi", summary_json(report.pi)},
               {"best", score_json(report.best)},
               {"worst", score_json(report.worst)},
               {"records", records}};
  return j.dump(2) + "\n";
}

std::string report_to_json(const ExhaustiveReport& report)
{
  json ranking = json::array();
  for (const auto& r : report.ranking) { ranking.push_back(score_json(r)); }
  const json j{{"n", report.n},
               {"subsets", report.subsets},
               {"gap", summary_json(report.gap)},
               {"pi", summary_json(report.pi)},
               {"ranking", ranking}};
  return j.dump(2) + "\n";
}

std::string summary_csv_header() { return "n,runs,pg_mean_pct,pg_std_pct,pi_mean,pi_std\n"; }

std::string summary_csv_row(const SimulationReport& report)
{
  char buf[256];
  const double pm = 100.0 / 60.0;
  std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g,%.17g,%.17g\n", report.n, report.runs, 100.0 * report.gap.mean,
                100.0 * report.gap.std, pm * report.pi.mean, pm * report.pi.std);
  return buf;
}

}  // namespace mipfolio
