/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

// Command-line front end: pool generation, single-worker and portfolio
// runs, trace-database simulation and the scaled reproduction preset.

#include <mipfolio/alns.hpp>
#include <mipfolio/configspace.hpp>
#include <mipfolio/error.hpp>
#include <mipfolio/generators.hpp>
#include <mipfolio/metrics.hpp>
#include <mipfolio/model.hpp>
#include <mipfolio/orchestrator.hpp>
#include <mipfolio/simulator.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mipfolio;

namespace {

enum Exit : int { ok = 0, usage = 2, data = 3, empty = 4 };

int exit_code(Errc code)
{
  switch (code) {
    case Errc::invalid_argument: return usage;
    case Errc::no_feasible_solution:
    case Errc::all_workers_infeasible: return empty;
    default: return data;
  }
}

std::size_t default_core_cap()
{
  if (const char* env = std::getenv("MIPFOLIO_CORE_CAP")) {
    char* end         = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (*end != '\0' || v < 1) { fail(Errc::invalid_argument, "MIPFOLIO_CORE_CAP must be a positive integer"); }
    return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void write_file(const fs::path& path, const std::string& text)
{
  if (path.has_parent_path()) { fs::create_directories(path.parent_path()); }
  std::ofstream out(path, std::ios::binary);
  if (!out) { fail(Errc::io_error, "cannot write '" + path.string() + "'"); }
  out << text;
}

std::string read_file(const fs::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) { fail(Errc::io_error, "cannot open '" + path.string() + "'"); }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::unique_ptr<Clock> make_clock(const std::string& kind, double tick)
{
  if (kind == "simulated") { return std::make_unique<SimulatedClock>(tick); }
  return std::make_unique<WallClock>();
}

// ---------------------------------------------------------------- gen-configs

struct GenConfigsArgs {
  std::size_t size   = 180;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_gen_configs(const GenConfigsArgs& a)
{
  const auto pool = generate_pool(a.size, a.seed);
  write_file(a.out, pool_to_json(pool));
  std::printf("wrote %zu configurations to %s\n", pool.size(), a.out.c_str());
  return ok;
}

// ---------------------------------------------------------------------- solve

struct SolveArgs {
  std::string instance;
  std::string pool;
  std::string config_id;
  double seconds     = 10.0;
  std::uint64_t seed = 0;
  std::string clock  = "simulated";
  double tick        = 0.01;
  std::optional<double> reference;
  std::string out_dir = ".";
};

Configuration pick_config(const std::string& pool_path, const std::string& id)
{
  if (pool_path.empty()) {
    if (!id.empty() && id != "default") { fail(Errc::invalid_argument, "--config needs --pool"); }
    return default_config();
  }
  const auto pool = read_pool_file(pool_path);
  if (id.empty()) { return pool.front(); }
  for (const auto& c : pool) {
    if (c.id == id) { return c; }
  }
  fail(Errc::invalid_argument, "configuration " + id + " is not in " + pool_path);
}

int cmd_solve(const SolveArgs& a)
{
  const MipModel model      = read_mps_file(a.instance);
  const Configuration cfg   = pick_config(a.pool, a.config_id);
  auto clock                = make_clock(a.clock, a.tick);
  WorkerOptions o;
  o.wall_seconds        = a.seconds;
  o.seed                = a.seed;
  o.clock               = clock.get();
  o.reference_objective = a.reference;
  const WorkerResult r  = run_worker(model, cfg, o);

  json pulls = json::object();
  for (std::size_t i = 0; i < cfg.destroy_ops.size(); ++i) { pulls[cfg.destroy_ops[i].id()] = r.pulls[i]; }
  const json summary{{"instance", model.name()},
                     {"config_id", cfg.id},
                     {"status", to_string(r.status)},
                     {"objective", r.best ? json(r.best->objective) : json(nullptr)},
                     {"initial_objective", r.events.empty() ? json(nullptr) : json(r.events.front().objective)},
                     {"iterations", r.iterations},
                     {"seconds", a.seconds},
                     {"clock", a.clock},
                     {"seed", a.seed},
                     {"reference_objective", a.reference ? json(*a.reference) : json(nullptr)},
                     {"final_gap", r.trace.final_gap()},
                     {"pulls", pulls}};
  write_file(fs::path(a.out_dir) / "trace.csv", trace_to_csv(r.trace));
  write_file(fs::path(a.out_dir) / "summary.json", summary.dump(2) + "\n");
  if (r.status == WorkerStatus::no_feasible_solution) {
    std::fprintf(stderr, "NoFeasibleSolution: initial phase found no feasible solution\n");
    return empty;
  }
  std::printf("%s: objective %.17g after %zu iterations\n", cfg.id.c_str(), r.best->objective, r.iterations);
  return ok;
}

// ------------------------------------------------------------------ portfolio

struct Manifest {
  std::string instance;
  std::vector<Configuration> pool;
  std::optional<std::size_t> n;
  std::size_t threads_per_worker = 1;
  std::size_t core_cap           = 0;
  double wall_seconds            = 0.0;
  std::uint64_t master_seed      = 0;
  std::optional<double> reference_objective;
  std::optional<std::vector<std::string>> ranking;
  PortfolioOptions options;
};

Manifest load_manifest(const std::string& path)
{
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    fail(Errc::invalid_config, path + ": " + e.what());
  }
  if (!j.is_object()) { fail(Errc::invalid_config, "manifest must be a JSON object"); }
  static const std::vector<std::string> keys{"instance",       "pool",        "configs",   "n",
                                             "threads_per_worker", "core_cap", "wall_seconds", "master_seed",
                                             "reference_objective", "ranking", "clock",     "seconds_per_tick",
                                             "parallel",       "backend"};
  for (const auto& [k, _] : j.items()) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) { fail(Errc::invalid_config, "unknown manifest key '" + k + "'"); }
  }
  const fs::path base = fs::path(path).parent_path();
  auto resolve        = [&](const std::string& p) { return fs::path(p).is_absolute() ? p : (base / p).string(); };

  Manifest m;
  try {
    if (!j.contains("instance") || !j.contains("wall_seconds")) {
      fail(Errc::invalid_config, "manifest needs 'instance' and 'wall_seconds'");
    }
    m.instance     = resolve(j.at("instance").get<std::string>());
    m.wall_seconds = j.at("wall_seconds").get<double>();
    if (j.contains("pool") == j.contains("configs")) {
      fail(Errc::invalid_config, "manifest needs exactly one of 'pool' and 'configs'");
    }
    m.pool = j.contains("pool") ? read_pool_file(resolve(j.at("pool").get<std::string>()))
                                : pool_from_json(j.at("configs").dump());
    if (j.contains("n")) { m.n = j.at("n").get<std::size_t>(); }
    m.threads_per_worker = j.value("threads_per_worker", std::size_t{1});
    m.core_cap           = j.contains("core_cap") ? j.at("core_cap").get<std::size_t>() : default_core_cap();
    m.master_seed        = j.value("master_seed", std::uint64_t{0});
    if (j.contains("reference_objective")) { m.reference_objective = j.at("reference_objective").get<double>(); }
    if (j.contains("ranking")) { m.ranking = j.at("ranking").get<std::vector<std::string>>(); }
    const std::string clock = j.value("clock", std::string("simulated"));
    if (clock != "simulated" && clock != "wall") { fail(Errc::invalid_config, "clock must be 'simulated' or 'wall'"); }
    m.options.clock            = clock == "wall" ? ClockMode::wall : ClockMode::simulated;
    m.options.seconds_per_tick = j.value("seconds_per_tick", 0.01);
    m.options.parallel         = j.value("parallel", false);
    m.options.backend          = j.value("backend", std::string("reference"));
  } catch (const json::exception& e) {
    fail(Errc::invalid_config, std::string("manifest field has the wrong type: ") + e.what());
  }
  return m;
}

int cmd_portfolio(const std::string& manifest_path, const std::string& out_dir)
{
  const Manifest m    = load_manifest(manifest_path);
  const MipModel model = read_mps_file(m.instance);
  PortfolioPlan plan;
  if (m.n) {
    // explicit N: take it from ranking or pool order and let validation judge the cap
    std::vector<Configuration> chosen;
    if (m.ranking) {
      chosen = plan_for_threads(m.pool, 1, m.ranking->size(), m.ranking).configs;
    } else {
      chosen = m.pool;
    }
    if (*m.n > chosen.size()) { fail(Errc::invalid_config, "n exceeds the available configurations"); }
    chosen.resize(*m.n);
    plan = PortfolioPlan{chosen, m.threads_per_worker, m.core_cap, m.wall_seconds, m.master_seed};
  } else {
    plan = plan_for_threads(m.pool, m.threads_per_worker, m.core_cap, m.ranking, m.wall_seconds, m.master_seed);
  }
  const PortfolioResult r = run_portfolio(model, plan, m.reference_objective, m.options);

  const fs::path out(out_dir);
  json workers = json::array();
  for (const auto& w : r.workers) {
    write_file(out / "workers" / (w.config_id + ".csv"), trace_to_csv(w.trace));
    workers.push_back(json{{"config_id", w.config_id},
                           {"status", to_string(w.status)},
                           {"objective", w.best ? json(w.best->objective) : json(nullptr)},
                           {"iterations", w.iterations},
                           {"final_gap", w.trace.final_gap()}});
  }
  write_file(out / "aggregate.csv", trace_to_csv(r.aggregate));
  const json summary{{"instance", model.name()},
                     {"n", plan.configs.size()},
                     {"threads_per_worker", plan.threads_per_worker},
                     {"core_cap", plan.core_cap},
                     {"wall_seconds", plan.wall_seconds},
                     {"reference_objective", r.reference_objective},
                     {"final_gap", r.aggregate.final_gap()},
                     {"primal_integral", primal_integral(r.aggregate, 0.0, plan.wall_seconds)},
                     {"best_config_id", r.best_config_id},
                     {"workers", workers}};
  write_file(out / "summary.json", summary.dump(2) + "\n");
  std::printf("%zu workers, final gap %.6g (best %s)\n", plan.configs.size(), r.aggregate.final_gap(),
              r.best_config_id.c_str());
  return ok;
}

// ------------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string traces;
  std::size_t n      = 2;
  std::size_t runs   = 1000;
  std::uint64_t seed = 0;
  double t0          = 0.0;
  std::optional<double> t1;
  std::optional<double> horizon;
  bool exhaustive = false;
  bool stratified = false;
  bool parallel   = false;
  std::string out = "report.json";
  std::string csv;
};

int cmd_simulate(const SimulateArgs& a)
{
  const TraceDb db = TraceDb::load(a.traces, a.horizon);
  if (a.n > db.configs().size()) {
    fail(Errc::invalid_argument, "n = " + std::to_string(a.n) + " exceeds the pool of " + std::to_string(db.configs().size()));
  }
  const SimWindow window{a.t0, a.t1};
  if (a.exhaustive) {
    const auto rep = exhaustive(db, a.n, window, a.parallel);
    write_file(a.out, report_to_json(rep));
    std::printf("%zu subsets, expected gap %.6g, best %s\n", rep.subsets, rep.gap.mean,
                json(rep.ranking.front().ids).dump().c_str());
    return ok;
  }
  const auto rep = simulate(db, a.n, a.runs, a.seed, SimulateOptions{window, a.stratified, a.parallel});
  write_file(a.out, report_to_json(rep));
  if (!a.csv.empty()) { write_file(a.csv, summary_csv_header() + summary_csv_row(rep)); }
  std::printf("n=%zu runs=%zu gap %.6g +- %.6g, PI %.6g +- %.6g\n", rep.n, rep.runs, rep.gap.mean, rep.gap.std,
              rep.pi.mean, rep.pi.std);
  return ok;
}

// ---------------------------------------------------------------------- repro

struct ReproArgs {
  double scale       = 0.05;
  std::size_t steps  = 300;
  std::uint64_t seed = 2025;
  std::string out_dir = "repro";
  bool parallel      = true;
};

int cmd_repro(const ReproArgs& a)
{
  // full-size constants, shrunk by --scale
  const std::size_t pool_size = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(180 * a.scale)));
  const std::size_t runs      = std::max<std::size_t>(10, static_cast<std::size_t>(std::ceil(1000 * a.scale)));
  const double horizon        = 3600.0 * a.scale;
  const double warmup         = horizon / 10.0;
  const fs::path out(a.out_dir);

  const std::vector<MipModel> instances{gen::knapsack(80, a.seed), gen::set_cover(40, 80, a.seed + 1),
                                        gen::independent_set(80, 0.06, a.seed + 2)};
  const auto pool = generate_pool(pool_size, a.seed);
  write_file(out / "pool.json", pool_to_json(pool));

  // one worker run per (configuration, instance), as recorded traces
  TraceDb db;
  for (const auto& model : instances) {
    write_file(out / "instances" / (model.name() + ".mps"), write_mps(model));
    PortfolioOptions o;
    o.seconds_per_tick = horizon / static_cast<double>(a.steps);
    o.parallel         = a.parallel;
    const PortfolioPlan plan{pool, 1, pool.size(), horizon, a.seed};
    try {
      const auto r = run_portfolio(model, plan, std::nullopt, o);
      for (const auto& w : r.workers) { db.add(w.config_id, model.name(), w.trace); }
    } catch (const Error& e) {
      if (e.code() != Errc::all_workers_infeasible) { throw; }
      std::fprintf(stderr, "warning: skipping %s: %s\n", model.name().c_str(), e.what());
    }
  }
  if (db.instances().empty()) { fail(Errc::all_workers_infeasible, "no instance produced a feasible trace"); }
  db.save((out / "traces").string());

  const SimWindow window{warmup, std::nullopt};
  const auto ranking = rank_configs(db, window);
  write_file(out / "ranking.json", json(ranking).dump(2) + "\n");

  std::string csv = summary_csv_header();
  for (std::size_t n = 2; n <= 128 && n <= pool.size(); n *= 2) {
    const auto rep = simulate(db, n, runs, a.seed, SimulateOptions{window, false, a.parallel});
    csv += summary_csv_row(rep);
    write_file(out / ("simulation_n" + std::to_string(n) + ".json"), report_to_json(rep));
  }
  write_file(out / "simulation.csv", csv);

  // N for T = 1, 4, 8, 16 at a 180-core cap, by division and from the ranked top lists
  const auto full = generate_pool(180, a.seed);
  std::string splits = "threads,n_division,n_ranked\n";
  const std::pair<std::size_t, std::size_t> tops[] = {{1, 180}, {4, 45}, {8, 20}, {16, 10}};
  for (auto [t, top] : tops) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < top; ++i) { ids.push_back(full[i].id); }
    splits += std::to_string(t) + "," + std::to_string(plan_for_threads(full, t, 180).configs.size()) + "," +
              std::to_string(plan_for_threads(full, t, 180, ids).configs.size()) + "\n";
  }
  write_file(out / "plan_splits.csv", splits);
  std::printf("pool %zu, runs %zu, horizon %.0fs; outputs in %s\n", pool_size, runs, horizon, a.out_dir.c_str());
  return ok;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Parallel portfolio of bandit-controlled adaptive LNS workers for MIP"};
  app.require_subcommand(1);

  GenConfigsArgs gen_args;
  auto* gen = app.add_subcommand("gen-configs", "Generate a pool of distinct configurations");
  gen->add_option("--size", gen_args.size, "Pool size")->check(CLI::Range(std::size_t{1}, kMaxPoolSize));
  gen->add_option("--seed", gen_args.seed, "Seed");
  gen->add_option("--out", gen_args.out, "Output JSON path")->required();

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Run one worker on an MPS instance");
  solve->add_option("--instance", solve_args.instance, "MPS file")->required();
  solve->add_option("--pool", solve_args.pool, "Pool JSON (default configuration when omitted)");
  solve->add_option("--config", solve_args.config_id, "Configuration id in the pool");
  solve->add_option("--seconds", solve_args.seconds, "Time budget")->check(CLI::PositiveNumber);
  solve->add_option("--seed", solve_args.seed, "Seed");
  solve->add_option("--clock", solve_args.clock, "simulated or wall")->check(CLI::IsMember({"simulated", "wall"}));
  solve->add_option("--tick", solve_args.tick, "Simulated seconds per search step")->check(CLI::PositiveNumber);
  solve->add_option("--reference", solve_args.reference, "Best-known objective for the gap");
  solve->add_option("--out-dir", solve_args.out_dir, "Directory for trace.csv and summary.json");

  std::string manifest, portfolio_out = ".";
  auto* portfolio = app.add_subcommand("portfolio", "Run a portfolio described by a JSON manifest");
  portfolio->add_option("--manifest", manifest, "Manifest JSON")->required();
  portfolio->add_option("--out-dir", portfolio_out, "Output directory");

  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Sample configuration subsets from recorded traces");
  sim->add_option("--traces", sim_args.traces, "Trace database directory")->required();
  sim->add_option("--n", sim_args.n, "Subset size")->check(CLI::PositiveNumber);
  sim->add_option("--runs", sim_args.runs, "Simulation runs")->check(CLI::PositiveNumber);
  sim->add_option("--seed", sim_args.seed, "Seed");
  sim->add_option("--t0", sim_args.t0, "Window start")->check(CLI::NonNegativeNumber);
  sim->add_option("--t1", sim_args.t1, "Window end (default: horizon)");
  sim->add_option("--horizon", sim_args.horizon, "Horizon when the database has no horizons.json");
  sim->add_flag("--exhaustive", sim_args.exhaustive, "Enumerate every subset instead of sampling");
  sim->add_flag("--stratified", sim_args.stratified, "Cycle through subsets in lexicographic order");
  sim->add_flag("--parallel", sim_args.parallel, "Evaluate runs on OpenMP threads");
  sim->add_option("--out", sim_args.out, "Report JSON path");
  sim->add_option("--csv", sim_args.csv, "Summary CSV path");

  ReproArgs repro_args;
  auto* repro = app.add_subcommand("repro", "Scaled-down reproduction preset");
  repro->add_option("--scale", repro_args.scale, "Fraction of the full-size experiment")->check(CLI::Range(0.001, 1.0));
  repro->add_option("--steps", repro_args.steps, "Search steps per horizon")->check(CLI::PositiveNumber);
  repro->add_option("--seed", repro_args.seed, "Seed");
  repro->add_option("--out-dir", repro_args.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : usage;
  }

  try {
    if (gen->parsed()) { return cmd_gen_configs(gen_args); }
    if (solve->parsed()) { return cmd_solve(solve_args); }
    if (portfolio->parsed()) { return cmd_portfolio(manifest, portfolio_out); }
    if (sim->parsed()) { return cmd_simulate(sim_args); }
    if (repro->parsed()) { return cmd_repro(repro_args); }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return data;
  }
  return usage;
}
