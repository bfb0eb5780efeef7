// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "oracles.hpp"

#include <mipfolio/alns.hpp>
#include <mipfolio/configspace.hpp>
#include <mipfolio/error.hpp>
#include <mipfolio/generators.hpp>
#include <mipfolio/lp.hpp>
#include <mipfolio/metrics.hpp>
#include <mipfolio/orchestrator.hpp>
#include <mipfolio/simulator.hpp>
#include <mipfolio/subsolver.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

using namespace mipfolio;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what)
  {
    if (!cond && ok) {
      ok     = false;
      detail = what;
    }
  }
};

int failures = 0;

void criterion(int id, const char* name, double time_limit, const std::function<Check()>& body)
{
  const auto start = std::chrono::steady_clock::now();
  Check c;
  try {
    c = body();
  } catch (const std::exception& e) {
    c.ok     = false;
    c.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (c.ok && secs > time_limit) {
    c.ok     = false;
    c.detail = "took " + std::to_string(secs) + " s, limit " + std::to_string(time_limit) + " s";
  }
  failures += c.ok ? 0 : 1;
  std::printf("[%s] criterion %d: %s (%.2f s)%s%s\n", c.ok ? "PASS" : "FAIL", id, name, secs,
              c.detail.empty() ? "" : " - ", c.detail.c_str());
  std::fflush(stdout);
}

std::set<Family> families_of(const std::vector<OperatorSpec>& ops)
{
  std::set<Family> f;
  for (const auto& op : ops) { f.insert(op.family); }
  return f;
}

bool throws_code(Errc code, const std::function<void()>& fn)
{
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

GapTrace step(std::initializer_list<std::pair<double, double>> pts, double horizon)
{
  std::vector<TracePoint> v;
  for (auto [t, g] : pts) { v.push_back(TracePoint{t, 1.0 + g, g}); }
  return GapTrace(v, horizon);
}

Check configuration_space()
{
  Check c;
  Rng rng(20260101);
  std::vector<int> counts(17, 0);
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const Configuration cfg = sample_config(rng);
    try {
      cfg.validate();
    } catch (const Error& e) {
      c.require(false, std::string("invalid sample: ") + e.what());
    }
    if (cfg.policy.kind == PolicyKind::thompson) {
      c.require(cfg.rewards == RewardVector{1, 1, 1, 0} || cfg.rewards == RewardVector{1, 1, 0, 0},
                "Thompson sample with a non-binary reward vector");
    }
    for (const auto& op : cfg.destroy_ops) {
      const auto allowed = allowed_percentages(op.family);
      if (op.family == Family::crossover) {
        c.require(!op.percentage, "crossover with a percentage");
      } else {
        c.require(std::find(allowed.begin(), allowed.end(), *op.percentage) != allowed.end(),
                  "operator " + op.id() + " outside its percentage pool");
      }
      if (op.family == Family::proximity) {
        const int p = *op.percentage;
        c.require(p == 5 || p == 10 || p == 15 || p == 20 || p == 30, "proximity percentage " + op.id());
      }
    }
    if (cfg.destroy_ops.size() >= 6) { c.require(families_of(cfg.destroy_ops).size() == 6, "N >= 6 without all families"); }
    ++counts[cfg.destroy_ops.size()];
  }
  const double expected = n / 13.0;
  double chi2           = 0.0;
  for (int k = 4; k <= 16; ++k) { chi2 += (counts[k] - expected) * (counts[k] - expected) / expected; }
  c.require(chi2 < 32.909, "chi-square " + std::to_string(chi2) + " >= 32.909");
  return c;
}

Check algorithm_branches()
{
  Check c;
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const auto four = sample_destroy_set(rng, 4);
    c.require(four.size() == 4 && families_of(four).size() == 4, "N=4 draw without 4 distinct families");
    const auto six = sample_destroy_set(rng, 6);
    c.require(six.size() == 6 && families_of(six).size() == 6, "N=6 draw not one per family");
    const auto sixteen = sample_destroy_set(rng, 16);
    std::set<std::string> ids;
    for (const auto& op : sixteen) { ids.insert(op.id()); }
    c.require(ids.size() == 16, "N=16 draw with repeated identifiers");
  }
  return c;
}

Check pool_and_plan()
{
  Check c;
  const auto a = generate_pool(180, 7);
  const auto b = generate_pool(180, 7);
  std::set<std::string> prints;
  for (const auto& cfg : a) { prints.insert(cfg.fingerprint()); }
  c.require(a.size() == 180 && prints.size() == 180, "pool not 180 unique configurations");
  c.require(a == b, "pool generation not deterministic");

  c.require(plan_for_threads(a, 4, 180).configs.size() == 45, "T=4 does not give N=45");
  std::vector<std::string> top20;
  for (std::size_t i = 0; i < 20; ++i) { top20.push_back(a[i].id); }
  c.require(plan_for_threads(a, 8, 180, top20).configs.size() == 20, "T=8 with the top-20 ranking does not give N=20");
  c.require(plan_for_threads(a, 8, 180).configs.size() == 22, "T=8 by division is not floor(180/8)");

  std::vector<Configuration> twenty(a.begin(), a.begin() + 20);
  c.require(throws_code(Errc::plan_invalid, [&] { PortfolioPlan{twenty, 10, 192, 10.0, 0}.validate(); }),
            "N=20, T=10, cap 192 accepted");
  std::vector<Configuration> many(a.begin(), a.begin() + 46);
  c.require(throws_code(Errc::plan_invalid, [&] { PortfolioPlan{many, 4, 180, 10.0, 0}.validate(); }),
            "N=46, T=4, cap 180 accepted");
  return c;
}

Check subsolver_exactness()
{
  Check c;
  SolveBudget budget;
  budget.node_limit = 1000000;
  for (std::size_t k = 0; k < 50; ++k) {
    const MipModel m    = oracle::binary_instance(k);
    const auto expected = oracle::mip_by_enumeration(m);
    const MipResult r   = solve_mip(m, std::nullopt, budget, 0);
    c.require(expected.has_value() && r.incumbent.has_value(), m.name() + ": missing solution");
    if (!expected || !r.incumbent) { continue; }
    c.require(r.status == MipStatus::optimal, m.name() + ": not proven optimal");
    c.require(r.incumbent->objective == *expected, m.name() + ": optimum differs from enumeration");
    const double opt = m.to_min(*expected);
    c.require(m.to_min(r.dual_bound) <= opt + 1e-9 && opt <= m.to_min(r.incumbent->objective) + 1e-9,
              m.name() + ": dual <= optimum <= incumbent violated");
  }
  return c;
}

Check lp_correctness()
{
  Check c;
  Rng rng(555);
  for (int trial = 0; trial < 100; ++trial) {
    const MipModel m    = oracle::random_box_lp(rng, 1 + rng.index(6), rng.index(9));
    const auto expected = oracle::lp_by_vertex_enumeration(m);
    const auto r        = lp::solve_lp(m);
    if (!expected) {
      c.require(r.status == lp::Status::infeasible, "trial " + std::to_string(trial) + ": oracle infeasible");
      continue;
    }
    c.require(r.status == lp::Status::optimal, "trial " + std::to_string(trial) + ": not optimal");
    c.require(std::abs(r.objective - *expected) <= 1e-6, "trial " + std::to_string(trial) + ": objective differs");
  }
  return c;
}

Check metrics()
{
  Check c;
  struct Row {
    double x, xs, expect;
    bool capped;
  };
  const Row rows[] = {
    {110, 100, 0.10, true},  {90, 100, 0.10, true},   {100, 100, 0.0, true},     {0, 0, 0.0, true},
    {1, 0, 1.0, true},       {1, 0, 1e10, false},     {-1, 0, 1e10, false},      {-110, -100, 0.10, true},
    {-90, -100, 0.10, true}, {300, 100, 1.0, true},   {300, 100, 2.0, false},    {5, 4, 0.25, true},
    {1e-11, 0, 0.1, true},   {2e-10, 0, 1.0, true},   {2e-10, 0, 2.0, false},    {-50, 50, 1.0, true},
    {-50, 50, 2.0, false},   {7.5, 7.5, 0.0, false},  {1000.5, 1000, 5e-4, true}, {0, 12, 1.0, true},
  };
  for (const auto& r : rows) {
    const double g = primal_gap(r.x, r.xs, 1e-10, r.capped);
    c.require(std::abs(g - r.expect) <= 1e-12 * std::max(1.0, r.expect),
              "primal_gap(" + std::to_string(r.x) + ", " + std::to_string(r.xs) + ")");
  }

  struct Case {
    GapTrace trace;
    double t0, t1, expect;
  };
  const Case cases[] = {
    {step({{0, 0.5}}, 100), 0, 100, 50.0},
    {step({{0, 1.0}, {10, 0.0}}, 100), 0, 100, 10.0},
    {step({{0, 1.0}, {60, 0.4}, {120, 0.1}}, 200), 30, 200, 62.0},
    {step({{5, 0.5}}, 10), 0, 10, 7.5},
    {step({{0, 0.2}, {4, 0.1}}, 10), 0, 10, 1.4},
    {step({{1, 0.9}, {2, 0.8}, {3, 0.7}}, 4), 0, 4, 3.4},
    {step({{2, 0.5}, {8, 0.25}}, 10), 1, 9, 4.25},
    {step({{0, 0.0}}, 7), 0, 7, 0.0},
    {step({{10, 0.0}}, 10), 0, 10, 10.0},
    {step({{0.5, 0.75}, {2.5, 0.5}, {6.5, 0.125}}, 8), 0, 8, 4.1875},
  };
  for (const auto& k : cases) {
    c.require(std::abs(primal_integral(k.trace, k.t0, k.t1) - k.expect) <= 1e-12, "primal integral rectangle sum");
  }

  Rng rng(9);
  for (int i = 0; i < 1000; ++i) {
    const GapTrace tr = oracle::random_gap_trace(rng, 100.0);
    double t[3]       = {rng.uniform(0, 100), rng.uniform(0, 100), rng.uniform(0, 100)};
    std::sort(t, t + 3);
    const double lhs = primal_integral(tr, t[0], t[1]) + primal_integral(tr, t[1], t[2]);
    c.require(std::abs(lhs - primal_integral(tr, t[0], t[2])) <= 1e-12, "primal integral additivity");
  }
  return c;
}

Check aggregation_laws()
{
  Check c;
  Rng rng(31337);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = 2 + rng.index(5);
    std::vector<GapTrace> big;
    for (std::size_t i = 0; i < k; ++i) { big.push_back(oracle::random_gap_trace(rng, 50.0)); }
    const std::size_t m = 1 + rng.index(k - 1);
    const std::vector<GapTrace> small(big.begin(), big.begin() + static_cast<std::ptrdiff_t>(m));
    const GapTrace agg_big   = aggregate_min(big);
    const GapTrace agg_small = aggregate_min(small);
    const std::vector<GapTrace> twice{agg_big, agg_big};
    c.require(aggregate_min(twice) == agg_big, "aggregate_min not idempotent");

    std::vector<double> probes{0.0, 50.0};
    for (const auto& tr : big) {
      for (const auto& p : tr.points()) {
        probes.push_back(p.t);
        probes.push_back(std::min(50.0, p.t + 1e-3));
      }
    }
    for (double t : probes) {
      for (const auto& tr : big) { c.require(agg_big.gap_at(t) <= tr.gap_at(t), "aggregate not dominated by an input"); }
      c.require(agg_big.gap_at(t) <= agg_small.gap_at(t), "nested-subset monotonicity violated");
    }
  }
  return c;
}

Check simulator_vs_oracle()
{
  Check c;
  Rng rng(88);
  TraceDb db;
  for (int cfg = 0; cfg < 6; ++cfg) {
    for (int inst = 0; inst < 3; ++inst) {
      db.add("cfg" + std::to_string(cfg), "inst" + std::to_string(inst), oracle::random_gap_trace(rng, 100.0 + 20 * inst));
    }
  }
  const auto ex = exhaustive(db, 2);
  c.require(ex.subsets == 15, "exhaustive did not enumerate 15 subsets");

  // independent ranking: pairwise minimum computed directly from the traces
  std::vector<SubsetScore> oracle_rank;
  double expected_gap = 0.0;
  for (std::size_t a = 0; a < 6; ++a) {
    for (std::size_t b = a + 1; b < 6; ++b) {
      SubsetScore s{{db.configs()[a], db.configs()[b]}, 0.0, 0.0};
      for (std::size_t i = 0; i < 3; ++i) {
        const std::vector<GapTrace> pair{db.trace(a, i), db.trace(b, i)};
        const auto [g, pi] = oracle::expected_subset_scores(pair, 2, 0.0, db.trace(a, i).horizon());
        s.gap += g / 3.0;
        s.pi += pi / 3.0;
      }
      expected_gap += s.gap / 15.0;
      oracle_rank.push_back(s);
    }
  }
  std::sort(oracle_rank.begin(), oracle_rank.end(), [](const SubsetScore& x, const SubsetScore& y) {
    if (std::abs(x.gap - y.gap) > 1e-12) { return x.gap < y.gap; }
    if (std::abs(x.pi - y.pi) > 1e-9) { return x.pi < y.pi; }
    return x.ids < y.ids;
  });
  c.require(std::abs(ex.gap.mean - expected_gap) <= 1e-12, "exhaustive expectation differs from the oracle");
  c.require(ex.ranking.front().ids == oracle_rank.front().ids, "best subset differs from the oracle ranking");

  const std::size_t runs = 100000;
  const auto sim         = simulate(db, 2, runs, 2024);
  const double sigma     = ex.gap.std / std::sqrt(static_cast<double>(runs));
  c.require(std::abs(sim.gap.mean - ex.gap.mean) <= 3.0 * sigma,
            "simulated mean " + std::to_string(sim.gap.mean) + " vs exact " + std::to_string(ex.gap.mean));
  c.require(sim.best.ids == oracle_rank.front().ids, "simulated best subset differs from the oracle");
  return c;
}

// criterion 9 and 10 share this run
struct EndToEnd {
  std::vector<std::string> csvs;  // aggregate and worker CSVs, per instance
  Check check;
  std::string summary;
};

EndToEnd end_to_end()
{
  EndToEnd out;
  const std::vector<MipModel> instances{gen::knapsack(60, 301), gen::set_cover(30, 60, 302),
                                        gen::independent_set(60, 0.1, 303)};
  const auto pool        = generate_pool(4, 404);
  const double horizon   = 3.0;
  const std::uint64_t ms = 2026;
  const PortfolioPlan plan{pool, 1, 4, horizon, ms};

  int benefit = 0;
  for (const auto& m : instances) {
    SolveBudget exact;
    exact.node_limit = 500000;
    const MipResult best_known = solve_mip(m, std::nullopt, exact, 0);
    out.check.require(best_known.status == MipStatus::optimal, m.name() + ": reference not proven optimal");
    const double ref = best_known.incumbent->objective;

    const PortfolioResult r = run_portfolio(m, plan, ref);
    out.csvs.push_back(trace_to_csv(r.aggregate));
    for (const auto& w : r.workers) { out.csvs.push_back(trace_to_csv(w.trace)); }

    // every worker rerun on its own, outside the orchestrator
    double min_individual = kInf;
    for (const auto& cfg : pool) {
      SimulatedClock clock;
      WorkerOptions o;
      o.wall_seconds        = horizon;
      o.seed                = worker_seed(ms, cfg.id);
      o.clock               = &clock;
      o.reference_objective = ref;
      const WorkerResult w  = run_worker(m, cfg, o);
      min_individual        = std::min(min_individual, w.trace.final_gap());
    }
    out.check.require(r.aggregate.final_gap() <= min_individual, m.name() + ": aggregate worse than a worker");

    // default configuration alone with N times the budget
    SimulatedClock clock;
    WorkerOptions o;
    o.wall_seconds        = horizon * static_cast<double>(pool.size());
    o.seed                = ms;
    o.clock               = &clock;
    o.reference_objective = ref;
    const WorkerResult single = run_worker(m, default_config(), o);
    const double single_gap   = single.trace.final_gap();
    benefit += r.aggregate.final_gap() <= single_gap ? 1 : 0;

    char buf[160];
    std::snprintf(buf, sizeof buf, "%s%s portfolio %.4g / best worker %.4g / default %.4g", out.summary.empty() ? "" : "; ",
                  m.name().c_str(), r.aggregate.final_gap(), min_individual, single_gap);
    out.summary += buf;
  }
  out.check.require(benefit >= 2, "portfolio beat or tied the default run on only " + std::to_string(benefit) + " of 3");
  return out;
}

}  // namespace

int main()
{
  criterion(1, "configuration-space fidelity", 5.0, configuration_space);
  criterion(2, "destroy-set branch behavior", kInf, algorithm_branches);
  criterion(3, "pool and plan structural constants", kInf, pool_and_plan);
  criterion(4, "sub-solver exactness on 50 binary instances", 60.0, subsolver_exactness);
  criterion(5, "LP correctness on 100 random LPs", kInf, lp_correctness);
  criterion(6, "primal gap and primal integral", kInf, metrics);
  criterion(7, "min-aggregation laws", kInf, aggregation_laws);
  criterion(8, "simulator against the exhaustive oracle", kInf, simulator_vs_oracle);

  EndToEnd first;
  criterion(9, "desk-scale portfolio", 300.0, [&] {
    first = end_to_end();
    std::printf("  %s\n", first.summary.c_str());
    return first.check;
  });
  criterion(10, "byte-identical reruns", 300.0, [&] {
    Check c;
    const EndToEnd second = end_to_end();
    c.require(!first.csvs.empty() && second.csvs == first.csvs, "CSV output changed between runs");
    return c;
  });
  return failures == 0 ? 0 : 1;
}
