/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

// Serial reference vs OpenMP paths for subset simulation, exhaustive
// enumeration and simulated-clock portfolios.

#include <mipfolio/configspace.hpp>
#include <mipfolio/generators.hpp>
#include <mipfolio/orchestrator.hpp>
#include <mipfolio/simulator.hpp>

#include <benchmark/benchmark.h>

using namespace mipfolio;

namespace {

const TraceDb& trace_db()
{
  static const TraceDb db = [] {
    Rng rng(1);
    TraceDb d;
    for (int c = 0; c < 24; ++c) {
      for (int i = 0; i < 8; ++i) {
        std::vector<TracePoint> pts;
        double t = 0.0, g = rng.uniform(0.3, 1.0);
        for (int k = 0; k < 12; ++k) {
          pts.push_back(TracePoint{t, 1.0 + g, g});
          t += rng.uniform(1.0, 25.0);
          g *= rng.uniform(0.3, 0.95);
        }
        d.add("c" + std::to_string(c), "i" + std::to_string(i), GapTrace(pts, 400.0));
      }
    }
    return d;
  }();
  return db;
}

void BM_Simulate(benchmark::State& state)
{
  SimulateOptions o;
  o.parallel = state.range(0) != 0;
  for (auto _ : state) { benchmark::DoNotOptimize(simulate(trace_db(), 8, 2000, 3, o)); }
  state.SetItemsProcessed(state.iterations() * 2000);
}
BENCHMARK(BM_Simulate)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_Exhaustive(benchmark::State& state)
{
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) { benchmark::DoNotOptimize(exhaustive(trace_db(), 3, {}, parallel)); }
}
BENCHMARK(BM_Exhaustive)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_Portfolio(benchmark::State& state)
{
  static const MipModel model = gen::set_cover(25, 60, 4);
  static const auto pool      = generate_pool(8, 5);
  PortfolioOptions o;
  o.parallel = state.range(0) != 0;
  const PortfolioPlan plan{pool, 1, pool.size(), 3.0, 1};
  for (auto _ : state) { benchmark::DoNotOptimize(run_portfolio(model, plan, std::nullopt, o)); }
}
BENCHMARK(BM_Portfolio)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
