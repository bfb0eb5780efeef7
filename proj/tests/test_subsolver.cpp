#include <doctest.h>

#include "oracles.hpp"

#include <mipfolio/error.hpp>
#include <mipfolio/generators.hpp>
#include <mipfolio/subsolver.hpp>

#include <cmath>

using namespace mipfolio;

namespace {

SolveBudget nodes_only(std::size_t n)
{
  SolveBudget b;
  b.node_limit = n;
  return b;
}

}  // namespace

TEST_CASE("12-item knapsack matches exhaustive enumeration")
{
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const MipModel ks = gen::knapsack(12, seed);
    const auto expected = oracle::mip_by_enumeration(ks);
    REQUIRE(expected);
    const MipResult r = solve_mip(ks, std::nullopt, nodes_only(100000), seed);
    REQUIRE(r.status == MipStatus::optimal);
    CHECK(r.incumbent->objective == doctest::Approx(*expected).epsilon(1e-12));
    CHECK(r.incumbent->feasible);
    CHECK(r.incumbent->integral);
  }
}

TEST_CASE("integral LP relaxation is solved at the root")
{
  // min x + y s.t. x >= 1, y >= 0 on binaries: relaxation optimum is integral
  const MipModel m("root", Sense::minimize,
                   {Variable{"x", VarKind::binary, 0, 1}, Variable{"y", VarKind::binary, 0, 1}},
                   {LinearConstraint{"c", {Term{0, 1.0}}, Relation::ge, 1.0}},
                   Objective{{Term{0, 1.0}, Term{1, 1.0}}, 0.0});
  const MipResult r = solve_mip(m, std::nullopt, nodes_only(10), 0);
  CHECK(r.status == MipStatus::optimal);
  CHECK(r.nodes == 1);
  CHECK(r.incumbent->objective == 1.0);
}

TEST_CASE("zero wall budget returns the warm start")
{
  const MipModel ks = gen::knapsack(12, 2);
  std::vector<double> zeros(12, 0.0);
  const Solution warm = evaluate(ks, zeros);
  SolveBudget b;
  b.wall_seconds = 0.0;
  const MipResult r = solve_mip(ks, warm, b, 0);
  CHECK(r.status == MipStatus::feasible);
  REQUIRE(r.incumbent);
  CHECK(r.incumbent->values == zeros);
  CHECK(r.nodes == 0);

  const MipResult cold = solve_mip(ks, std::nullopt, b, 0);
  CHECK(cold.status == MipStatus::unknown);
  CHECK_FALSE(cold.incumbent);
}

TEST_CASE("never worse than the warm start")
{
  const MipModel ks = gen::knapsack(14, 8);
  const auto opt = oracle::mip_by_enumeration(ks);
  // warm start = the optimum itself, found by a full solve
  const MipResult full = solve_mip(ks, std::nullopt, nodes_only(100000), 0);
  const MipResult r = solve_mip(ks, full.incumbent, nodes_only(3), 0);
  REQUIRE(r.incumbent);
  CHECK(r.incumbent->objective == doctest::Approx(*opt));
}

TEST_CASE("find_first_feasible")
{
  SUBCASE("set cover with unit costs")
  {
    const MipModel sc = gen::set_cover(10, 14, 42, true);
    const MipResult r = find_first_feasible(sc, nodes_only(10000), 0);
    CHECK((r.status == MipStatus::feasible || r.status == MipStatus::optimal));
    REQUIRE(r.incumbent);
    const Solution check = evaluate(sc, r.incumbent->values);
    CHECK(check.feasible);
    CHECK(check.integral);
  }
  SUBCASE("infeasible toy")
  {
    const MipModel m("bad", Sense::minimize, {Variable{"x", VarKind::binary, 0, 1}},
                     {LinearConstraint{"lo", {Term{0, 1.0}}, Relation::ge, 1.0},
                      LinearConstraint{"hi", {Term{0, 1.0}}, Relation::le, 0.0}},
                     Objective{{Term{0, 1.0}}, 0.0});
    const MipResult r = find_first_feasible(m, nodes_only(100), 0);
    CHECK(r.status == MipStatus::infeasible);
    CHECK_FALSE(r.incumbent);
  }
  SUBCASE("pure LP")
  {
    const MipModel m("lp", Sense::minimize, {Variable{"x", VarKind::continuous, 0, 4}},
                     {LinearConstraint{"c", {Term{0, 2.0}}, Relation::ge, 3.0}}, Objective{{Term{0, 1.0}}, 0.0});
    const MipResult r = find_first_feasible(m, nodes_only(100), 0);
    CHECK(r.status == MipStatus::optimal);
    CHECK(r.nodes == 1);
    CHECK(r.incumbent->objective == doctest::Approx(1.5));
  }
}

TEST_CASE("general integers and a maximization sense")
{
  // max 5a + 4b s.t. 6a + 4b <= 24, a + 2b <= 6, a and b integer in [0, 10]
  const MipModel m("int", Sense::maximize,
                   {Variable{"a", VarKind::integer, 0, 10}, Variable{"b", VarKind::integer, 0, 10}},
                   {LinearConstraint{"c1", {Term{0, 6.0}, Term{1, 4.0}}, Relation::le, 24.0},
                    LinearConstraint{"c2", {Term{0, 1.0}, Term{1, 2.0}}, Relation::le, 6.0}},
                   Objective{{Term{0, 5.0}, Term{1, 4.0}}, 0.0});
  const auto expected = oracle::mip_by_enumeration(m);
  const MipResult r = solve_mip(m, std::nullopt, nodes_only(1000), 0);
  REQUIRE(r.status == MipStatus::optimal);
  CHECK(r.incumbent->objective == doctest::Approx(*expected));
  CHECK(r.dual_bound >= r.incumbent->objective - 1e-9);
}

TEST_CASE("oracle equivalence, valid dual bound, monotone incumbents on 50 binary instances")
{
  for (std::size_t k = 0; k < 50; ++k) {
    const MipModel m = oracle::binary_instance(k);
    CAPTURE(m.name());
    const auto expected = oracle::mip_by_enumeration(m);
    REQUIRE(expected);
    std::vector<double> history;
    SolveControl control;
    control.on_incumbent = [&](const Solution& s) { history.push_back(m.to_min(s.objective)); };
    const MipResult r = solve_mip(m, std::nullopt, nodes_only(1000000), 7, control);
    REQUIRE(r.status == MipStatus::optimal);
    CHECK(r.incumbent->objective == doctest::Approx(*expected).epsilon(1e-12));
    const double opt = m.to_min(*expected);
    CHECK(m.to_min(r.dual_bound) <= opt + 1e-9);
    CHECK(opt <= m.to_min(r.incumbent->objective) + 1e-9);
    for (std::size_t i = 1; i < history.size(); ++i) { CHECK(history[i] <= history[i - 1]); }
  }
}

TEST_CASE("node-limited solves are seed-deterministic")
{
  const MipModel m = gen::independent_set(30, 0.2, 11);
  const MipResult a = solve_mip(m, std::nullopt, nodes_only(40), 3);
  const MipResult b = solve_mip(m, std::nullopt, nodes_only(40), 3);
  CHECK(a.nodes == b.nodes);
  CHECK(a.status == b.status);
  REQUIRE(a.incumbent.has_value() == b.incumbent.has_value());
  if (a.incumbent) { CHECK(a.incumbent->values == b.incumbent->values); }
}

TEST_CASE("simulated clock and cancellation")
{
  const MipModel m = gen::independent_set(40, 0.15, 5);
  SimulatedClock clock(0.5);
  SolveControl control;
  control.clock = &clock;
  SolveBudget b;
  b.wall_seconds = 5.0;
  const MipResult r = solve_mip(m, std::nullopt, b, 0, control);
  CHECK(r.nodes <= 10);
  CHECK(clock.ticks() == r.nodes);

  std::stop_source source;
  source.request_stop();
  control.stop = source.get_token();
  const MipResult stopped = solve_mip(m, std::nullopt, b, 0, control);
  CHECK(stopped.nodes == 0);
  CHECK(stopped.status == MipStatus::unknown);
}

TEST_CASE("budget validation and backend lookup")
{
  SolveBudget unlimited;
  CHECK_THROWS_AS(unlimited.validate(), Error);
  SolveBudget threads = nodes_only(1);
  threads.thread_hint = 0;
  CHECK_THROWS_AS(threads.validate(), Error);
  CHECK(make_backend("reference")->name() == "reference");
  CHECK_THROWS_AS(make_backend("gurobi"), Error);
}
