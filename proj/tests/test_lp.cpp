#include <doctest.h>

#include "oracles.hpp"

#include <mipfolio/generators.hpp>
#include <mipfolio/lp.hpp>

#include <cmath>

using namespace mipfolio;

namespace {

MipModel single(double cost, double lo, double up, std::vector<LinearConstraint> cons = {})
{
  return MipModel("single", Sense::minimize, {Variable{"x", VarKind::continuous, lo, up}}, std::move(cons),
                  Objective{{Term{0, cost}}, 0.0});
}

}  // namespace

TEST_CASE("bounded single variable")
{
  const auto r = lp::solve_lp(single(-1.0, 0.0, 1.0));
  REQUIRE(r.status == lp::Status::optimal);
  CHECK(r.values[0] == doctest::Approx(1.0));
  CHECK(r.objective == doctest::Approx(-1.0));
}

TEST_CASE("contradictory rows are infeasible")
{
  const auto r = lp::solve_lp(single(1.0, -kInf, kInf,
                                     {LinearConstraint{"ge", {Term{0, 1.0}}, Relation::ge, 1.0},
                                      LinearConstraint{"le", {Term{0, 1.0}}, Relation::le, 0.0}}));
  CHECK(r.status == lp::Status::infeasible);
}

TEST_CASE("unbounded ray")
{
  CHECK(lp::solve_lp(single(-1.0, 0.0, kInf)).status == lp::Status::unbounded);
  CHECK(lp::solve_lp(single(1.0, -kInf, kInf)).status == lp::Status::unbounded);
}

TEST_CASE("free variables and equality rows")
{
  // min x + 2y s.t. x + y = 3, x - y >= -1, x <= 5, x and y free.
  // Substituting y = 3 - x gives 6 - x, so the cap binds: x = 5, y = -2.
  const MipModel m("free", Sense::minimize,
                   {Variable{"x", VarKind::continuous, -kInf, kInf}, Variable{"y", VarKind::continuous, -kInf, kInf}},
                   {LinearConstraint{"sum", {Term{0, 1.0}, Term{1, 1.0}}, Relation::eq, 3.0},
                    LinearConstraint{"diff", {Term{0, 1.0}, Term{1, -1.0}}, Relation::ge, -1.0},
                    LinearConstraint{"cap", {Term{0, 1.0}}, Relation::le, 5.0}},
                   Objective{{Term{0, 1.0}, Term{1, 2.0}}, 0.0});
  const auto r = lp::solve_lp(m);
  REQUIRE(r.status == lp::Status::optimal);
  CHECK(r.values[0] == doctest::Approx(5.0));
  CHECK(r.values[1] == doctest::Approx(-2.0));
  CHECK(r.objective == doctest::Approx(1.0));
}

TEST_CASE("maximization is reported in the model's sense")
{
  const MipModel ks = gen::knapsack(8, 4);
  const auto r = lp::solve_lp(ks);
  REQUIRE(r.status == lp::Status::optimal);
  CHECK(r.objective > 0.0);
  CHECK(evaluate(ks, r.values).feasible);
}

TEST_CASE("bound overrides")
{
  const MipModel ks = gen::knapsack(6, 9);
  std::vector<double> lo(6, 0.0), up(6, 1.0);
  lo[0] = up[0] = 1.0;
  up[1] = 0.0;
  const auto r = lp::solve_lp(ks, lo, up, 1000);
  REQUIRE(r.status == lp::Status::optimal);
  CHECK(r.values[0] == 1.0);
  CHECK(r.values[1] == 0.0);
  lo[2] = 1.0;
  up[2] = 0.0;
  CHECK(lp::solve_lp(ks, lo, up, 1000).status == lp::Status::infeasible);
}

TEST_CASE("random LPs match vertex enumeration")
{
  Rng rng(12345);
  int optimal = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const MipModel m = oracle::random_box_lp(rng, 1 + rng.index(6), rng.index(9));
    const auto expected = oracle::lp_by_vertex_enumeration(m);
    const auto r = lp::solve_lp(m);
    if (!expected) {
      CHECK(r.status == lp::Status::infeasible);
      continue;
    }
    REQUIRE(r.status == lp::Status::optimal);
    ++optimal;
    CHECK(std::abs(r.objective - *expected) <= 1e-6 * std::max(1.0, std::abs(*expected)));
    CHECK(evaluate(m, r.values).feasible);
  }
  CHECK(optimal > 30);
}

TEST_CASE("optimal points cannot be improved along random directions")
{
  Rng rng(777);
  for (int trial = 0; trial < 50; ++trial) {
    const MipModel m = oracle::random_box_lp(rng, 2 + rng.index(5), 1 + rng.index(8));
    const auto r = lp::solve_lp(m);
    if (r.status != lp::Status::optimal) { continue; }
    const double base = m.to_min(r.objective);
    for (int k = 0; k < 50; ++k) {
      std::vector<double> x = r.values;
      for (auto& v : x) { v += 1e-3 * rng.uniform(-1.0, 1.0); }
      const Solution s = evaluate(m, x);
      if (s.feasible) { CHECK(m.to_min(s.objective) >= base - 1e-9); }
    }
  }
}

TEST_CASE("deterministic")
{
  Rng rng(5);
  const MipModel m = oracle::random_box_lp(rng, 6, 8);
  const auto a = lp::solve_lp(m);
  const auto b = lp::solve_lp(m);
  CHECK(a.status == b.status);
  CHECK(a.objective == b.objective);
  CHECK(a.values == b.values);
}

TEST_CASE("degenerate assignment-style LP terminates")
{
  // Highly degenerate: n x n assignment polytope relaxation.
  const std::size_t n = 8;
  std::vector<Variable> vars;
  Objective obj;
  Rng rng(3);
  for (std::size_t i = 0; i < n * n; ++i) {
    vars.push_back(Variable{"a" + std::to_string(i), VarKind::continuous, 0.0, 1.0});
    obj.terms.push_back(Term{i, static_cast<double>(rng.integer(1, 3))});
  }
  std::vector<LinearConstraint> cons;
  for (std::size_t i = 0; i < n; ++i) {
    LinearConstraint row{"r" + std::to_string(i), {}, Relation::eq, 1.0};
    LinearConstraint col{"c" + std::to_string(i), {}, Relation::eq, 1.0};
    for (std::size_t j = 0; j < n; ++j) {
      row.terms.push_back(Term{i * n + j, 1.0});
      col.terms.push_back(Term{j * n + i, 1.0});
    }
    cons.push_back(row);
    cons.push_back(col);
  }
  const MipModel m("assign", Sense::minimize, vars, cons, obj);
  const auto r = lp::solve_lp(m);
  REQUIRE(r.status == lp::Status::optimal);
  CHECK(r.objective >= static_cast<double>(n) - 1e-9);
  CHECK(evaluate(m, r.values).feasible);
}
