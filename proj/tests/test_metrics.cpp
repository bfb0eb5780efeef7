#include <doctest.h>

#include <mipfolio/error.hpp>
#include <mipfolio/metrics.hpp>
#include <mipfolio/rng.hpp>

#include <cmath>
#include <sstream>

using namespace mipfolio;

namespace {

GapTrace step(std::initializer_list<std::pair<double, double>> pts, double horizon)
{
  std::vector<TracePoint> v;
  for (auto [t, g] : pts) { v.push_back(TracePoint{t, 100.0 * (1.0 + g), g}); }
  return GapTrace(v, horizon);
}

GapTrace random_trace(Rng& rng, double horizon)
{
  std::vector<TracePoint> v;
  double t = 0.0;
  double g = rng.uniform01();
  const std::size_t n = rng.index(6);
  for (std::size_t i = 0; i < n; ++i) {
    t += rng.uniform(0.5, horizon / 6.0);
    if (t > horizon) { break; }
    g *= rng.uniform(0.2, 1.0);
    v.push_back(TracePoint{t, 50.0 + 10.0 * g, g});
  }
  return GapTrace(v, horizon);
}

// Midpoint of every elementary interval between breakpoints, plus the breakpoints themselves.
std::vector<double> probe_times(std::span<const GapTrace> traces)
{
  std::vector<double> ts{0.0, traces[0].horizon()};
  for (const auto& tr : traces) {
    for (const auto& p : tr.points()) { ts.push_back(p.t); }
  }
  std::sort(ts.begin(), ts.end());
  const std::size_t n = ts.size();
  for (std::size_t i = 0; i + 1 < n; ++i) { ts.push_back(0.5 * (ts[i] + ts[i + 1])); }
  return ts;
}

}  // namespace

TEST_CASE("primal gap table")
{
  struct Row {
    double x, xs, expect;
    bool capped;
  };
  const Row rows[] = {
    {110, 100, 0.10, true},     {90, 100, 0.10, true},      {100, 100, 0.0, true},     {0, 0, 0.0, true},
    {1, 0, 1.0, true},          {1, 0, 1e10, false},        {-1, 0, 1e10, false},      {-110, -100, 0.10, true},
    {-90, -100, 0.10, true},    {300, 100, 1.0, true},      {300, 100, 2.0, false},    {5, 4, 0.25, true},
    {1e-11, 0, 0.1, true},      {2e-10, 0, 1.0, true},      {2e-10, 0, 2.0, false},    {-50, 50, 1.0, true},
    {-50, 50, 2.0, false},      {7.5, 7.5, 0.0, false},     {1000.5, 1000, 5e-4, true}, {0, 12, 1.0, true},
  };
  for (const auto& r : rows) {
    CAPTURE(r.x);
    CAPTURE(r.xs);
    CHECK(primal_gap(r.x, r.xs, 1e-10, r.capped) == doctest::Approx(r.expect).epsilon(1e-12));
  }
  CHECK(primal_gap(std::numeric_limits<double>::infinity(), 3.0) == 1.0);
}

TEST_CASE("primal integral examples")
{
  CHECK(primal_integral(step({{0, 0.5}}, 100), 0, 100) == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(primal_integral(step({{0, 1.0}, {10, 0.0}}, 100), 0, 100) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(primal_integral(step({{0, 1.0}, {60, 0.4}, {120, 0.1}}, 200), 30, 200) == doctest::Approx(62.0).epsilon(1e-12));
  // empty trace: gap 1 everywhere
  CHECK(primal_integral(GapTrace({}, 40), 0, 40) == 40.0);
  CHECK(primal_integral_percent_minutes(step({{0, 0.5}}, 120), 0, 120) == doctest::Approx(100.0));
}

TEST_CASE("primal integral on ten hand-summed step traces")
{
  struct Case {
    GapTrace trace;
    double t0, t1, expect;
  };
  const Case cases[] = {
    {step({{5, 0.5}}, 10), 0, 10, 5 * 1.0 + 5 * 0.5},
    {step({{0, 0.2}, {4, 0.1}}, 10), 0, 10, 4 * 0.2 + 6 * 0.1},
    {step({{0, 0.2}, {4, 0.1}}, 10), 4, 10, 0.6},
    {step({{0, 0.2}, {4, 0.1}}, 10), 2, 3, 0.2},
    {step({{1, 0.9}, {2, 0.8}, {3, 0.7}}, 4), 0, 4, 1 + 0.9 + 0.8 + 0.7},
    {step({{2, 0.5}, {8, 0.25}}, 10), 1, 9, 1 * 1.0 + 6 * 0.5 + 1 * 0.25},
    {step({{0, 0.0}}, 7), 0, 7, 0.0},
    {step({{3, 0.3}}, 9), 3, 3, 0.0},
    {step({{10, 0.0}}, 10), 0, 10, 10.0},
    {step({{0.5, 0.75}, {2.5, 0.5}, {6.5, 0.125}}, 8), 0, 8, 0.5 + 2 * 0.75 + 4 * 0.5 + 1.5 * 0.125},
  };
  for (const auto& c : cases) { CHECK(std::abs(primal_integral(c.trace, c.t0, c.t1) - c.expect) <= 1e-12); }
}

TEST_CASE("primal integral additivity (property)")
{
  Rng rng(31);
  for (int i = 0; i < 500; ++i) {
    const GapTrace tr = random_trace(rng, 100.0);
    double a = rng.uniform(0, 100), b = rng.uniform(0, 100), c = rng.uniform(0, 100);
    if (a > b) { std::swap(a, b); }
    if (b > c) { std::swap(b, c); }
    if (a > b) { std::swap(a, b); }
    CHECK(std::abs(primal_integral(tr, a, b) + primal_integral(tr, b, c) - primal_integral(tr, a, c)) <= 1e-12);
  }
}

TEST_CASE("trace invariants and make_trace")
{
  CHECK_THROWS_AS(step({{0, 0.5}, {0, 0.4}}, 10), Error);
  CHECK_THROWS_AS(step({{0, 0.5}, {1, 0.6}}, 10), Error);
  CHECK_THROWS_AS(step({{11, 0.5}}, 10), Error);

  const std::vector<ObjectiveEvent> ev{{0.0, 150}, {0.0, 140}, {2.0, 120}, {5.0, 95}, {6.0, 100.5}};
  const GapTrace tr = make_trace(ev, 100.0, 10.0);
  REQUIRE(tr.points().size() == 4);
  CHECK(tr.points()[0].objective == 140);
  CHECK(tr.points()[0].gap == doctest::Approx(0.4));
  // a run that overshoots the reference keeps its best gap
  CHECK(tr.points()[3].gap == doctest::Approx(0.005));
  CHECK(tr.points()[2].gap == doctest::Approx(0.05));
  CHECK(tr.gap_at(1.99) == doctest::Approx(0.4));
  CHECK(tr.final_gap() == doctest::Approx(0.005));
}

TEST_CASE("aggregate_min examples")
{
  const GapTrace a = step({{0, 1.0}, {50, 0.2}}, 100);
  const GapTrace b = step({{0, 0.6}, {80, 0.1}}, 100);
  const std::vector<GapTrace> ab{a, b};
  const GapTrace agg = aggregate_min(ab);
  REQUIRE(agg.points().size() == 3);
  CHECK(agg.points()[0].t == 0);
  CHECK(agg.points()[0].gap == 0.6);
  CHECK(agg.points()[1].t == 50);
  CHECK(agg.points()[1].gap == 0.2);
  CHECK(agg.points()[2].t == 80);
  CHECK(agg.points()[2].gap == 0.1);

  const std::vector<GapTrace> single{a};
  CHECK(aggregate_min(single) == a);

  const GapTrace dom = step({{0, 0.3}, {10, 0.05}}, 100);
  const GapTrace weak = step({{5, 0.4}, {20, 0.3}}, 100);
  const std::vector<GapTrace> dw{weak, dom};
  CHECK(aggregate_min(dw) == dom);

  const std::vector<GapTrace> mismatch{a, step({{0, 0.5}}, 90)};
  try {
    aggregate_min(mismatch);
    FAIL("expected HorizonMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::horizon_mismatch);
  }
}

TEST_CASE("aggregate_min laws on random trace sets (property)")
{
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 1 + rng.index(5);
    std::vector<GapTrace> set;
    for (std::size_t i = 0; i < k; ++i) { set.push_back(random_trace(rng, 60.0)); }
    const GapTrace agg = aggregate_min(set);

    for (double t : probe_times(set)) {
      double expect = 1.0;
      for (const auto& tr : set) { expect = std::min(expect, tr.gap_at(t)); }
      CHECK(agg.gap_at(t) == expect);
    }
    const std::vector<GapTrace> twice{agg, agg};
    CHECK(aggregate_min(twice) == agg);
    std::vector<GapTrace> rev(set.rbegin(), set.rend());
    CHECK(aggregate_min(rev).points().size() == agg.points().size());
    for (double t : probe_times(set)) { CHECK(aggregate_min(rev).gap_at(t) == agg.gap_at(t)); }
  }
}

TEST_CASE("csv round trip")
{
  const GapTrace tr = step({{0, 0.75}, {1.0 / 3.0, 0.1}, {9.5, 0.0}}, 10);
  std::istringstream in(trace_to_csv(tr));
  CHECK(trace_from_csv(in, 10) == tr);
  std::istringstream bad("time,obj,gap\n");
  CHECK_THROWS_AS(trace_from_csv(bad, 10), Error);
  std::istringstream junk("t_seconds,objective,gap\n1,abc,0.5\n");
  CHECK_THROWS_AS(trace_from_csv(junk, 10), Error);
}
