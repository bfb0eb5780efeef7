/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <mipfolio/metrics.hpp>

#include <mipfolio/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace mipfolio {

double primal_gap(double x, double x_star, double eps, bool capped)
{
  if (!std::isfinite(x)) { return 1.0; }
  const double g = std::abs(x - x_star) / std::max(std::abs(x_star), eps);
  return capped ? std::min(g, 1.0) : g;
}

GapTrace::GapTrace(std::vector<TracePoint> points, double horizon) : points_(std::move(points)), horizon_(horizon)
{
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) { fail(Errc::invalid_argument, "trace horizon must be finite and >= 0"); }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!(p.t >= 0.0 && p.t <= horizon)) { fail(Errc::invalid_argument, "trace time outside [0, horizon]"); }
    if (!(p.gap >= 0.0)) { fail(Errc::invalid_argument, "trace gap must be >= 0"); }
    if (i > 0) {
      if (!(p.t > points_[i - 1].t)) { fail(Errc::invalid_argument, "trace times must strictly increase"); }
      if (p.gap > points_[i - 1].gap) { fail(Errc::invalid_argument, "trace gaps must not increase"); }
    }
  }
}

double GapTrace::gap_at(double t) const
{
  auto it = std::upper_bound(points_.begin(), points_.end(), t,
                             [](double v, const TracePoint& p) { return v < p.t; });
  return it == points_.begin() ? 1.0 : std::prev(it)->gap;
}

GapTrace make_trace(std::span<const ObjectiveEvent> events, double x_star, double horizon, double eps, bool capped)
{
  std::vector<TracePoint> pts;
  double running = std::numeric_limits<double>::infinity();
  for (const auto& e : events) {
    const double g = std::min(running, primal_gap(e.objective, x_star, eps, capped));
    running        = g;
    const TracePoint p{std::min(e.t, horizon), e.objective, g};
    if (!pts.empty() && pts.back().t == p.t) {
      pts.back() = p;
    } else {
      pts.push_back(p);
    }
  }
  return GapTrace(std::move(pts), horizon);
}

double primal_integral(const GapTrace& trace, double t0, double t1)
{
  if (!(t0 >= 0.0 && t0 <= t1 && t1 <= trace.horizon())) {
    fail(Errc::invalid_argument, "integration window must satisfy 0 <= t0 <= t1 <= horizon");
  }
  double total  = 0.0;
  double cursor = t0;
  double gap    = trace.gap_at(t0);
  for (const auto& p : trace.points()) {
    if (p.t <= t0) { continue; }
    if (p.t >= t1) { break; }
    total += gap * (p.t - cursor);
    cursor = p.t;
    gap    = p.gap;
  }
  return total + gap * (t1 - cursor);
}

double primal_integral_percent_minutes(const GapTrace& trace, double t0, double t1)
{
  return primal_integral(trace, t0, t1) * 100.0 / 60.0;
}

namespace {

constexpr double kInfGap = std::numeric_limits<double>::infinity();

bool better_point(const TracePoint& a, const TracePoint& b)
{
  if (a.gap != b.gap) { return a.gap < b.gap; }
  if (std::isnan(a.objective)) { return false; }
  return std::isnan(b.objective) || a.objective < b.objective;
}

}  // namespace

GapTrace aggregate_min(std::span<const GapTrace> traces)
{
  if (traces.empty()) { fail(Errc::invalid_argument, "aggregate_min needs at least one trace"); }
  const double horizon = traces.front().horizon();
  std::vector<double> times;
  for (const auto& tr : traces) {
    if (tr.horizon() != horizon) { fail(Errc::horizon_mismatch, "traces have different horizons"); }
    for (const auto& p : tr.points()) { times.push_back(p.t); }
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  std::vector<TracePoint> out;
  std::vector<std::size_t> cursor(traces.size(), 0);
  for (double t : times) {
    // before its first point a trace sits at gap 1 with no objective
    TracePoint best{t, std::numeric_limits<double>::quiet_NaN(), kInfGap};
    for (std::size_t k = 0; k < traces.size(); ++k) {
      const auto& pts = traces[k].points();
      while (cursor[k] < pts.size() && pts[cursor[k]].t <= t) { ++cursor[k]; }
      const TracePoint cand = cursor[k] == 0 ? TracePoint{t, std::numeric_limits<double>::quiet_NaN(), 1.0}
                                             : TracePoint{t, pts[cursor[k] - 1].objective, pts[cursor[k] - 1].gap};
      if (better_point(cand, best)) { best = cand; }
    }
    if (!out.empty()) {
      const auto& prev = out.back();
      const bool same_obj = prev.objective == best.objective ||
                            (std::isnan(prev.objective) && std::isnan(best.objective));
      if (prev.gap == best.gap && same_obj) { continue; }
    }
    out.push_back(best);
  }
  return GapTrace(std::move(out), horizon);
}

std::string trace_to_csv(const GapTrace& trace)
{
  std::string s = "t_seconds,objective,gap\n";
  char buf[96];
  for (const auto& p : trace.points()) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.t, p.objective, p.gap);
    s += buf;
  }
  return s;
}

GapTrace trace_from_csv(std::istream& in, double horizon)
{
  std::string line;
  if (!std::getline(in, line) || line.rfind("t_seconds,objective,gap", 0) != 0) {
    fail(Errc::malformed_section, "trace CSV must start with 't_seconds,objective,gap'");
  }
  std::vector<TracePoint> pts;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') { line.pop_back(); }
    if (line.empty()) { continue; }
    TracePoint p;
    std::istringstream row(line);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c)) {
      fail(Errc::malformed_section, "line " + std::to_string(lineno) + ": expected three fields");
    }
    char* end = nullptr;
    p.t = std::strtod(a.c_str(), &end);
    if (*end != '\0') { fail(Errc::malformed_section, "line " + std::to_string(lineno) + ": bad time"); }
    p.objective = std::strtod(b.c_str(), &end);
    if (*end != '\0') { fail(Errc::malformed_section, "line " + std::to_string(lineno) + ": bad objective"); }
    p.gap = std::strtod(c.c_str(), &end);
    if (*end != '\0') { fail(Errc::malformed_section, "line " + std::to_string(lineno) + ": bad gap"); }
    pts.push_back(p);
  }
  return GapTrace(std::move(pts), horizon);
}

GapTrace read_trace_csv(const std::string& path, double horizon)
{
  std::ifstream in(path);
  if (!in) { fail(Errc::io_error, "cannot open '" + path + "'"); }
  return trace_from_csv(in, horizon);
}

void write_trace_csv(const GapTrace& trace, const std::string& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) { fail(Errc::io_error, "cannot write '" + path + "'"); }
  out << trace_to_csv(trace);
}

}  // namespace mipfolio
