/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mipfolio {

inline constexpr double kGapEpsilon = 1e-10;

/// |x - x*| / max(|x*|, eps), clamped to 1 when `capped`.
double primal_gap(double x, double x_star, double eps = kGapEpsilon, bool capped = true);

struct TracePoint {
  double t         = 0.0;
  double objective = 0.0;
  double gap       = 1.0;
  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

/// (time, objective) event emitted by a worker on every new best.
struct ObjectiveEvent {
  double t         = 0.0;
  double objective = 0.0;
  friend bool operator==(const ObjectiveEvent&, const ObjectiveEvent&) = default;
};

/// Piecewise-constant, right-continuous gap over [0, horizon]. The gap is 1
/// before the first point.
class GapTrace {
 public:
  GapTrace() = default;
  /// Throws Errc::invalid_argument unless times strictly increase within
  /// [0, horizon] and gaps never increase.
  GapTrace(std::vector<TracePoint> points, double horizon);

  const std::vector<TracePoint>& points() const { return points_; }
  double horizon() const { return horizon_; }
  bool empty() const { return points_.empty(); }

  double gap_at(double t) const;
  double final_gap() const { return gap_at(horizon_); }

  friend bool operator==(const GapTrace&, const GapTrace&) = default;

 private:
  std::vector<TracePoint> points_;
  double horizon_ = 0.0;
};

/// Gap trace from best-objective events. Events at the same time keep the
/// last one; the gap is held at its running minimum.
GapTrace make_trace(std::span<const ObjectiveEvent> events, double x_star, double horizon,
                    double eps = kGapEpsilon, bool capped = true);

/// Exact integral of the gap over [t0, t1], in gap-seconds.
double primal_integral(const GapTrace& trace, double t0, double t1);

/// Same integral in percent-minutes (gap in %, time in minutes).
double primal_integral_percent_minutes(const GapTrace& trace, double t0, double t1);

/// Pointwise minimum over the union of event times. A point whose (gap,
/// objective) repeats the previous one is dropped; equal gaps take the lower
/// objective. Throws Errc::horizon_mismatch.
GapTrace aggregate_min(std::span<const GapTrace> traces);

/// CSV with header `t_seconds,objective,gap`.
std::string trace_to_csv(const GapTrace& trace);
GapTrace trace_from_csv(std::istream& in, double horizon);
GapTrace read_trace_csv(const std::string& path, double horizon);
void write_trace_csv(const GapTrace& trace, const std::string& path);

}  // namespace mipfolio
