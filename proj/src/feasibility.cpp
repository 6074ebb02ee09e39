#include "icav/feasibility.hpp"

#include <algorithm>
#include <cmath>

#include "icav/scheduler.hpp"

namespace icav {

namespace {

GapArcSource ego_source_of(ArcKind k) {
  switch (k) {
    case ArcKind::UnconstrainedCubic:
      return GapArcSource::EgoCubic;
    case ArcKind::ControlSaturated:
      return GapArcSource::EgoControlSaturated;
    case ArcKind::SpeedSaturated:
      return GapArcSource::EgoSpeedSaturated;
  }
  throw DomainError("invalid arc kind");
}

GapArcSource pred_source_of(ArcKind k) {
  switch (k) {
    case ArcKind::UnconstrainedCubic:
      return GapArcSource::PredCubic;
    case ArcKind::ControlSaturated:
      return GapArcSource::PredControlSaturated;
    case ArcKind::SpeedSaturated:
      return GapArcSource::PredSpeedSaturated;
  }
  throw DomainError("invalid arc kind");
}

}  // namespace

std::string to_string(GapArcSource s) {
  switch (s) {
    case GapArcSource::EgoCubic:
      return "ego_cubic";
    case GapArcSource::EgoControlSaturated:
      return "ego_ctrl_sat";
    case GapArcSource::EgoSpeedSaturated:
      return "ego_speed_sat";
    case GapArcSource::PredCubic:
      return "pred_cubic";
    case GapArcSource::PredControlSaturated:
      return "pred_ctrl_sat";
    case GapArcSource::PredSpeedSaturated:
      return "pred_speed_sat";
    case GapArcSource::PredMzCruise:
      return "pred_mz_cruise";
  }
  return "?";
}

std::string to_string(MinGapLocation l) {
  switch (l) {
    case MinGapLocation::AtEntry:
      return "at_entry";
    case MinGapLocation::AtHorizonEnd:
      return "at_horizon_end";
    case MinGapLocation::AtSegmentBoundary:
      return "at_segment_boundary";
    case MinGapLocation::Interior:
      return "interior";
  }
  return "?";
}

void PredecessorContext::validate() const {
  if (!(t_k0 < t_km)) throw ConfigError("predecessor context: t_k0 >= t_km");
  if (!(min_gap > 0) || !(min_gap < mz_side))
    throw ConfigError("predecessor context: min_gap must lie in (0, mz_side)");
  if (!(cz_length > 0)) throw ConfigError("predecessor context: cz_length");
  if (k_arcs.empty())
    throw ConfigError("predecessor context: missing trajectory");
}

PredecessorContext make_context(const PiecewiseTrajectory& k_traj,
                                double cz_length, double mz_side,
                                double min_gap) {
  PredecessorContext ctx;
  ctx.t_k0 = k_traj.t0();
  ctx.t_km = k_traj.tm();
  ctx.v_k0 = k_traj.initial_speed();
  ctx.v_km = k_traj.terminal_speed();
  ctx.k_arcs = k_traj;
  ctx.cz_length = cz_length;
  ctx.mz_side = mz_side;
  ctx.min_gap = min_gap;
  ctx.validate();
  return ctx;
}

double predecessor_position(const PredecessorContext& ctx, double t) {
  if (t <= ctx.t_km) return ctx.k_arcs.eval(t).p;
  return ctx.cz_length + ctx.v_km * (t - ctx.t_km);
}

double GapPolynomial::eval(double t) const {
  return ((coeffs[0] * t + coeffs[1]) * t + coeffs[2]) * t + coeffs[3];
}

double GapPolynomial::eval_rate(double t) const {
  return (3.0 * coeffs[0] * t + 2.0 * coeffs[1]) * t + coeffs[2];
}

double GapPolynomial::eval_curvature(double t) const {
  return 6.0 * coeffs[0] * t + 2.0 * coeffs[1];
}

std::vector<GapPolynomial> gap_segments(const PredecessorContext& ctx,
                                        const PiecewiseTrajectory& ego) {
  ctx.validate();
  const double tau = ego.t0();
  const double tm = ego.tm();
  if (tau < ctx.t_k0 - 1e-9)
    throw DomainError("follower enters before its predecessor");

  // Segment boundaries: both trajectories' junctions, clipped to [tau, tm].
  std::vector<double> cuts{tau, tm};
  for (const Arc& arc : ctx.k_arcs.arcs())
    for (double t : {arc.t_begin, arc.t_end})
      if (t > tau && t < tm) cuts.push_back(t);
  for (const Arc& arc : ego.arcs())
    if (arc.t_begin > tau && arc.t_begin < tm) cuts.push_back(arc.t_begin);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return b - a < 1e-12; }),
             cuts.end());

  std::vector<GapPolynomial> segments;
  segments.reserve(cuts.size() - 1);
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double lo = cuts[s];
    const double hi = cuts[s + 1];
    const double mid = 0.5 * (lo + hi);

    GapPolynomial seg;
    seg.t_lo = lo;
    seg.t_hi = hi;
    if (mid <= ctx.t_km) {
      const Arc& karc = ctx.k_arcs.arc_at(mid);
      seg.pred_coeffs = karc.position_monomials();
      seg.pred_source = pred_source_of(karc.kind);
    } else {
      // MZ extension: p_k = L + v_km (t - t_km)
      seg.pred_coeffs = Eigen::Vector4d(
          0, 0, ctx.v_km, ctx.cz_length - ctx.v_km * ctx.t_km);
      seg.pred_source = GapArcSource::PredMzCruise;
    }
    const Arc& earc = ego.arc_at(mid);
    seg.ego_coeffs = earc.position_monomials();
    seg.ego_source = ego_source_of(earc.kind);
    seg.coeffs = seg.pred_coeffs - seg.ego_coeffs;
    segments.push_back(seg);
  }
  return segments;
}

std::vector<GapPolynomial> gap_segments(const PredecessorContext& ctx,
                                        double tau, double upsilon, double tm,
                                        const VehicleLimits& limits) {
  BoundaryConditions bc;
  bc.t0 = tau;
  bc.v0 = upsilon;
  bc.tm = tm;
  bc.cz_length = ctx.cz_length;
  return gap_segments(ctx, solve_with_constraints(bc, limits));
}

MinGapResult min_gap(const std::vector<GapPolynomial>& segments) {
  if (segments.empty()) throw DomainError("min_gap: no segments");

  MinGapResult best;
  bool have = false;
  auto offer = [&](double s, double t, MinGapLocation loc, std::size_t idx) {
    if (!have || s < best.s_star) {
      have = true;
      best.s_star = s;
      best.t_star = t;
      best.location = loc;
      best.segment_index = idx;
      best.pred_source = segments[idx].pred_source;
      best.ego_source = segments[idx].ego_source;
    }
  };

  const double t_first = segments.front().t_lo;
  const double t_last = segments.back().t_hi;

  for (std::size_t idx = 0; idx < segments.size(); ++idx) {
    const GapPolynomial& seg = segments[idx];
    auto classify = [&](double t) {
      if (t <= t_first) return MinGapLocation::AtEntry;
      if (t >= t_last) return MinGapLocation::AtHorizonEnd;
      return MinGapLocation::AtSegmentBoundary;
    };
    offer(seg.eval(seg.t_lo), seg.t_lo, classify(seg.t_lo), idx);
    offer(seg.eval(seg.t_hi), seg.t_hi, classify(seg.t_hi), idx);

    // Interior stationary points: roots of the rate quadratic
    // 3A t^2 + 2B t + C with nonnegative curvature. Near-vanishing cubic
    // coefficient degrades to the linear rate case.
    const double A = seg.coeffs[0];
    const double B = seg.coeffs[1];
    const double C = seg.coeffs[2];
    const double t_scale = std::max({1.0, std::abs(seg.t_lo),
                                     std::abs(seg.t_hi)});
    const double lead_scale =
        std::max({std::abs(3 * A) * t_scale * t_scale,
                  std::abs(2 * B) * t_scale, std::abs(C), 1e-300});
    std::vector<double> roots;
    if (std::abs(3 * A) * t_scale * t_scale > 1e-12 * lead_scale) {
      const double disc = 4.0 * B * B - 12.0 * A * C;
      if (disc > 0) {
        const double sqrt_disc = std::sqrt(disc);
        // Stable quadratic roots for 3A t^2 + 2B t + C = 0.
        const double q = -(B + (B >= 0 ? 0.5 : -0.5) * sqrt_disc);
        roots.push_back(q / (3.0 * A));
        if (q != 0) roots.push_back(C / q);
      }
    } else if (std::abs(2 * B) * t_scale > 1e-12 * lead_scale) {
      roots.push_back(-C / (2.0 * B));
    }
    std::sort(roots.begin(), roots.end());
    for (double t : roots) {
      if (t < seg.t_lo || t > seg.t_hi) continue;
      if (seg.eval_curvature(t) < 0) continue;
      offer(seg.eval(t), t,
            (t <= t_first || t >= t_last) ? classify(t)
                                          : MinGapLocation::Interior,
            idx);
    }
  }
  return best;
}

FeasibilityResult is_feasible(const PredecessorContext& ctx, double tau,
                              double upsilon, double tm, double vm,
                              const VehicleLimits& limits, double tolerance) {
  const auto segments = gap_segments(ctx, tau, upsilon, tm, limits);
  const MinGapResult m = min_gap(segments);
  FeasibilityResult out;
  out.feasible = m.s_star >= ctx.min_gap - tolerance;
  out.s_star = m.s_star;
  out.t_star = m.t_star;
  out.tm = tm;
  out.vm = vm;
  return out;
}

FeasibilityResult check_entry_state(const PredecessorContext& ctx, double tau,
                                    double upsilon,
                                    const VehicleLimits& limits,
                                    double tolerance) {
  // Same-lane scheduling rule: headway behind k or the follower's own
  // reachability bound, whichever binds.
  const DynamicsBound bound =
      dynamics_lower_bound(tau, upsilon, ctx.cz_length, limits);
  const double tm =
      std::max(ctx.t_km + ctx.min_gap / ctx.v_km, bound.t_c);

  BoundaryConditions bc;
  bc.t0 = tau;
  bc.v0 = upsilon;
  bc.tm = tm;
  bc.cz_length = ctx.cz_length;
  const PiecewiseTrajectory ego = solve_with_constraints(bc, limits);

  const auto segments = gap_segments(ctx, ego);
  const MinGapResult m = min_gap(segments);
  FeasibilityResult out;
  out.feasible = m.s_star >= ctx.min_gap - tolerance;
  out.s_star = m.s_star;
  out.t_star = m.t_star;
  out.tm = tm;
  out.vm = ego.terminal_speed();
  return out;
}

std::vector<FeasibilityMapPoint> feasibility_map(
    const PredecessorContext& ctx, double tau_min, double tau_max,
    double upsilon_min, double upsilon_max, int resolution,
    const VehicleLimits& limits, double tolerance) {
  if (resolution < 2) throw ConfigError("feasibility map: resolution >= 2");
  if (!(tau_max > tau_min) || !(upsilon_max > upsilon_min))
    throw ConfigError("feasibility map: empty range");

  std::vector<FeasibilityMapPoint> raster;
  raster.reserve(static_cast<std::size_t>(resolution) * resolution);
  for (int r = 0; r < resolution; ++r) {
    const double upsilon =
        upsilon_min + (upsilon_max - upsilon_min) * r / (resolution - 1);
    for (int c = 0; c < resolution; ++c) {
      const double tau =
          tau_min + (tau_max - tau_min) * c / (resolution - 1);
      FeasibilityMapPoint pt;
      pt.tau = tau;
      pt.upsilon = upsilon;
      const FeasibilityResult res =
          check_entry_state(ctx, tau, upsilon, limits, tolerance);
      pt.s_star = res.s_star;
      pt.feasible = res.feasible;
      raster.push_back(pt);
    }
  }
  return raster;
}

}  // namespace icav
