#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "icav/ocp.hpp"
#include "icav/trajectory.hpp"
#include "icav/types.hpp"

// Rear-end safety analysis for a same-lane pair: the follower's gap to its
// predecessor is piecewise cubic in time, so its minimum over the follower's
// CZ transit can be located exactly (segment endpoints plus quadratic roots
// of the gap rate). Membership of an entry state (tau, upsilon) in the safe
// region and the rasterized region map are built on that minimum.

namespace icav {

// Everything the follower knows about its in-lane predecessor k, plus the
// shared geometry. The predecessor cruises at vm_k beyond tm_k.
struct PredecessorContext {
  double t_k0 = 0;
  double v_k0 = 0;
  double t_km = 0;
  double v_km = 0;
  PiecewiseTrajectory k_arcs;  // predecessor CZ trajectory on [t_k0, t_km]
  double cz_length = 0;        // L
  double mz_side = 0;          // S
  double min_gap = 0;          // delta, rear-end floor; delta < S

  void validate() const;
};

PredecessorContext make_context(const PiecewiseTrajectory& k_traj,
                                double cz_length, double mz_side,
                                double min_gap);

// Predecessor position at any t >= t_k0 (CZ arcs, then constant-speed MZ
// extension).
double predecessor_position(const PredecessorContext& ctx, double t);

// Which pieces of the two trajectories a gap segment was built from.
enum class GapArcSource {
  EgoCubic,
  EgoControlSaturated,
  EgoSpeedSaturated,
  PredCubic,
  PredControlSaturated,
  PredSpeedSaturated,
  PredMzCruise,
};

std::string to_string(GapArcSource s);

// Gap polynomial s(t) = p_k(t) - p_i(t) = A t^3 + B t^2 + C t + D on one
// time segment (global monomial basis, like the arcs it came from).
struct GapPolynomial {
  double t_lo = 0;
  double t_hi = 0;
  Eigen::Vector4d coeffs = Eigen::Vector4d::Zero();       // A, B, C, D
  Eigen::Vector4d pred_coeffs = Eigen::Vector4d::Zero();  // p_k monomials
  Eigen::Vector4d ego_coeffs = Eigen::Vector4d::Zero();   // p_i monomials
  GapArcSource pred_source = GapArcSource::PredCubic;
  GapArcSource ego_source = GapArcSource::EgoCubic;

  double eval(double t) const;
  double eval_rate(double t) const;       // s'(t) = v_k - v_i
  double eval_curvature(double t) const;  // s''(t) = u_k - u_i
};

// Segment-wise gap polynomials over [tau, tm] for a follower whose
// trajectory is `ego`. Segment boundaries are the union of both
// trajectories' junction times (including the predecessor's MZ entry)
// clipped to [tau, tm].
std::vector<GapPolynomial> gap_segments(const PredecessorContext& ctx,
                                        const PiecewiseTrajectory& ego);

// Convenience overload: the follower's trajectory is solved internally for
// (tau, upsilon, tm) under `limits`.
std::vector<GapPolynomial> gap_segments(const PredecessorContext& ctx,
                                        double tau, double upsilon, double tm,
                                        const VehicleLimits& limits);

// Where the minimum gap was attained.
enum class MinGapLocation {
  AtEntry,            // left end of the analysis window (t = tau)
  AtHorizonEnd,       // right end (t = tm, the follower's MZ entry)
  AtSegmentBoundary,  // junction between two segments
  Interior,           // stationary point inside a segment
};

std::string to_string(MinGapLocation l);

struct MinGapResult {
  double s_star = 0;
  double t_star = 0;
  MinGapLocation location = MinGapLocation::AtEntry;
  std::size_t segment_index = 0;
  GapArcSource pred_source = GapArcSource::PredCubic;
  GapArcSource ego_source = GapArcSource::EgoCubic;
};

// Global minimum over all segments: endpoints plus interior roots of the
// gap-rate quadratic with nonnegative curvature; ties resolve to smaller t.
MinGapResult min_gap(const std::vector<GapPolynomial>& segments);

struct FeasibilityResult {
  bool feasible = false;
  double s_star = 0;
  double t_star = 0;
  double tm = 0;  // follower's scheduled MZ entry used in the analysis
  double vm = 0;  // follower's MZ entry speed
};

// Entry state (tau, upsilon) is feasible iff the minimum gap over
// [tau, tm] stays at or above min_gap - tolerance.
FeasibilityResult is_feasible(const PredecessorContext& ctx, double tau,
                              double upsilon, double tm, double vm,
                              const VehicleLimits& limits,
                              double tolerance = 1e-9);

// As above, but with the follower's MZ entry scheduled internally
// (headway behind k or the follower's own reachability bound, whichever
// is later) and its trajectory solved with constraints.
FeasibilityResult check_entry_state(const PredecessorContext& ctx, double tau,
                                    double upsilon,
                                    const VehicleLimits& limits,
                                    double tolerance = 1e-9);

struct FeasibilityMapPoint {
  double tau = 0;
  double upsilon = 0;
  double s_star = 0;
  bool feasible = false;
};

// Rasterize check_entry_state over a tau x upsilon grid (row-major: upsilon
// outer, tau inner). Resolution is points per axis, >= 2.
std::vector<FeasibilityMapPoint> feasibility_map(
    const PredecessorContext& ctx, double tau_min, double tau_max,
    double upsilon_min, double upsilon_max, int resolution,
    const VehicleLimits& limits, double tolerance = 1e-9);

}  // namespace icav
