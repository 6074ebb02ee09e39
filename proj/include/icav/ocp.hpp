#pragma once

#include <optional>

#include "icav/trajectory.hpp"
#include "icav/types.hpp"

// Energy-minimal (L2-norm of acceleration) trajectory generation over the
// control zone: given entry time/speed and a scheduled MZ entry time, produce
// the control law that covers the CZ exactly, ending with zero control, while
// respecting acceleration and speed bounds. Unconstrained horizons yield a
// single cubic-in-position arc; tighter horizons splice saturated-control
// and saturated-speed arcs around it.

namespace icav {

struct BoundaryConditions {
  double t0 = 0;         // CZ entry time, p(t0) = 0
  double v0 = 0;         // entry speed
  double tm = 0;         // MZ entry time, p(tm) = cz_length
  double cz_length = 0;  // L
  // Free terminal speed: the costate boundary condition forces u(tm) = 0.
  // The fixed-terminal-speed variant is not supported.
  bool terminal_costate_zero = true;
};

// Coefficients of the unconstrained optimum in the local clock xi = t - t_ref:
// u = a xi + b, v = a xi^2/2 + b xi + c, p = a xi^3/6 + b xi^2/2 + c xi + d.
struct UnconstrainedCubic {
  double a = 0, b = 0, c = 0, d = 0;
  double t_ref = 0;
};

// Solve the two-point boundary value problem p(t0)=0, v(t0)=v0, p(tm)=L,
// u(tm)=0. The 4x4 system is assembled and solved in nondimensional units
// (time scaled by tm-t0, position by L) for conditioning. t_ref = t0.
UnconstrainedCubic solve_unconstrained(const BoundaryConditions& bc);

// Re-solve with the current state (t, p_t, v_t) as initial data; on an
// undisturbed trajectory this reproduces the original coefficients.
// t_ref = t.
UnconstrainedCubic resolve_feedback(const BoundaryConditions& bc, double t,
                                    double p_t, double v_t);

// Full constrained solve. Throws InfeasibleError when tm is unreachable
// (before the full-throttle bound, or so late that even crawling at v_min
// overshoots the CZ) and NumericalError if arc composition fails.
PiecewiseTrajectory solve_with_constraints(const BoundaryConditions& bc,
                                           const VehicleLimits& limits);

// 1/2 * integral of u^2 dt, evaluated in closed form per arc.
double trajectory_cost(const PiecewiseTrajectory& traj);

// Single-arc trajectory from an unconstrained solve.
PiecewiseTrajectory to_trajectory(const UnconstrainedCubic& cubic, double tm);

}  // namespace icav
