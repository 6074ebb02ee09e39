#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "icav/types.hpp"

namespace icav {

// Kinematic state at one instant.
struct State {
  double p = 0;  // m
  double v = 0;  // m/s
  double u = 0;  // m/s^2
};

enum class ArcKind {
  UnconstrainedCubic,  // u affine in t, position cubic
  ControlSaturated,    // u pinned at u_max or u_min
  SpeedSaturated,      // v pinned at v_max or v_min, u = 0
};

std::string to_string(ArcKind k);

// One trajectory piece on [t_begin, t_end]. Coefficients are stored in the
// arc-local clock xi = t - t_begin, which keeps the cubic terms conditioned
// even when absolute times are large:
//
//   p(xi) = a xi^3/6 + b xi^2/2 + c xi + d
//   v(xi) = a xi^2/2 + b xi + c
//   u(xi) = a xi + b
//
// ControlSaturated arcs have a = 0 (b is the saturated control, c/d the
// entry speed/position); SpeedSaturated arcs have a = b = 0 (c is the
// saturated speed, d the entry position).
struct Arc {
  ArcKind kind = ArcKind::UnconstrainedCubic;
  double t_begin = 0;
  double t_end = 0;
  double a = 0, b = 0, c = 0, d = 0;

  double duration() const { return t_end - t_begin; }
  State eval(double t) const;

  // Coefficients of p(t) in the global monomial basis {t^3, t^2, t, 1}.
  Eigen::Vector4d position_monomials() const;
};

// A piecewise trajectory tiling [t0, tm] with contiguous arcs, continuous in
// position and speed at every junction.
class PiecewiseTrajectory {
 public:
  PiecewiseTrajectory() = default;
  explicit PiecewiseTrajectory(std::vector<Arc> arcs);

  const std::vector<Arc>& arcs() const { return arcs_; }
  bool empty() const { return arcs_.empty(); }

  double t0() const;
  double tm() const;

  // Arc-local polynomial evaluation at absolute time t in [t0, tm].
  // Throws DomainError outside the domain (with a small slack for roundoff).
  State eval(double t) const;

  double initial_speed() const;
  double terminal_speed() const;

  // Largest absolute position/speed jump across junctions (0 if < 2 arcs).
  double max_position_jump() const;
  double max_speed_jump() const;

  const Arc& arc_at(double t) const;
  std::size_t arc_index_at(double t) const;

 private:
  std::vector<Arc> arcs_;
};

// Trajectory of a vehicle cruising at constant speed (u = 0); used for the
// MZ transit extension and for simple test fixtures.
Arc make_cruise_arc(double t_begin, double t_end, double p_begin, double v);

// Single unconstrained cubic arc from local coefficients.
Arc make_cubic_arc(double t_begin, double t_end, double a, double b, double c,
                   double d);

// Shift a local-clock coefficient quartet (a,b,c,d) at reference time t_ref
// to global monomials (A,B,C,D) with p(t) = A t^3 + B t^2 + C t + D.
Eigen::Vector4d to_global_monomials(double t_ref, double a, double b, double c,
                                    double d);

// eval_state(traj, t) -> (p, v, u); see PiecewiseTrajectory::eval.
inline State eval_state(const PiecewiseTrajectory& traj, double t) {
  return traj.eval(t);
}

}  // namespace icav
