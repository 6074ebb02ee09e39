#include "icav/ocp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <sstream>

#include "icav/scheduler.hpp"

namespace icav {

namespace {

constexpr double kJunctionTolerance = 1e-10;  // s, junction-time search
constexpr int kMaxIterations = 200;

void check_bc(const BoundaryConditions& bc) {
  if (!(bc.tm > bc.t0)) throw DomainError("degenerate horizon: tm <= t0");
  if (!(bc.cz_length > 0)) throw DomainError("cz_length must be positive");
  if (bc.v0 < 0) throw DomainError("entry speed must be nonnegative");
  if (!bc.terminal_costate_zero)
    throw DomainError("fixed terminal speed variant is not supported");
}

// Scaled boundary solve shared by solve_unconstrained and resolve_feedback:
// initial state (ts, ps, vs), terminal p(tm) = L and u(tm) = 0.
UnconstrainedCubic solve_boundary(double ts, double ps, double vs, double tm,
                                  double L) {
  const double T = tm - ts;
  if (!(T > 0)) throw DomainError("degenerate horizon: tm <= start time");

  // sigma = (t - ts)/T, pi = (p - ps)/L. Unknowns (alpha, beta, gamma,
  // delta) of pi = alpha s^3/6 + beta s^2/2 + gamma s + delta; rows are
  // pi(0) = 0, pi'(0) = vs T/L, pi(1) = (L - ps)/L, pi''(1) = 0.
  Eigen::Matrix4d M;
  M << 0, 0, 0, 1,
      0, 0, 1, 0,
      1.0 / 6.0, 0.5, 1, 1,
      1, 1, 0, 0;
  Eigen::Vector4d rhs;
  rhs << 0, vs * T / L, (L - ps) / L, 0;

  const Eigen::Vector4d x = Eigen::PartialPivLU<Eigen::Matrix4d>(M).solve(rhs);
  if (!x.allFinite())
    throw NumericalError("boundary solve produced non-finite coefficients");

  UnconstrainedCubic out;
  out.t_ref = ts;
  out.a = L * x[0] / (T * T * T);
  out.b = L * x[1] / (T * T);
  out.c = vs;
  out.d = ps;
  return out;
}

double sq(double x) { return x * x; }

// Safeguarded Newton within a bracketing interval, bisection fallback.
double find_root(const std::function<double(double)>& f,
                 const std::function<double(double)>& df, double lo,
                 double hi, const char* what) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo > 0) == (fhi > 0)) {
    std::ostringstream os;
    os << what << ": root not bracketed on [" << lo << ", " << hi << "] (f="
       << flo << ", " << fhi << ")";
    throw NumericalError(os.str());
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < kMaxIterations; ++it) {
    const double fx = f(x);
    if (fx == 0) return x;
    if ((fx > 0) == (flo > 0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    if (hi - lo < kJunctionTolerance) break;
    double next = x;
    const double d = df ? df(x) : 0;
    if (d != 0) next = x - fx / d;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return 0.5 * (lo + hi);
}

// Arc composition helper for one violation sign. All junction math lives
// here; the public solve picks which composition to request.
class Composer {
 public:
  Composer(const BoundaryConditions& bc, const VehicleLimits& lim)
      : bc_(bc), lim_(lim), L_(bc.cz_length) {
    eps_u_ = 1e-10 * std::max(1.0, std::max(lim.u_max, -lim.u_min));
    eps_v_ = 1e-10 * std::max(1.0, lim.v_max);
  }

  double eps_u() const { return eps_u_; }
  double eps_v() const { return eps_v_; }
  static constexpr double eps_t() { return 1e-9; }

  // [saturated control, cubic]: returns arcs, or empty if the relaxing
  // cubic would cross the speed bound (a speed tail is then required).
  std::vector<Arc> control_then_cubic(int sign) const {
    const double u_sat = sign > 0 ? lim_.u_max : lim_.u_min;
    const double v_bound = sign > 0 ? lim_.v_max : lim_.v_min;
    const double t_hit = bc_.t0 + (v_bound - bc_.v0) / u_sat;
    const double hi = std::min(t_hit, bc_.tm);

    auto f = [&](double t1) { return shortfall(t1, u_sat); };
    const double f_hi = f(hi);
    if (sign > 0 ? f_hi < 0 : f_hi > 0) return {};  // needs the speed arc

    auto df = [&](double t1) { return u_sat * (bc_.tm - t1) / 3.0; };
    const double t1 = find_root(f, df, bc_.t0, hi, "control-arc junction");

    const double p1 = sat_p(u_sat, t1 - bc_.t0);
    const double v1 = sat_v(u_sat, t1 - bc_.t0);
    const double T2 = bc_.tm - t1;
    std::vector<Arc> arcs;
    if (T2 <= eps_t()) {
      // Entire horizon saturated (time-optimal bound with no cruise phase).
      arcs.push_back(control_arc(bc_.t0, bc_.tm, u_sat));
      return arcs;
    }
    Arc bridge = make_cubic_arc(t1, bc_.tm, -u_sat / T2, u_sat, v1, p1);
    const double v_tm = bridge.eval(bc_.tm).v;
    if (sign > 0 ? v_tm > lim_.v_max + eps_v_ : v_tm < lim_.v_min - eps_v_)
      return {};
    if (t1 > bc_.t0 + eps_t())
      arcs.push_back(control_arc(bc_.t0, t1, u_sat));
    else
      bridge.t_begin = bc_.t0;
    arcs.push_back(bridge);
    return arcs;
  }

  // [cubic, saturated speed]: tangential entry into the bound, cruise to tm.
  // Returns empty when the tangent cubic violates the control bound.
  std::vector<Arc> cubic_then_speed(int sign) const {
    const double v_sat = sign > 0 ? lim_.v_max : lim_.v_min;
    if (std::abs(v_sat - bc_.v0) <= eps_v_)
      throw NumericalError(
          "arc composition failed: entry speed sits on the violated bound");
    const double tau = tangent_duration(bc_.t0, 0.0, bc_.v0, v_sat);
    if (!(tau > 0) || tau > bc_.tm - bc_.t0 + eps_t())
      throw NumericalError(
          "arc composition failed: speed-bound tangency outside the horizon");
    Arc head = tangent_cubic(bc_.t0, 0.0, bc_.v0, v_sat, tau);
    if (head.b > lim_.u_max + eps_u_ || head.b < lim_.u_min - eps_u_)
      return {};
    std::vector<Arc> arcs;
    double cruise_start = bc_.t0;
    double cruise_p = 0;
    if (tau > eps_t()) {
      arcs.push_back(head);
      cruise_start = bc_.t0 + tau;
      cruise_p = head.eval(cruise_start).p;
    }
    append_cruise(arcs, cruise_start, cruise_p, v_sat);
    return arcs;
  }

  // [saturated control, cubic, saturated speed]. The middle piece joins the
  // control arc continuously in u (so its length is pinned by the tangency
  // into the speed bound) and the junction t1 is the root of the position
  // residual, which is strictly monotone with slope (v_sat - v1)/3.
  // Degenerates to [control, speed] at the time-optimal bound.
  std::vector<Arc> control_cubic_speed(int sign) const {
    const double u_sat = sign > 0 ? lim_.u_max : lim_.u_min;
    const double v_sat = sign > 0 ? lim_.v_max : lim_.v_min;
    const double t_hit = bc_.t0 + (v_sat - bc_.v0) / u_sat;
    if (!(t_hit < bc_.tm + eps_t()))
      throw NumericalError(
          "arc composition failed: speed bound unreachable on this horizon");

    // Bridge length from control continuity + tangency: v rises from v1 to
    // v_sat under u falling linearly from u_sat to 0.
    auto bridge_tau = [&](double v1) { return 2.0 * (v_sat - v1) / u_sat; };
    auto residual = [&](double t1) {
      const double p1 = sat_p(u_sat, t1 - bc_.t0);
      const double v1 = sat_v(u_sat, t1 - bc_.t0);
      const double tau = bridge_tau(v1);
      return p1 + v1 * tau + u_sat * tau * tau / 3.0 +
             v_sat * (bc_.tm - t1 - tau) - L_;
    };
    auto dresidual = [&](double t1) {
      return (v_sat - sat_v(u_sat, t1 - bc_.t0)) / 3.0;
    };

    double t1;
    const double r0 = residual(bc_.t0);
    if (sign > 0 ? r0 >= 0 : r0 <= 0)
      t1 = bc_.t0;  // no control arc needed after all
    else
      t1 = find_root(residual, dresidual, bc_.t0, t_hit,
                     "control-to-speed junction");

    const double p1 = sat_p(u_sat, t1 - bc_.t0);
    const double v1 = sat_v(u_sat, t1 - bc_.t0);
    std::vector<Arc> arcs;
    if (t1 > bc_.t0 + eps_t()) arcs.push_back(control_arc(bc_.t0, t1, u_sat));

    double cruise_start = t1;
    double cruise_p = p1;
    if (std::abs(v1 - v_sat) > eps_v_) {
      // With the control arc at its exact junction the remaining distance
      // matches the tangency condition; recompute tau from it so the cruise
      // lands on p(tm) = L despite root-find tolerance.
      const double tau = tangent_duration(t1, p1, v1, v_sat);
      if (!(tau > eps_t()) || tau > bc_.tm - t1 + eps_t())
        throw NumericalError(
            "arc composition failed: tangent bridge does not fit the "
            "horizon");
      Arc mid = tangent_cubic(t1, p1, v1, v_sat, tau);
      arcs.push_back(mid);
      cruise_start = t1 + tau;
      cruise_p = mid.eval(cruise_start).p;
    }
    append_cruise(arcs, cruise_start, cruise_p, v_sat);
    return arcs;
  }

 private:
  double sat_v(double u_sat, double dt) const { return bc_.v0 + u_sat * dt; }
  double sat_p(double u_sat, double dt) const {
    return (0.5 * u_sat * dt + bc_.v0) * dt;
  }

  Arc control_arc(double t_begin, double t_end, double u_sat) const {
    Arc arc;
    arc.kind = ArcKind::ControlSaturated;
    arc.t_begin = t_begin;
    arc.t_end = t_end;
    arc.a = 0;
    arc.b = u_sat;
    arc.c = sat_v(u_sat, t_begin - bc_.t0);
    arc.d = sat_p(u_sat, t_begin - bc_.t0);
    return arc;
  }

  // Shortfall of [saturated to t1, relaxing cubic to tm] against p(tm) = L;
  // strictly monotone in t1, zero at the junction.
  double shortfall(double t1, double u_sat) const {
    const double T2 = bc_.tm - t1;
    return sat_p(u_sat, t1 - bc_.t0) + sat_v(u_sat, t1 - bc_.t0) * T2 +
           u_sat * T2 * T2 / 3.0 - L_;
  }

  // Cubic from (ts, ps, vs) reaching v_sat with zero control after tau.
  Arc tangent_cubic(double ts, double ps, double vs, double v_sat,
                    double tau) const {
    const double a = 2.0 * (vs - v_sat) / (tau * tau);
    const double b = 2.0 * (v_sat - vs) / tau;
    return make_cubic_arc(ts, ts + tau, a, b, vs, ps);
  }

  // Tangent-cubic duration such that the subsequent cruise meets p(tm) = L.
  double tangent_duration(double ts, double ps, double vs,
                          double v_sat) const {
    return 3.0 * (v_sat * (bc_.tm - ts) - (L_ - ps)) / (v_sat - vs);
  }

  void append_cruise(std::vector<Arc>& arcs, double start, double p_start,
                     double v_sat) const {
    if (bc_.tm - start > eps_t())
      arcs.push_back(make_cruise_arc(start, bc_.tm, p_start, v_sat));
    else if (!arcs.empty())
      arcs.back().t_end = bc_.tm;
  }

  const BoundaryConditions& bc_;
  const VehicleLimits& lim_;
  double L_;
  double eps_u_ = 0;
  double eps_v_ = 0;
};

void verify_solution(const PiecewiseTrajectory& traj,
                     const BoundaryConditions& bc, const VehicleLimits& lim) {
  const double L = bc.cz_length;
  const double tol_p = 1e-9 * std::max(1.0, L);
  const State start = traj.eval(bc.t0);
  const State end = traj.eval(bc.tm);
  std::ostringstream os;
  if (std::abs(start.p) > tol_p || std::abs(start.v - bc.v0) > 1e-9)
    os << "entry boundary residual; ";
  if (std::abs(end.p - L) > tol_p) os << "terminal position residual; ";
  if (traj.max_position_jump() > tol_p ||
      traj.max_speed_jump() > 1e-9 * std::max(1.0, lim.v_max))
    os << "junction discontinuity; ";
  const double slack_u = 1e-9 * std::max(1.0, std::max(lim.u_max, -lim.u_min));
  const double slack_v = 1e-9 * std::max(1.0, lim.v_max);
  for (const Arc& arc : traj.arcs()) {
    // u is affine and v monotone between control roots, so endpoint checks
    // plus the speed vertex cover the extrema.
    const State s0 = arc.eval(arc.t_begin);
    const State s1 = arc.eval(arc.t_end);
    for (double u : {s0.u, s1.u})
      if (u > lim.u_max + slack_u || u < lim.u_min - slack_u)
        os << "control bound exceeded; ";
    double v_lo = std::min(s0.v, s1.v), v_hi = std::max(s0.v, s1.v);
    if (arc.a != 0) {
      const double xi_vertex = -arc.b / arc.a;
      if (xi_vertex > 0 && xi_vertex < arc.duration()) {
        const double v_vertex = arc.eval(arc.t_begin + xi_vertex).v;
        v_lo = std::min(v_lo, v_vertex);
        v_hi = std::max(v_hi, v_vertex);
      }
    }
    if (v_hi > lim.v_max + slack_v || v_lo < lim.v_min - slack_v)
      os << "speed bound exceeded; ";
  }
  const std::string msg = os.str();
  if (!msg.empty()) {
    std::ostringstream full;
    full << "arc composition verification failed: " << msg << "(t0=" << bc.t0
         << ", v0=" << bc.v0 << ", tm=" << bc.tm << ", L=" << L
         << ", arcs=" << traj.arcs().size() << ")";
    throw NumericalError(full.str());
  }
}

}  // namespace

UnconstrainedCubic solve_unconstrained(const BoundaryConditions& bc) {
  check_bc(bc);
  return solve_boundary(bc.t0, 0.0, bc.v0, bc.tm, bc.cz_length);
}

UnconstrainedCubic resolve_feedback(const BoundaryConditions& bc, double t,
                                    double p_t, double v_t) {
  check_bc(bc);
  if (t < bc.t0 - 1e-9 || t >= bc.tm)
    throw DomainError("feedback re-solve time outside [t0, tm)");
  if (p_t > bc.cz_length + 1e-9)
    throw DomainError("feedback re-solve position beyond the CZ");
  return solve_boundary(t, p_t, v_t, bc.tm, bc.cz_length);
}

PiecewiseTrajectory to_trajectory(const UnconstrainedCubic& cubic, double tm) {
  return PiecewiseTrajectory(
      {make_cubic_arc(cubic.t_ref, tm, cubic.a, cubic.b, cubic.c, cubic.d)});
}

double trajectory_cost(const PiecewiseTrajectory& traj) {
  double cost = 0;
  for (const Arc& arc : traj.arcs()) {
    const double dt = arc.duration();
    // 1/2 integral of (a xi + b)^2 over [0, dt]
    cost += 0.5 * (arc.a * arc.a * dt * dt * dt / 3.0 +
                   arc.a * arc.b * dt * dt + arc.b * arc.b * dt);
  }
  return cost;
}

PiecewiseTrajectory solve_with_constraints(const BoundaryConditions& bc,
                                           const VehicleLimits& lim) {
  check_bc(bc);
  lim.validate();
  if (bc.v0 > lim.v_max + 1e-9)
    throw InfeasibleError("entry speed above the speed limit");
  if (bc.v0 < lim.v_min - 1e-9)
    throw InfeasibleError("entry speed below the minimum speed");

  const double L = bc.cz_length;
  const double T = bc.tm - bc.t0;

  // Reachability window. Early bound: full throttle. Late bound: brake to
  // v_min as early as allowed, then crawl.
  const DynamicsBound early = dynamics_lower_bound(bc.t0, bc.v0, L, lim);
  if (bc.tm < early.t_c - 1e-9) {
    std::ostringstream os;
    os << "MZ entry time " << bc.tm << " precedes the reachable bound "
       << early.t_c;
    throw InfeasibleError(os.str());
  }
  {
    const double brake_time = (bc.v0 - lim.v_min) / (-lim.u_min);
    const double d_min =
        brake_time >= T
            ? bc.v0 * T + 0.5 * lim.u_min * T * T
            : (sq(bc.v0) - sq(lim.v_min)) / (-2.0 * lim.u_min) +
                  lim.v_min * (T - brake_time);
    if (d_min > L + 1e-9 * std::max(1.0, L))
      throw InfeasibleError(
          "MZ entry time is too late: the slowest admissible profile "
          "overshoots the CZ");
  }

  Composer comp(bc, lim);
  const UnconstrainedCubic base = solve_unconstrained(bc);
  const double u_entry = base.b;
  const double v_term = 0.5 * base.a * T * T + base.b * T + base.c;

  // With u(tm) = 0 the unconstrained speed is monotone, so the control
  // extremum sits at t0 and the speed extremum at tm; violations of opposite
  // signs cannot coexist.
  int u_viol = 0;
  if (u_entry > lim.u_max + comp.eps_u())
    u_viol = +1;
  else if (u_entry < lim.u_min - comp.eps_u())
    u_viol = -1;
  int v_viol = 0;
  if (v_term > lim.v_max + comp.eps_v())
    v_viol = +1;
  else if (v_term < lim.v_min - comp.eps_v())
    v_viol = -1;

  std::vector<Arc> arcs;
  if (u_viol == 0 && v_viol == 0) {
    arcs.push_back(
        make_cubic_arc(bc.t0, bc.tm, base.a, base.b, base.c, base.d));
  } else if (u_viol != 0) {
    arcs = comp.control_then_cubic(u_viol);
    if (arcs.empty()) arcs = comp.control_cubic_speed(u_viol);
  } else {
    arcs = comp.cubic_then_speed(v_viol);
    if (arcs.empty()) arcs = comp.control_cubic_speed(v_viol > 0 ? +1 : -1);
  }

  PiecewiseTrajectory traj(std::move(arcs));
  verify_solution(traj, bc, lim);
  return traj;
}

}  // namespace icav
