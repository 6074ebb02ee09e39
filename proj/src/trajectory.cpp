#include "icav/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace icav {

std::string to_string(ArcKind k) {
  switch (k) {
    case ArcKind::UnconstrainedCubic:
      return "cubic";
    case ArcKind::ControlSaturated:
      return "ctrl_sat";
    case ArcKind::SpeedSaturated:
      return "speed_sat";
  }
  return "?";
}

State Arc::eval(double t) const {
  const double xi = t - t_begin;
  State s;
  s.u = a * xi + b;
  s.v = (0.5 * a * xi + b) * xi + c;
  s.p = ((a * xi / 6.0 + 0.5 * b) * xi + c) * xi + d;
  return s;
}

Eigen::Vector4d Arc::position_monomials() const {
  return to_global_monomials(t_begin, a, b, c, d);
}

Eigen::Vector4d to_global_monomials(double r, double a, double b, double c,
                                    double d) {
  // p(t) = a (t-r)^3/6 + b (t-r)^2/2 + c (t-r) + d
  Eigen::Vector4d m;
  m[0] = a / 6.0;
  m[1] = -0.5 * a * r + 0.5 * b;
  m[2] = 0.5 * a * r * r - b * r + c;
  m[3] = -a * r * r * r / 6.0 + 0.5 * b * r * r - c * r + d;
  return m;
}

PiecewiseTrajectory::PiecewiseTrajectory(std::vector<Arc> arcs)
    : arcs_(std::move(arcs)) {
  if (arcs_.empty()) throw DomainError("trajectory needs at least one arc");
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    if (!(arcs_[i].t_end > arcs_[i].t_begin))
      throw DomainError("arc with nonpositive duration");
    if (i > 0 && std::abs(arcs_[i].t_begin - arcs_[i - 1].t_end) > 1e-9)
      throw DomainError("arcs do not tile the time domain");
  }
}

double PiecewiseTrajectory::t0() const {
  if (arcs_.empty()) throw DomainError("empty trajectory");
  return arcs_.front().t_begin;
}

double PiecewiseTrajectory::tm() const {
  if (arcs_.empty()) throw DomainError("empty trajectory");
  return arcs_.back().t_end;
}

std::size_t PiecewiseTrajectory::arc_index_at(double t) const {
  if (arcs_.empty()) throw DomainError("empty trajectory");
  const double slack = 1e-9 * std::max(1.0, std::abs(tm()));
  if (t < t0() - slack || t > tm() + slack) {
    std::ostringstream os;
    os << "time " << t << " outside trajectory domain [" << t0() << ", "
       << tm() << "]";
    throw DomainError(os.str());
  }
  // First arc whose end covers t.
  auto it = std::lower_bound(
      arcs_.begin(), arcs_.end(), t,
      [](const Arc& arc, double time) { return arc.t_end < time; });
  if (it == arcs_.end()) --it;
  return static_cast<std::size_t>(it - arcs_.begin());
}

const Arc& PiecewiseTrajectory::arc_at(double t) const {
  return arcs_[arc_index_at(t)];
}

State PiecewiseTrajectory::eval(double t) const { return arc_at(t).eval(t); }

double PiecewiseTrajectory::initial_speed() const {
  return arcs_.front().c;
}

double PiecewiseTrajectory::terminal_speed() const {
  const Arc& last = arcs_.back();
  return last.eval(last.t_end).v;
}

double PiecewiseTrajectory::max_position_jump() const {
  double worst = 0;
  for (std::size_t i = 1; i < arcs_.size(); ++i) {
    const double t = arcs_[i].t_begin;
    worst = std::max(worst,
                     std::abs(arcs_[i - 1].eval(t).p - arcs_[i].eval(t).p));
  }
  return worst;
}

double PiecewiseTrajectory::max_speed_jump() const {
  double worst = 0;
  for (std::size_t i = 1; i < arcs_.size(); ++i) {
    const double t = arcs_[i].t_begin;
    worst = std::max(worst,
                     std::abs(arcs_[i - 1].eval(t).v - arcs_[i].eval(t).v));
  }
  return worst;
}

Arc make_cruise_arc(double t_begin, double t_end, double p_begin, double v) {
  Arc arc;
  arc.kind = ArcKind::SpeedSaturated;
  arc.t_begin = t_begin;
  arc.t_end = t_end;
  arc.a = arc.b = 0;
  arc.c = v;
  arc.d = p_begin;
  return arc;
}

Arc make_cubic_arc(double t_begin, double t_end, double a, double b, double c,
                   double d) {
  Arc arc;
  arc.kind = ArcKind::UnconstrainedCubic;
  arc.t_begin = t_begin;
  arc.t_end = t_end;
  arc.a = a;
  arc.b = b;
  arc.c = c;
  arc.d = d;
  return arc;
}

}  // namespace icav
