#include "icav/scheduler.hpp"

#include <cmath>
#include <sstream>

namespace icav {

std::string to_string(BindingCase c) {
  switch (c) {
    case BindingCase::FirstVehicle:
      return "first_vehicle";
    case BindingCase::PredecessorOrder:
      return "predecessor_order";
    case BindingCase::SameLaneHeadway:
      return "same_lane_headway";
    case BindingCase::ConflictSeparation:
      return "conflict_separation";
    case BindingCase::DynamicsLowerBound:
      return "dynamics_lower_bound";
  }
  return "?";
}

DynamicsBound dynamics_lower_bound(double t0, double v0, double cz_length,
                                   const VehicleLimits& limits) {
  limits.validate();
  if (v0 < 0) throw InfeasibleError("entry speed must be nonnegative");
  if (v0 > limits.v_max + 1e-12)
    throw InfeasibleError("entry speed exceeds the speed limit");
  const double L = cz_length;
  const double u = limits.u_max;
  const double vmax = limits.v_max;

  DynamicsBound out;
  out.t1_bound = t0 + L / vmax + (vmax - v0) * (vmax - v0) / (2.0 * u * vmax);
  const double vm_free = std::sqrt(2.0 * L * u + v0 * v0);
  out.t2_bound = t0 + (vm_free - v0) / u;
  // Reaches the speed limit before the MZ iff the distance needed to get
  // there fits inside the CZ.
  out.reaches_v_max = vm_free >= vmax;
  if (out.reaches_v_max) {
    out.t_c = out.t1_bound;
    out.vm_at_bound = vmax;
  } else {
    out.t_c = out.t2_bound;
    out.vm_at_bound = vm_free;
  }
  return out;
}

double first_vehicle_policy(const FirstVehiclePolicy& policy, double t0,
                            double v0, double cz_length,
                            const VehicleLimits& limits) {
  switch (policy.kind) {
    case FirstVehiclePolicyKind::EnergyOptimal:
      if (!(v0 > 0))
        throw InfeasibleError(
            "energy-optimal entry policy needs a positive entry speed");
      return t0 + cz_length / v0;
    case FirstVehiclePolicyKind::ThroughputOptimal:
      return dynamics_lower_bound(t0, v0, cz_length, limits).t_c;
    case FirstVehiclePolicyKind::Explicit: {
      const double floor =
          dynamics_lower_bound(t0, v0, cz_length, limits).t_c;
      if (policy.explicit_tm < floor - 1e-9) {
        std::ostringstream os;
        os << "explicit MZ entry time " << policy.explicit_tm
           << " is below the reachable bound " << floor;
        throw InfeasibleError(os.str());
      }
      return policy.explicit_tm;
    }
  }
  throw ConfigError("invalid first-vehicle policy");
}

ScheduleEntry schedule_next(const std::vector<PublishedSchedule>& queue,
                            const ArrivalData& arrival,
                            const IntersectionGeometry& geom,
                            const VehicleLimits& limits, double min_gap,
                            const FirstVehiclePolicy& policy) {
  if (!geom.has_lane(arrival.lane))
    throw ConfigError("arrival on unknown lane: " + arrival.lane);
  if (!(min_gap > 0) || min_gap >= geom.mz_side())
    throw ConfigError("min_gap must lie in (0, mz_side)");

  const DynamicsBound bound =
      dynamics_lower_bound(arrival.t0, arrival.v0, geom.cz_length(), limits);

  ScheduleEntry entry;
  entry.vehicle_id = arrival.vehicle_id;
  entry.t_c = bound.t_c;
  entry.t1_bound = bound.t1_bound;
  entry.t2_bound = bound.t2_bound;

  if (queue.empty()) {
    entry.tm_star = first_vehicle_policy(policy, arrival.t0, arrival.v0,
                                         geom.cz_length(), limits);
    entry.binding_case = BindingCase::FirstVehicle;
    // An unconstrained lead vehicle cruises; the throughput-optimal one ends
    // at the bounding profile's speed.
    entry.vm = entry.tm_star <= bound.t_c + 1e-12 ? bound.vm_at_bound
                                                  : arrival.v0;
    return entry;
  }

  const PublishedSchedule& prev = queue.back();
  const RelationLabel relation =
      classify_relation(geom, prev.lane, arrival.lane);
  entry.relation_to_predecessor = relation;

  // Nearest earlier same-lane vehicle (the one physically directly ahead).
  const PublishedSchedule* in_lane = nullptr;
  for (auto it = queue.rbegin(); it != queue.rend(); ++it) {
    if (it->lane == arrival.lane) {
      in_lane = &*it;
      break;
    }
  }

  double best = bound.t_c;
  BindingCase binding = BindingCase::DynamicsLowerBound;
  auto consider = [&](double candidate, BindingCase c) {
    if (candidate > best) {
      best = candidate;
      binding = c;
    }
  };

  switch (relation) {
    case RelationLabel::SameLane: {
      if (in_lane == nullptr || in_lane->vehicle_id != prev.vehicle_id)
        throw NumericalError(
            "queue inconsistency: same-lane predecessor lookup failed");
      consider(prev.tm + min_gap / prev.vm, BindingCase::SameLaneHeadway);
      break;
    }
    case RelationLabel::SameDirectionDifferentLane:
    case RelationLabel::OppositeNoConflict: {
      consider(prev.tm, BindingCase::PredecessorOrder);
      if (in_lane != nullptr)
        consider(in_lane->tm + min_gap / in_lane->vm,
                 BindingCase::SameLaneHeadway);
      break;
    }
    case RelationLabel::Conflicting: {
      // The MZ spacing must hold against every conflicting vehicle still in
      // the system, not only the queue tail: an earlier vehicle on the other
      // axis may leave the MZ later than the tail enters it when entry
      // speeds are heterogeneous.
      const double spacing = geom.mz_spacing();
      for (const auto& q : queue) {
        if (classify_relation(geom, q.lane, arrival.lane) ==
            RelationLabel::Conflicting)
          consider(q.tm + spacing / q.vm, BindingCase::ConflictSeparation);
      }
      consider(prev.tm, BindingCase::PredecessorOrder);
      if (in_lane != nullptr)
        consider(in_lane->tm + min_gap / in_lane->vm,
                 BindingCase::SameLaneHeadway);
      break;
    }
  }

  entry.tm_star = best;
  entry.binding_case = binding;
  entry.vm = binding == BindingCase::DynamicsLowerBound ? bound.vm_at_bound
                                                        : arrival.v0;
  return entry;
}

}  // namespace icav
