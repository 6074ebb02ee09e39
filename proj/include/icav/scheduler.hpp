#pragma once

#include <optional>
#include <string>
#include <vector>

#include "icav/types.hpp"

// Merging-zone entry scheduling. Each arriving vehicle's MZ entry time is the
// smallest time compatible with queue order, the rear-end headway behind its
// in-lane predecessor, the MZ separation from every conflicting predecessor,
// and its own acceleration-limited earliest arrival.

namespace icav {

enum class BindingCase {
  FirstVehicle,        // queue was empty; entry policy chose the time
  PredecessorOrder,    // queue-order floor (previous vehicle's entry time)
  SameLaneHeadway,     // headway behind the in-lane predecessor
  ConflictSeparation,  // MZ spacing behind a conflicting predecessor
  DynamicsLowerBound,  // full-throttle reachability bound
};

std::string to_string(BindingCase c);

// Earliest possible MZ arrival: full throttle until the speed limit, then
// cruise. `t1_bound` is the value for the limit-reaching profile, `t2_bound`
// for the profile that reaches the MZ first; `t_c` is whichever applies.
struct DynamicsBound {
  double t_c = 0;
  double vm_at_bound = 0;  // speed at MZ entry on the bounding profile
  bool reaches_v_max = false;
  double t1_bound = 0;
  double t2_bound = 0;
};

DynamicsBound dynamics_lower_bound(double t0, double v0, double cz_length,
                                   const VehicleLimits& limits);

// What a scheduled predecessor publishes for its successors.
struct PublishedSchedule {
  int vehicle_id = 0;
  std::string lane;
  double tm = 0;  // MZ entry time
  double vm = 0;  // MZ entry speed (constant through the MZ)
};

struct ArrivalData {
  int vehicle_id = 0;
  std::string lane;
  double t0 = 0;
  double v0 = 0;
};

struct ScheduleEntry {
  int vehicle_id = 0;
  double tm_star = 0;
  double vm = 0;  // predicted MZ entry speed; finalized after the solve
  BindingCase binding_case = BindingCase::FirstVehicle;
  std::optional<RelationLabel> relation_to_predecessor;
  double t_c = 0;
  double t1_bound = 0;
  double t2_bound = 0;
};

enum class FirstVehiclePolicyKind { EnergyOptimal, ThroughputOptimal, Explicit };

struct FirstVehiclePolicy {
  FirstVehiclePolicyKind kind = FirstVehiclePolicyKind::EnergyOptimal;
  double explicit_tm = 0;  // used by Explicit only
};

// MZ entry time for a vehicle arriving to an empty queue.
double first_vehicle_policy(const FirstVehiclePolicy& policy, double t0,
                            double v0, double cz_length,
                            const VehicleLimits& limits);

// Schedule the next arrival against the published queue (ordered by MZ entry
// time). `queue` holds every vehicle currently in the CZ or MZ. `min_gap` is
// the rear-end distance floor.
ScheduleEntry schedule_next(const std::vector<PublishedSchedule>& queue,
                            const ArrivalData& arrival,
                            const IntersectionGeometry& geom,
                            const VehicleLimits& limits, double min_gap,
                            const FirstVehiclePolicy& policy);

}  // namespace icav
