#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Core domain types shared by the scheduler, trajectory solver, feasibility
// analysis and the simulator. All quantities are SI (meters, seconds).
// Everything here is immutable after construction and safe to share across
// threads.

namespace icav {

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input domain for an evaluation (e.g. time outside a trajectory).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid scenario/geometry configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// No admissible schedule or trajectory exists for the requested data.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// An iterative procedure failed to converge or produced an inconsistent
// composition; carries diagnostics in the message.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Lanes and vehicle-pair relations

enum class Heading { East, West, North, South };

// Roads are axis-aligned; no turns, so a lane's destination heading equals
// its approach heading.
enum class Axis { EastWest, NorthSouth };

Axis axis_of(Heading h);
Heading opposite(Heading h);
std::string to_string(Heading h);

struct LaneSpec {
  std::string id;
  Heading approach;
  Heading destination;  // must equal approach (no turns supported)
};

// Relation of an earlier vehicle to a later one, as seen by the later one.
enum class RelationLabel {
  SameDirectionDifferentLane,  // same road, same heading, different lane
  SameLane,                    // directly ahead in the same lane
  Conflicting,                 // crossing paths inside the merging zone
  OppositeNoConflict,          // same road, opposite heading
};

std::string to_string(RelationLabel r);

// ---------------------------------------------------------------------------
// Limits and geometry

struct VehicleLimits {
  double u_min = -4.0;  // m/s^2, < 0
  double u_max = 2.0;   // m/s^2, > 0
  double v_min = 0.0;   // m/s, >= 0
  double v_max = 13.0;  // m/s, > v_min

  void validate() const;
};

// Intersection layout: a control zone of length `cz_length` on every
// approach feeding a square merging zone of side `mz_side`. Positions are
// distance-along-path: p = 0 at CZ entry, p = cz_length at MZ entry.
class IntersectionGeometry {
 public:
  IntersectionGeometry(double cz_length, double mz_side,
                       std::vector<LaneSpec> lanes,
                       std::optional<double> mz_spacing = std::nullopt);

  double cz_length() const { return cz_length_; }
  double mz_side() const { return mz_side_; }
  // Required separation (entry-to-entry distance) between conflicting
  // vehicles inside the MZ; defaults to the full MZ side.
  double mz_spacing() const { return mz_spacing_; }

  const std::vector<LaneSpec>& lanes() const { return lanes_; }
  const LaneSpec& lane(const std::string& id) const;
  bool has_lane(const std::string& id) const;

  RelationLabel relation(const std::string& earlier_lane,
                         const std::string& later_lane) const;

 private:
  double cz_length_;
  double mz_side_;
  double mz_spacing_;
  std::vector<LaneSpec> lanes_;
  std::map<std::pair<std::string, std::string>, RelationLabel> relation_table_;
};

// Relation of the vehicle in `earlier_lane` with respect to a vehicle in
// `later_lane`. Deterministic lookup; throws ConfigError for unknown lanes.
RelationLabel classify_relation(const IntersectionGeometry& geom,
                                const std::string& earlier_lane,
                                const std::string& later_lane);

}  // namespace icav
