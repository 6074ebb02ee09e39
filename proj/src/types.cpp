#include "icav/types.hpp"

#include <sstream>

namespace icav {

Axis axis_of(Heading h) {
  switch (h) {
    case Heading::East:
    case Heading::West:
      return Axis::EastWest;
    case Heading::North:
    case Heading::South:
      return Axis::NorthSouth;
  }
  throw DomainError("invalid heading");
}

Heading opposite(Heading h) {
  switch (h) {
    case Heading::East:
      return Heading::West;
    case Heading::West:
      return Heading::East;
    case Heading::North:
      return Heading::South;
    case Heading::South:
      return Heading::North;
  }
  throw DomainError("invalid heading");
}

std::string to_string(Heading h) {
  switch (h) {
    case Heading::East:
      return "E";
    case Heading::West:
      return "W";
    case Heading::North:
      return "N";
    case Heading::South:
      return "S";
  }
  return "?";
}

std::string to_string(RelationLabel r) {
  switch (r) {
    case RelationLabel::SameDirectionDifferentLane:
      return "same_direction_different_lane";
    case RelationLabel::SameLane:
      return "same_lane";
    case RelationLabel::Conflicting:
      return "conflicting";
    case RelationLabel::OppositeNoConflict:
      return "opposite_no_conflict";
  }
  return "?";
}

void VehicleLimits::validate() const {
  std::ostringstream err;
  if (!(u_min < 0.0)) err << "u_min must be negative; ";
  if (!(u_max > 0.0)) err << "u_max must be positive; ";
  if (!(v_min >= 0.0)) err << "v_min must be nonnegative; ";
  if (!(v_max > v_min)) err << "v_max must exceed v_min; ";
  const std::string msg = err.str();
  if (!msg.empty()) throw ConfigError("invalid vehicle limits: " + msg);
}

namespace {

RelationLabel derive_relation(const LaneSpec& earlier, const LaneSpec& later) {
  if (earlier.id == later.id) return RelationLabel::SameLane;
  if (earlier.approach == later.approach)
    return RelationLabel::SameDirectionDifferentLane;
  if (axis_of(earlier.approach) == axis_of(later.approach))
    return RelationLabel::OppositeNoConflict;
  return RelationLabel::Conflicting;
}

}  // namespace

IntersectionGeometry::IntersectionGeometry(double cz_length, double mz_side,
                                           std::vector<LaneSpec> lanes,
                                           std::optional<double> mz_spacing)
    : cz_length_(cz_length),
      mz_side_(mz_side),
      mz_spacing_(mz_spacing.value_or(mz_side)),
      lanes_(std::move(lanes)) {
  if (!(cz_length_ > 0)) throw ConfigError("cz_length must be positive");
  if (!(mz_side_ > 0)) throw ConfigError("mz_side must be positive");
  if (!(mz_spacing_ > 0) || mz_spacing_ > mz_side_ + 1e-12)
    throw ConfigError("mz_spacing must lie in (0, mz_side]");
  if (lanes_.empty()) throw ConfigError("at least one lane is required");
  for (const auto& ln : lanes_) {
    if (ln.id.empty()) throw ConfigError("lane id must be nonempty");
    if (ln.destination != ln.approach)
      throw ConfigError("lane " + ln.id +
                        ": turning movements are not supported "
                        "(destination must equal approach)");
  }
  for (std::size_t i = 0; i < lanes_.size(); ++i)
    for (std::size_t j = i + 1; j < lanes_.size(); ++j)
      if (lanes_[i].id == lanes_[j].id)
        throw ConfigError("duplicate lane id " + lanes_[i].id);

  // The relation table is total over ordered lane pairs and symmetric in the
  // conflict class by construction (conflict depends on axes only).
  for (const auto& a : lanes_)
    for (const auto& b : lanes_)
      relation_table_[{a.id, b.id}] = derive_relation(a, b);
}

const LaneSpec& IntersectionGeometry::lane(const std::string& id) const {
  for (const auto& ln : lanes_)
    if (ln.id == id) return ln;
  throw ConfigError("unknown lane: " + id);
}

bool IntersectionGeometry::has_lane(const std::string& id) const {
  for (const auto& ln : lanes_)
    if (ln.id == id) return true;
  return false;
}

RelationLabel IntersectionGeometry::relation(
    const std::string& earlier_lane, const std::string& later_lane) const {
  auto it = relation_table_.find({earlier_lane, later_lane});
  if (it == relation_table_.end())
    throw ConfigError("unknown lane pair: " + earlier_lane + ", " +
                      later_lane);
  return it->second;
}

RelationLabel classify_relation(const IntersectionGeometry& geom,
                                const std::string& earlier_lane,
                                const std::string& later_lane) {
  return geom.relation(earlier_lane, later_lane);
}

}  // namespace icav
