#pragma once

#include <array>
#include <stdexcept>

#include "fogplace/model.hpp"

namespace fogplace {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Perpendicular distances from a point to the west, east, south and north
/// edges of the farm rectangle: (x, width - x, y, height - y).
std::array<double, 4> boundary_distances(Point position, const FarmGeometry& farm);

/// A fog node whose transmission range reaches past any farm boundary can be
/// sniffed from outside and rates Low; otherwise it rates High. The test is
/// strict, so a distance exactly equal to the range still rates High.
SecurityLevel rate_fog_node(const ResourceNode& node, const FarmGeometry& farm);

/// Copy of the instance with every node rated: fog nodes by geometry, cloud
/// nodes Medium.
Instance rate_infrastructure(const Instance& inst);

}  // namespace fogplace
