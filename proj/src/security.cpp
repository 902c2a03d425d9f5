#include "fogplace/security.hpp"

#include <algorithm>
#include <cmath>

namespace fogplace {

std::array<double, 4> boundary_distances(Point position, const FarmGeometry& farm) {
  const auto [x, y] = position;
  if (!std::isfinite(x) || !std::isfinite(y) || x < 0.0 || y < 0.0 || x > farm.width ||
      y > farm.height) {
    throw GeometryError("position (" + std::to_string(x) + ", " + std::to_string(y) +
                        ") lies outside the farm rectangle");
  }
  return {x, farm.width - x, y, farm.height - y};
}

SecurityLevel rate_fog_node(const ResourceNode& node, const FarmGeometry& farm) {
  if (node.tier != Tier::Fog) throw GeometryError("node '" + node.id + "' is not a fog node");
  if (!node.position || !node.tx_range)
    throw GeometryError("fog node '" + node.id + "' needs a position and a transmission range");
  const auto d = boundary_distances(*node.position, farm);
  const double nearest = *std::min_element(d.begin(), d.end());
  return nearest < *node.tx_range ? SecurityLevel::Low : SecurityLevel::High;
}

Instance rate_infrastructure(const Instance& inst) {
  Instance rated = inst;
  for (auto& node : rated.nodes) {
    node.security_rating =
        node.tier == Tier::Cloud ? SecurityLevel::Medium : rate_fog_node(node, inst.farm);
  }
  return rated;
}

}  // namespace fogplace
