#include "fogplace/metrics.hpp"

namespace fogplace {

double resource_cost(const SolveReport& report) {
  if (!report.placement)
    throw NoPlacementError("report has no placement (status " + to_string(report.status) + ")");
  return report.cost.total;
}

DeployedCounts count_deployed(const Instance& inst, const Placement& p) {
  DeployedCounts counts;
  for (const auto& [ref, node_id] : p.assign) {
    auto k = inst.node_index(node_id);
    if (!k) throw ReferenceError("unknown node id '" + node_id + "'");
    if (inst.nodes[*k].tier == Tier::Cloud)
      ++counts.cloud;
    else
      ++counts.fog;
  }
  return counts;
}

double unprotected_data(const Instance& inst, const Placement& p) {
  double total = 0.0;
  for (const auto& app : inst.apps) {
    for (std::size_t j = 0; j < app.size(); ++j) {
      auto it = p.assign.find({app.id, j});
      if (it == p.assign.end())
        throw ReferenceError("module " + std::to_string(j) + " of app '" + app.id +
                             "' is unassigned");
      auto k = inst.node_index(it->second);
      if (!k) throw ReferenceError("unknown node id '" + it->second + "'");
      const auto& rating = inst.nodes[*k].security_rating;
      if (!rating) throw UnratedNodeError("node '" + it->second + "' has no security rating");
      if (numeric(*rating) < numeric(app.security_req))
        total += j == 0 ? app.input_traffic : app.inter_traffic[j - 1];
    }
  }
  return total;
}

MetricsReport compute_metrics(const Instance& inst, const SolveReport& report) {
  MetricsReport m;
  m.resource_cost = resource_cost(report);
  const auto counts = count_deployed(inst, *report.placement);
  m.modules_on_cloud = counts.cloud;
  m.modules_on_fog = counts.fog;
  m.unprotected_data = unprotected_data(inst, *report.placement);
  return m;
}

}  // namespace fogplace
