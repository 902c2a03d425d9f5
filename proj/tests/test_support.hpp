#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>

#include "fogplace/model.hpp"
#include "fogplace/security.hpp"

namespace fogplace::testing {

inline ResourceNode cloud_node(std::string id = "cloud") {
  ResourceNode n;
  n.id = std::move(id);
  n.tier = Tier::Cloud;
  n.proc_capacity = n.mem_capacity = n.stor_capacity = 1e6;
  n.proc_cost = 0.03;
  n.stor_cost = 0.001;
  n.sensor_bw_cost = n.user_bw_cost = 3.0;
  n.sensor_delay = n.user_delay = 0.5;
  return n;
}

inline ResourceNode fog_node(std::string id, Point pos, double range = 300.0) {
  ResourceNode n;
  n.id = std::move(id);
  n.tier = Tier::Fog;
  n.proc_capacity = 50.0;
  n.mem_capacity = 1.0;
  n.stor_capacity = 20.0;
  n.proc_cost = 0.02;
  n.stor_cost = 0.02;
  n.sensor_bw_cost = n.user_bw_cost = 5.0;
  n.sensor_delay = n.user_delay = 0.01;
  n.position = pos;
  n.tx_range = range;
  return n;
}

/// Cloud/fog link tables with the reference delays and costs.
inline LinkTable reference_links(const std::vector<ResourceNode>& nodes) {
  LinkTable links;
  const std::size_t n = nodes.size();
  links.delay.assign(n, std::vector<double>(n, 0.0));
  links.bw_cost.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) {
      if (u == v) continue;
      const bool cloud = nodes[u].tier == Tier::Cloud || nodes[v].tier == Tier::Cloud;
      links.delay[u][v] = cloud ? 0.5 : 0.01;
      links.bw_cost[u][v] = cloud ? 3.0 : 5.0;
    }
  return links;
}

inline Application chain_app(std::string id, std::size_t n, SecurityLevel w = SecurityLevel::Low,
                             double qos = 10.0) {
  Application app;
  app.id = std::move(id);
  for (std::size_t j = 0; j < n; ++j) app.modules.push_back({1.0, 0.02, 0.5, 0.1});
  app.input_traffic = 0.002;
  app.inter_traffic.assign(n - 1, 0.3);
  app.output_traffic = 0.001;
  app.qos_threshold = qos;
  app.security_req = w;
  return app;
}

/// Cloud, an interior fog node (High) and a boundary fog node (Low) in a
/// 1000 x 1000 farm, rated, with the given apps.
inline Instance three_node_instance(std::vector<Application> apps) {
  Instance inst;
  inst.farm = {1000.0, 1000.0};
  inst.nodes = {cloud_node(), fog_node("fogA", {500.0, 500.0}), fog_node("fogB", {900.0, 500.0})};
  inst.links = reference_links(inst.nodes);
  inst.apps = std::move(apps);
  return rate_infrastructure(inst);
}

/// Small random instance for oracle comparisons: random costs, delays,
/// capacities that sometimes bind, random QoS and security requirements.
inline Instance random_instance(std::uint64_t seed, std::size_t n_apps = 2,
                                std::size_t modules = 3, std::size_t n_fog = 2) {
  std::mt19937_64 rng(seed);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

  Instance inst;
  inst.farm = {100.0, 100.0};
  inst.nodes.push_back(cloud_node());
  inst.nodes[0].proc_cost = uni(0.01, 0.05);
  inst.nodes[0].stor_cost = uni(0.0005, 0.005);
  inst.nodes[0].sensor_bw_cost = uni(1.0, 4.0);
  inst.nodes[0].user_bw_cost = uni(1.0, 4.0);
  inst.nodes[0].sensor_delay = uni(0.1, 0.6);
  inst.nodes[0].user_delay = uni(0.1, 0.6);
  for (std::size_t f = 0; f < n_fog; ++f) {
    auto node = fog_node("fog" + std::to_string(f + 1), {uni(0.0, 100.0), uni(0.0, 100.0)},
                         uni(5.0, 40.0));
    node.proc_capacity = uni(2.0, 6.0);
    node.mem_capacity = uni(0.04, 0.12);
    node.stor_capacity = uni(1.0, 3.0);
    node.proc_cost = uni(0.01, 0.05);
    node.stor_cost = uni(0.005, 0.03);
    node.sensor_bw_cost = uni(2.0, 6.0);
    node.user_bw_cost = uni(2.0, 6.0);
    node.sensor_delay = uni(0.0, 0.05);
    node.user_delay = uni(0.0, 0.05);
    inst.nodes.push_back(node);
  }
  const std::size_t n = inst.nodes.size();
  inst.links.delay.assign(n, std::vector<double>(n, 0.0));
  inst.links.bw_cost.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (u != v) {
        inst.links.delay[u][v] = uni(0.01, 0.6);
        inst.links.bw_cost[u][v] = uni(1.0, 6.0);
      }

  for (std::size_t i = 0; i < n_apps; ++i) {
    Application app;
    app.id = "a" + std::to_string(i + 1);
    for (std::size_t j = 0; j < modules; ++j) {
      AppModule m;
      m.proc_req = uni(0.1, 2.1);
      m.mem_req = uni(0.01, 0.04);
      m.stor_req = uni(0.256, 0.768);
      m.exec_delay = uni(0.005, 0.2);
      app.modules.push_back(m);
    }
    app.input_traffic = uni(0.001, 0.004);
    for (std::size_t j = 0; j + 1 < modules; ++j) app.inter_traffic.push_back(uni(0.1, 1.0));
    app.output_traffic = uni(0.0005, 0.001);
    app.qos_threshold = uni(0.3, 2.5);
    app.security_req = static_cast<SecurityLevel>(1 + rng() % 3);
    inst.apps.push_back(app);
  }
  return rate_infrastructure(inst);
}


/// Independent reference evaluation written directly from the model
/// definition, used to check the library's evaluators and solvers.
namespace oracle {

inline double cost(const Instance& inst, const std::vector<std::size_t>& a) {
  double total = 0.0;
  std::size_t flat = 0;
  for (const auto& app : inst.apps) {
    for (std::size_t j = 0; j < app.modules.size(); ++j) {
      const auto& node = inst.nodes[a[flat + j]];
      total += app.modules[j].exec_delay * node.proc_cost;
      total += app.modules[j].stor_req * node.stor_cost;
      if (j == 0) total += app.input_traffic * node.sensor_bw_cost;
      if (j + 1 == app.modules.size()) total += app.output_traffic * node.user_bw_cost;
      if (j > 0) total += app.inter_traffic[j - 1] * inst.links.bw_cost[a[flat + j - 1]][a[flat + j]];
    }
    flat += app.modules.size();
  }
  return total;
}

inline bool feasible(const Instance& inst, const std::vector<std::size_t>& a, bool qos,
                     bool security) {
  const double eps = 1e-9;
  std::vector<double> proc(inst.nodes.size()), mem(inst.nodes.size()), stor(inst.nodes.size());
  std::size_t flat = 0;
  for (const auto& app : inst.apps) {
    double delay = 0.0;
    for (std::size_t j = 0; j < app.modules.size(); ++j) {
      const std::size_t k = a[flat + j];
      const auto& node = inst.nodes[k];
      proc[k] += app.modules[j].proc_req;
      mem[k] += app.modules[j].mem_req;
      stor[k] += app.modules[j].stor_req;
      delay += app.modules[j].exec_delay;
      if (j == 0) delay += node.sensor_delay;
      if (j + 1 == app.modules.size()) delay += node.user_delay;
      if (j > 0) delay += inst.links.delay[a[flat + j - 1]][k];
      if (security && static_cast<int>(*node.security_rating) < static_cast<int>(app.security_req))
        return false;
    }
    if (qos && delay > app.qos_threshold + eps * std::max(1.0, app.qos_threshold)) return false;
    flat += app.modules.size();
  }
  for (std::size_t k = 0; k < inst.nodes.size(); ++k) {
    const auto& n = inst.nodes[k];
    if (proc[k] > n.proc_capacity + eps * std::max(1.0, n.proc_capacity)) return false;
    if (mem[k] > n.mem_capacity + eps * std::max(1.0, n.mem_capacity)) return false;
    if (stor[k] > n.stor_capacity + eps * std::max(1.0, n.stor_capacity)) return false;
  }
  return true;
}

struct Optimum {
  std::optional<double> cost;
  std::vector<std::size_t> argmin;
};

/// Exhaustive minimum over every assignment.
inline Optimum minimum(const Instance& inst, bool qos, bool security) {
  std::size_t modules = 0;
  for (const auto& app : inst.apps) modules += app.modules.size();
  const std::size_t n = inst.nodes.size();
  std::vector<std::size_t> a(modules, 0);
  Optimum best;
  while (true) {
    if (feasible(inst, a, qos, security)) {
      const double c = cost(inst, a);
      if (!best.cost || c < *best.cost) {
        best.cost = c;
        best.argmin = a;
      }
    }
    std::size_t pos = a.size();
    while (pos > 0 && ++a[pos - 1] == n) a[--pos] = 0;
    if (pos == 0) break;
  }
  return best;
}

}  // namespace oracle

}  // namespace fogplace::testing
