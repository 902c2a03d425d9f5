#include "fogplace/evaluate.hpp"

#include <optional>

namespace fogplace {

namespace {

using PartialAssignment = std::vector<std::optional<std::size_t>>;

std::string module_subject(const Application& app, std::size_t j) {
  return "app " + app.id + " module " + std::to_string(j);
}

void capacity_and_constraint_rows(const Instance& inst, const PartialAssignment& a,
                                  const Relaxations& relax,
                                  std::vector<FeasibilityViolation>& out) {
  const std::size_t n_nodes = inst.nodes.size();
  std::vector<double> proc(n_nodes, 0.0), mem(n_nodes, 0.0), stor(n_nodes, 0.0);

  std::size_t flat = 0;
  for (const auto& app : inst.apps) {
    for (std::size_t j = 0; j < app.size(); ++j, ++flat) {
      if (!a[flat]) continue;
      const std::size_t k = *a[flat];
      proc[k] += app.modules[j].proc_req;
      mem[k] += app.modules[j].mem_req;
      stor[k] += app.modules[j].stor_req;
    }
  }
  for (std::size_t k = 0; k < n_nodes; ++k) {
    const auto& node = inst.nodes[k];
    if (!within(proc[k], node.proc_capacity))
      out.push_back({2, "node " + node.id + " processing", proc[k] - node.proc_capacity});
    if (!within(mem[k], node.mem_capacity))
      out.push_back({3, "node " + node.id + " memory", mem[k] - node.mem_capacity});
    if (!within(stor[k], node.stor_capacity))
      out.push_back({4, "node " + node.id + " storage", stor[k] - node.stor_capacity});
  }

  flat = 0;
  for (const auto& app : inst.apps) {
    const std::size_t first = flat;
    flat += app.size();

    if (!relax.drop_qos) {
      bool complete = true;
      for (std::size_t m = first; m < flat; ++m) complete = complete && a[m].has_value();
      if (complete) {
        double delay = inst.nodes[*a[first]].sensor_delay + inst.nodes[*a[flat - 1]].user_delay;
        for (std::size_t j = 0; j < app.size(); ++j) {
          delay += app.modules[j].exec_delay;
          if (j > 0) delay += inst.links.delay[*a[first + j - 1]][*a[first + j]];
        }
        if (!within(delay, app.qos_threshold))
          out.push_back({7, "app " + app.id, delay - app.qos_threshold});
      }
    }

    if (!relax.drop_security) {
      const int required = numeric(app.security_req);
      for (std::size_t j = 0; j < app.size(); ++j) {
        if (!a[first + j]) continue;
        const auto& rating = inst.nodes[*a[first + j]].security_rating;
        const int offered = rating ? numeric(*rating) : 0;
        if (offered < required)
          out.push_back({8, module_subject(app, j), static_cast<double>(required - offered)});
      }
    }
  }
}

}  // namespace

std::vector<FeasibilityViolation> assignment_violations(const Instance& inst, const Assignment& a,
                                                        const Relaxations& relax) {
  if (a.size() != inst.module_count())
    throw std::invalid_argument("assignment length does not match module count");
  PartialAssignment partial(a.begin(), a.end());
  std::vector<FeasibilityViolation> out;
  capacity_and_constraint_rows(inst, partial, relax, out);
  return out;
}

std::vector<FeasibilityViolation> check_feasibility(const Instance& inst, const Placement& p,
                                                    const Relaxations& relax) {
  std::vector<FeasibilityViolation> out;
  PartialAssignment partial;
  partial.reserve(inst.module_count());

  for (const auto& app : inst.apps) {
    for (std::size_t j = 0; j < app.size(); ++j) {
      auto it = p.assign.find({app.id, j});
      std::optional<std::size_t> k;
      if (it != p.assign.end()) k = inst.node_index(it->second);
      if (!k) out.push_back({9, module_subject(app, j), 1.0});
      partial.push_back(k);
    }
  }
  for (const auto& [ref, node] : p.assign) {
    auto i = inst.app_index(ref.app);
    if (!i || ref.index >= inst.apps[*i].size())
      out.push_back({9, "unknown module " + ref.app + "/" + std::to_string(ref.index), 1.0});
  }

  std::size_t flat = 0;
  for (const auto& app : inst.apps) {
    for (std::size_t j = 0; j + 1 < app.size(); ++j) {
      auto e = p.edge_map.find({app.id, j});
      const auto& from = partial[flat + j];
      const auto& to = partial[flat + j + 1];
      const bool ok = e != p.edge_map.end() && from && to &&
                      e->second.first == inst.nodes[*from].id &&
                      e->second.second == inst.nodes[*to].id;
      if (!ok) out.push_back({14, "app " + app.id + " edge " + std::to_string(j), 1.0});
    }
    flat += app.size();
  }
  for (const auto& [ref, pair] : p.edge_map) {
    auto i = inst.app_index(ref.app);
    if (!i || ref.index + 1 >= inst.apps[*i].size())
      out.push_back({14, "unknown edge " + ref.app + "/" + std::to_string(ref.index), 1.0});
  }

  capacity_and_constraint_rows(inst, partial, relax, out);
  return out;
}

CostBreakdown assignment_cost(const Instance& inst, const Assignment& a) {
  if (a.size() != inst.module_count())
    throw std::invalid_argument("assignment length does not match module count");
  CostBreakdown c;
  std::size_t flat = 0;
  for (const auto& app : inst.apps) {
    const std::size_t first = flat;
    for (std::size_t j = 0; j < app.size(); ++j, ++flat) {
      const auto& node = inst.nodes[a[flat]];
      c.processing += app.modules[j].exec_delay * node.proc_cost;
      c.storage += app.modules[j].stor_req * node.stor_cost;
      if (j > 0) c.inter_comm += app.inter_traffic[j - 1] * inst.links.bw_cost[a[flat - 1]][a[flat]];
    }
    c.sensor_comm += app.input_traffic * inst.nodes[a[first]].sensor_bw_cost;
    c.user_comm += app.output_traffic * inst.nodes[a[flat - 1]].user_bw_cost;
  }
  c.total = c.processing + c.storage + c.sensor_comm + c.inter_comm + c.user_comm;
  return c;
}

Delay assignment_delay(const Instance& inst, const Assignment& a, std::size_t app_index) {
  std::size_t first = 0;
  for (std::size_t i = 0; i < app_index; ++i) first += inst.apps.at(i).size();
  const auto& app = inst.apps.at(app_index);
  Delay d;
  d.comm = inst.nodes[a.at(first)].sensor_delay + inst.nodes[a.at(first + app.size() - 1)].user_delay;
  for (std::size_t j = 0; j < app.size(); ++j) {
    d.exec += app.modules[j].exec_delay;
    if (j > 0) d.comm += inst.links.delay[a[first + j - 1]][a[first + j]];
  }
  return d;
}

CostBreakdown eval_cost(const Instance& inst, const Placement& p) {
  if (!placement_is_consistent(inst, p)) throw InconsistentPlacement("placement is not consistent");
  return assignment_cost(inst, assignment_from_placement(inst, p));
}

Delay eval_delay(const Instance& inst, const Placement& p, const Application& app) {
  auto i = inst.app_index(app.id);
  if (!i) throw ReferenceError("unknown app id '" + app.id + "'");
  const auto& own = inst.apps[*i];
  std::vector<std::size_t> hosts;
  for (std::size_t j = 0; j < own.size(); ++j) {
    auto it = p.assign.find({own.id, j});
    if (it == p.assign.end())
      throw InconsistentPlacement("app '" + own.id + "' is not fully placed");
    auto k = inst.node_index(it->second);
    if (!k) throw ReferenceError("unknown node id '" + it->second + "'");
    hosts.push_back(*k);
  }

  Delay d;
  d.comm = inst.nodes[hosts.front()].sensor_delay + inst.nodes[hosts.back()].user_delay;
  for (std::size_t j = 0; j < own.size(); ++j) {
    d.exec += own.modules[j].exec_delay;
    if (j == 0) continue;
    auto e = p.edge_map.find({own.id, j - 1});
    if (e == p.edge_map.end() || e->second.first != inst.nodes[hosts[j - 1]].id ||
        e->second.second != inst.nodes[hosts[j]].id)
      throw InconsistentPlacement("edge " + std::to_string(j - 1) + " of app '" + own.id +
                                  "' does not match its endpoints");
    d.comm += inst.links.delay[hosts[j - 1]][hosts[j]];
  }
  return d;
}

}  // namespace fogplace
