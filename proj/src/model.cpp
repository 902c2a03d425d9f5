#include "fogplace/model.hpp"

#include <cmath>
#include <set>

namespace fogplace {

std::string to_string(SecurityLevel level) {
  switch (level) {
    case SecurityLevel::Low: return "low";
    case SecurityLevel::Medium: return "medium";
    case SecurityLevel::High: return "high";
  }
  return "?";
}

std::optional<SecurityLevel> parse_security_level(const std::string& text) {
  if (text == "low") return SecurityLevel::Low;
  if (text == "medium") return SecurityLevel::Medium;
  if (text == "high") return SecurityLevel::High;
  return std::nullopt;
}

std::string to_string(Tier tier) { return tier == Tier::Cloud ? "cloud" : "fog"; }

std::optional<Tier> parse_tier(const std::string& text) {
  if (text == "cloud") return Tier::Cloud;
  if (text == "fog") return Tier::Fog;
  return std::nullopt;
}

std::optional<std::size_t> Instance::node_index(const std::string& id) const {
  for (std::size_t k = 0; k < nodes.size(); ++k)
    if (nodes[k].id == id) return k;
  return std::nullopt;
}

std::optional<std::size_t> Instance::app_index(const std::string& id) const {
  for (std::size_t i = 0; i < apps.size(); ++i)
    if (apps[i].id == id) return i;
  return std::nullopt;
}

std::size_t Instance::module_count() const {
  std::size_t total = 0;
  for (const auto& app : apps) total += app.size();
  return total;
}

namespace {

class Checker {
 public:
  explicit Checker(ValidationReport& out) : out_(out) {}

  void nonneg(const std::string& path, double value) {
    if (!std::isfinite(value))
      add(path, "must be finite");
    else if (value < 0.0)
      add(path, "must be nonnegative");
  }

  void positive(const std::string& path, double value) {
    if (!std::isfinite(value) || value <= 0.0) add(path, "must be positive and finite");
  }

  void add(const std::string& path, std::string message) {
    out_.push_back({path, std::move(message)});
  }

 private:
  ValidationReport& out_;
};

void check_table(Checker& c, const std::string& name,
                 const std::vector<std::vector<double>>& table, std::size_t n) {
  if (table.size() != n) {
    c.add(name, "must have one row per node (" + std::to_string(n) + ")");
    return;
  }
  for (std::size_t u = 0; u < n; ++u) {
    const std::string row = name + "[" + std::to_string(u) + "]";
    if (table[u].size() != n) {
      c.add(row, "must have one entry per node (" + std::to_string(n) + ")");
      continue;
    }
    for (std::size_t v = 0; v < n; ++v) {
      const std::string path = row + "[" + std::to_string(v) + "]";
      c.nonneg(path, table[u][v]);
      if (u == v && table[u][v] != 0.0) c.add(path, "self-loop entry must be 0");
    }
  }
}

}  // namespace

ValidationReport validate_instance(const Instance& inst) {
  ValidationReport report;
  Checker c(report);

  const bool farm_ok = std::isfinite(inst.farm.width) && inst.farm.width > 0.0 &&
                       std::isfinite(inst.farm.height) && inst.farm.height > 0.0;
  if (!farm_ok) c.add("farm", "width and height must be positive");

  if (inst.nodes.empty()) c.add("nodes", "at least one resource node is required");

  std::set<std::string> node_ids;
  for (std::size_t k = 0; k < inst.nodes.size(); ++k) {
    const auto& node = inst.nodes[k];
    const std::string path = "nodes[" + std::to_string(k) + "]";
    if (node.id.empty()) c.add(path + ".id", "must not be empty");
    if (!node_ids.insert(node.id).second) c.add(path + ".id", "duplicate node id '" + node.id + "'");
    c.nonneg(path + ".proc_capacity", node.proc_capacity);
    c.nonneg(path + ".mem_capacity", node.mem_capacity);
    c.nonneg(path + ".stor_capacity", node.stor_capacity);
    c.nonneg(path + ".proc_cost", node.proc_cost);
    c.nonneg(path + ".stor_cost", node.stor_cost);
    c.nonneg(path + ".sensor_bw_cost", node.sensor_bw_cost);
    c.nonneg(path + ".user_bw_cost", node.user_bw_cost);
    c.nonneg(path + ".sensor_delay", node.sensor_delay);
    c.nonneg(path + ".user_delay", node.user_delay);

    if (node.tier == Tier::Fog) {
      if (!node.position) {
        c.add(path + ".position", "fog node requires a position");
      } else {
        const auto [x, y] = *node.position;
        if (!std::isfinite(x) || !std::isfinite(y)) {
          c.add(path + ".position", "must be finite");
        } else if (farm_ok && (x < 0.0 || y < 0.0 || x > inst.farm.width || y > inst.farm.height)) {
          c.add(path + ".position", "fog node outside farm rectangle");
        }
      }
      if (!node.tx_range)
        c.add(path + ".tx_range", "fog node requires a transmission range");
      else
        c.positive(path + ".tx_range", *node.tx_range);
    } else if (node.tx_range) {
      c.nonneg(path + ".tx_range", *node.tx_range);
    }
  }

  check_table(c, "links.delay", inst.links.delay, inst.nodes.size());
  check_table(c, "links.bw_cost", inst.links.bw_cost, inst.nodes.size());

  std::set<std::string> app_ids;
  for (std::size_t i = 0; i < inst.apps.size(); ++i) {
    const auto& app = inst.apps[i];
    const std::string path = "apps[" + std::to_string(i) + "]";
    if (app.id.empty()) c.add(path + ".id", "must not be empty");
    if (!app_ids.insert(app.id).second) c.add(path + ".id", "duplicate app id '" + app.id + "'");
    if (app.modules.empty()) c.add(path + ".modules", "must contain at least one module");
    for (std::size_t j = 0; j < app.modules.size(); ++j) {
      const auto& m = app.modules[j];
      const std::string mp = path + ".modules[" + std::to_string(j) + "]";
      c.nonneg(mp + ".proc_req", m.proc_req);
      c.nonneg(mp + ".mem_req", m.mem_req);
      c.nonneg(mp + ".stor_req", m.stor_req);
      c.nonneg(mp + ".exec_delay", m.exec_delay);
    }
    if (!app.modules.empty() && app.inter_traffic.size() != app.modules.size() - 1) {
      c.add(path + ".inter_traffic",
            "edge count must be n-1 = " + std::to_string(app.modules.size() - 1));
    }
    for (std::size_t j = 0; j < app.inter_traffic.size(); ++j)
      c.nonneg(path + ".inter_traffic[" + std::to_string(j) + "]", app.inter_traffic[j]);
    c.nonneg(path + ".input_traffic", app.input_traffic);
    c.nonneg(path + ".output_traffic", app.output_traffic);
    c.positive(path + ".qos_threshold", app.qos_threshold);
  }
  return report;
}

namespace {

std::size_t require_node(const Instance& inst, const std::string& id) {
  auto k = inst.node_index(id);
  if (!k) throw ReferenceError("unknown node id '" + id + "'");
  return *k;
}

const Application& require_module(const Instance& inst, const ModuleRef& ref) {
  auto i = inst.app_index(ref.app);
  if (!i) throw ReferenceError("unknown app id '" + ref.app + "'");
  const auto& app = inst.apps[*i];
  if (ref.index >= app.size())
    throw ReferenceError("app '" + ref.app + "' has no module " + std::to_string(ref.index));
  return app;
}

}  // namespace

bool placement_is_consistent(const Instance& inst, const Placement& p) {
  for (const auto& [ref, node] : p.assign) {
    require_module(inst, ref);
    require_node(inst, node);
  }
  for (const auto& [ref, pair] : p.edge_map) {
    const auto& app = require_module(inst, ref);
    if (ref.index + 1 >= app.size())
      throw ReferenceError("app '" + ref.app + "' has no edge " + std::to_string(ref.index));
    require_node(inst, pair.first);
    require_node(inst, pair.second);
  }

  if (p.assign.size() != inst.module_count()) return false;
  std::size_t edges = 0;
  for (const auto& app : inst.apps) {
    for (std::size_t j = 0; j + 1 < app.size(); ++j) {
      ++edges;
      auto e = p.edge_map.find({app.id, j});
      if (e == p.edge_map.end()) return false;
      auto from = p.assign.find({app.id, j});
      auto to = p.assign.find({app.id, j + 1});
      if (from == p.assign.end() || to == p.assign.end()) return false;
      if (e->second != std::make_pair(from->second, to->second)) return false;
    }
  }
  return p.edge_map.size() == edges;
}

Placement placement_from_assignment(const Instance& inst, const Assignment& a) {
  if (a.size() != inst.module_count())
    throw std::invalid_argument("assignment length does not match module count");
  Placement p;
  std::size_t flat = 0;
  for (const auto& app : inst.apps) {
    for (std::size_t j = 0; j < app.size(); ++j, ++flat) {
      if (a[flat] >= inst.nodes.size()) throw ReferenceError("node index out of range");
      p.assign[{app.id, j}] = inst.nodes[a[flat]].id;
      if (j > 0) {
        p.edge_map[{app.id, j - 1}] = {inst.nodes[a[flat - 1]].id, inst.nodes[a[flat]].id};
      }
    }
  }
  return p;
}

Assignment assignment_from_placement(const Instance& inst, const Placement& p) {
  Assignment a;
  a.reserve(inst.module_count());
  for (const auto& app : inst.apps) {
    for (std::size_t j = 0; j < app.size(); ++j) {
      auto it = p.assign.find({app.id, j});
      if (it == p.assign.end())
        throw std::invalid_argument("module " + std::to_string(j) + " of app '" + app.id +
                                    "' is unassigned");
      a.push_back(require_node(inst, it->second));
    }
  }
  return a;
}

}  // namespace fogplace
