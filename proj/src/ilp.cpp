#include "fogplace/ilp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

namespace fogplace {

std::string Relaxations::name() const {
  if (drop_qos && drop_security) return "both";
  if (drop_qos) return "drop_qos";
  if (drop_security) return "drop_security";
  return "none";
}

std::optional<Relaxations> parse_relaxations(const std::string& name) {
  if (name == "none") return Relaxations::none();
  if (name == "drop_qos") return Relaxations::qos_only();
  if (name == "drop_security") return Relaxations::security_only();
  if (name == "both" || name == "noqos") return Relaxations::both();
  return std::nullopt;
}

std::size_t IlpModel::x_index(std::size_t app, std::size_t module, std::size_t node) const {
  return x_offset.at(app) + module * node_count + node;
}

std::size_t IlpModel::z_index(std::size_t app, std::size_t edge, std::size_t u,
                              std::size_t v) const {
  return z_offset.at(app) + (edge * node_count + u) * node_count + v;
}

namespace {

std::string n1(std::size_t i) { return std::to_string(i + 1); }

/// Accumulates coefficients per variable; repeated variables are merged.
class RowBuilder {
 public:
  void add(std::size_t var, double coef) {
    if (coef != 0.0) terms_[var] += coef;
  }
  Constraint finish(std::string name, int equation, Sense sense, double rhs) {
    Constraint row{std::move(name), equation, {}, sense, rhs};
    for (const auto& [var, coef] : terms_)
      if (coef != 0.0) row.terms.push_back({var, coef});
    terms_.clear();
    return row;
  }

 private:
  std::map<std::size_t, double> terms_;
};

}  // namespace

IlpModel build_model(const Instance& inst, const Relaxations& relax) {
  const std::size_t n_nodes = inst.nodes.size();
  if (!relax.drop_security) {
    for (const auto& node : inst.nodes)
      if (!node.security_rating)
        throw UnratedNodeError("node '" + node.id + "' has no security rating");
  }

  IlpModel model;
  model.node_count = n_nodes;
  model.relax = relax;

  for (std::size_t i = 0; i < inst.apps.size(); ++i) {
    model.x_offset.push_back(model.variables.size());
    for (std::size_t j = 0; j < inst.apps[i].size(); ++j)
      for (std::size_t k = 0; k < n_nodes; ++k)
        model.variables.push_back(
            {Variable::Kind::Assign, i, j, k, 0, "x_" + n1(i) + "_" + n1(j) + "_" + n1(k)});
  }
  for (std::size_t i = 0; i < inst.apps.size(); ++i) {
    model.z_offset.push_back(model.variables.size());
    for (std::size_t j = 0; j + 1 < inst.apps[i].size(); ++j)
      for (std::size_t u = 0; u < n_nodes; ++u)
        for (std::size_t v = 0; v < n_nodes; ++v)
          model.variables.push_back({Variable::Kind::Edge, i, j, u, v,
                                     "z_" + n1(i) + "_" + n1(j) + "_" + n1(u) + "_" + n1(v)});
  }

  // Objective: processing + storage + sensor ingress + inter-module + user egress.
  model.objective.assign(model.variables.size(), 0.0);
  for (std::size_t i = 0; i < inst.apps.size(); ++i) {
    const auto& app = inst.apps[i];
    const std::size_t last = app.size() - 1;
    for (std::size_t j = 0; j < app.size(); ++j) {
      for (std::size_t k = 0; k < n_nodes; ++k) {
        const auto& node = inst.nodes[k];
        double& c = model.objective[model.x_index(i, j, k)];
        c += app.modules[j].exec_delay * node.proc_cost;
        c += app.modules[j].stor_req * node.stor_cost;
        if (j == 0) c += app.input_traffic * node.sensor_bw_cost;
        if (j == last) c += app.output_traffic * node.user_bw_cost;
      }
    }
    for (std::size_t j = 0; j < last; ++j)
      for (std::size_t u = 0; u < n_nodes; ++u)
        for (std::size_t v = 0; v < n_nodes; ++v)
          model.objective[model.z_index(i, j, u, v)] =
              app.inter_traffic[j] * inst.links.bw_cost[u][v];
  }

  RowBuilder row;
  auto& rows = model.constraints;

  // Capacities, one row per node and resource.
  struct Resource {
    int equation;
    double AppModule::*req;
    double ResourceNode::*cap;
  };
  constexpr Resource resources[] = {{2, &AppModule::proc_req, &ResourceNode::proc_capacity},
                                    {3, &AppModule::mem_req, &ResourceNode::mem_capacity},
                                    {4, &AppModule::stor_req, &ResourceNode::stor_capacity}};
  for (const auto& res : resources) {
    for (std::size_t k = 0; k < n_nodes; ++k) {
      for (std::size_t i = 0; i < inst.apps.size(); ++i)
        for (std::size_t j = 0; j < inst.apps[i].size(); ++j)
          row.add(model.x_index(i, j, k), inst.apps[i].modules[j].*res.req);
      rows.push_back(row.finish("eq" + std::to_string(res.equation) + "_node" + n1(k),
                                res.equation, Sense::LessEqual, inst.nodes[k].*res.cap));
    }
  }

  // End-to-end delay per application.
  if (!relax.drop_qos) {
    for (std::size_t i = 0; i < inst.apps.size(); ++i) {
      const auto& app = inst.apps[i];
      const std::size_t last = app.size() - 1;
      for (std::size_t k = 0; k < n_nodes; ++k) {
        row.add(model.x_index(i, 0, k), inst.nodes[k].sensor_delay);
        row.add(model.x_index(i, last, k), inst.nodes[k].user_delay);
        for (std::size_t j = 0; j < app.size(); ++j)
          row.add(model.x_index(i, j, k), app.modules[j].exec_delay);
      }
      for (std::size_t j = 0; j < last; ++j)
        for (std::size_t u = 0; u < n_nodes; ++u)
          for (std::size_t v = 0; v < n_nodes; ++v)
            row.add(model.z_index(i, j, u, v), inst.links.delay[u][v]);
      rows.push_back(row.finish("eq7_app" + n1(i), 7, Sense::LessEqual, app.qos_threshold));
    }
  }

  // Hosting node rating must meet the application's requirement.
  if (!relax.drop_security) {
    for (std::size_t i = 0; i < inst.apps.size(); ++i) {
      for (std::size_t j = 0; j < inst.apps[i].size(); ++j) {
        for (std::size_t k = 0; k < n_nodes; ++k)
          row.add(model.x_index(i, j, k), numeric(*inst.nodes[k].security_rating));
        rows.push_back(row.finish("eq8_app" + n1(i) + "_mod" + n1(j), 8, Sense::GreaterEqual,
                                  numeric(inst.apps[i].security_req)));
      }
    }
  }

  for (std::size_t i = 0; i < inst.apps.size(); ++i) {
    for (std::size_t j = 0; j < inst.apps[i].size(); ++j) {
      for (std::size_t k = 0; k < n_nodes; ++k) row.add(model.x_index(i, j, k), 1.0);
      rows.push_back(row.finish("eq9_app" + n1(i) + "_mod" + n1(j), 9, Sense::Equal, 1.0));
    }
  }

  // z_ijuv = x_iju * x_i(j+1)v, linearized.
  for (std::size_t i = 0; i < inst.apps.size(); ++i) {
    for (std::size_t j = 0; j + 1 < inst.apps[i].size(); ++j) {
      for (std::size_t u = 0; u < n_nodes; ++u) {
        for (std::size_t v = 0; v < n_nodes; ++v) {
          const std::size_t z = model.z_index(i, j, u, v);
          const std::size_t xu = model.x_index(i, j, u);
          const std::size_t xv = model.x_index(i, j + 1, v);
          const std::string suffix =
              "_app" + n1(i) + "_edge" + n1(j) + "_u" + n1(u) + "_v" + n1(v);
          row.add(z, 1.0);
          row.add(xu, -1.0);
          rows.push_back(row.finish("eq11" + suffix, 11, Sense::LessEqual, 0.0));
          row.add(z, 1.0);
          row.add(xv, -1.0);
          rows.push_back(row.finish("eq12" + suffix, 12, Sense::LessEqual, 0.0));
          row.add(z, 1.0);
          row.add(xu, -1.0);
          row.add(xv, -1.0);
          rows.push_back(row.finish("eq13" + suffix, 13, Sense::GreaterEqual, -1.0));
        }
      }
    }
  }

  for (std::size_t i = 0; i < inst.apps.size(); ++i) {
    for (std::size_t j = 0; j + 1 < inst.apps[i].size(); ++j) {
      for (std::size_t u = 0; u < n_nodes; ++u)
        for (std::size_t v = 0; v < n_nodes; ++v) row.add(model.z_index(i, j, u, v), 1.0);
      rows.push_back(row.finish("eq14_app" + n1(i) + "_edge" + n1(j), 14, Sense::Equal, 1.0));
    }
  }
  return model;
}

std::vector<double> encode_placement(const IlpModel& model, const Instance& inst,
                                     const Placement& p) {
  std::vector<double> values(model.variables.size(), 0.0);
  auto node = [&](const std::string& id) {
    auto k = inst.node_index(id);
    if (!k) throw ReferenceError("unknown node id '" + id + "'");
    return *k;
  };
  auto app = [&](const std::string& id) {
    auto i = inst.app_index(id);
    if (!i) throw ReferenceError("unknown app id '" + id + "'");
    return *i;
  };
  for (const auto& [ref, k] : p.assign) values[model.x_index(app(ref.app), ref.index, node(k))] = 1.0;
  for (const auto& [ref, uv] : p.edge_map)
    values[model.z_index(app(ref.app), ref.index, node(uv.first), node(uv.second))] = 1.0;
  return values;
}

double objective_value(const IlpModel& model, std::span<const double> values) {
  double total = 0.0;
  for (std::size_t v = 0; v < model.objective.size(); ++v) total += model.objective[v] * values[v];
  return total;
}

double row_activity(const Constraint& row, std::span<const double> values) {
  double lhs = 0.0;
  for (const auto& t : row.terms) lhs += t.coef * values[t.var];
  return lhs;
}

bool row_satisfied(const Constraint& row, std::span<const double> values, double tolerance) {
  const double lhs = row_activity(row, values);
  const double tol = tolerance * std::max(1.0, std::abs(row.rhs));
  switch (row.sense) {
    case Sense::LessEqual: return lhs <= row.rhs + tol;
    case Sense::GreaterEqual: return lhs >= row.rhs - tol;
    case Sense::Equal: return std::abs(lhs - row.rhs) <= tol;
  }
  return false;
}

namespace {

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

void write_expression(std::string& out, const IlpModel& model, const std::vector<Term>& terms) {
  if (terms.empty()) {
    // LP readers need at least one term.
    out += model.variables.empty() ? " 0" : " 0 " + model.variables.front().name;
    return;
  }
  for (std::size_t t = 0; t < terms.size(); ++t) {
    if (t > 0 && t % 8 == 0) out += "\n   ";
    const double c = terms[t].coef;
    if (t == 0)
      out += c < 0 ? " -" : " ";
    else
      out += c < 0 ? " - " : " + ";
    out += format_number(std::abs(c)) + " " + model.variables[terms[t].var].name;
  }
}

}  // namespace

std::string export_lp(const IlpModel& model) {
  std::string out;
  out += "\\ fogplace placement model, relaxations: " + model.relax.name() + "\n";
  out += "Minimize\n obj:";
  std::vector<Term> objective;
  for (std::size_t v = 0; v < model.objective.size(); ++v)
    if (model.objective[v] != 0.0) objective.push_back({v, model.objective[v]});
  write_expression(out, model, objective);
  out += "\nSubject To\n";
  for (const auto& row : model.constraints) {
    out += " " + row.name + ":";
    write_expression(out, model, row.terms);
    switch (row.sense) {
      case Sense::LessEqual: out += " <= "; break;
      case Sense::GreaterEqual: out += " >= "; break;
      case Sense::Equal: out += " = "; break;
    }
    out += format_number(row.rhs) + "\n";
  }
  out += "Binaries\n";
  for (const auto& var : model.variables) out += " " + var.name + "\n";
  out += "End\n";
  return out;
}

}  // namespace fogplace
