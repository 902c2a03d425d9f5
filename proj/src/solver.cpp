#include "fogplace/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "fogplace/instance_io.hpp"

namespace fogplace {

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::TimeLimit: return "time_limit";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::HeuristicFailure: return "heuristic_failure";
  }
  return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Costs closer than this (relative) are treated as ties.
bool strictly_better(double candidate, double incumbent) {
  return candidate < incumbent - 1e-12 * std::max(1.0, std::abs(incumbent));
}

void require_rated(const Instance& inst, const Relaxations& relax) {
  if (relax.drop_security) return;
  for (const auto& node : inst.nodes)
    if (!node.security_rating)
      throw UnratedNodeError("node '" + node.id + "' has no security rating");
}

SolveReport make_report(const Instance& inst, const Relaxations& relax, std::string solver,
                        SolveStatus status, const std::optional<Assignment>& best,
                        const SearchStats& stats) {
  SolveReport r;
  r.solver = std::move(solver);
  r.status = status;
  r.stats = stats;
  r.relax = relax;
  if (best) {
    r.placement = placement_from_assignment(inst, *best);
    r.cost = assignment_cost(inst, *best);
    for (std::size_t i = 0; i < inst.apps.size(); ++i)
      r.per_app_delay[inst.apps[i].id] = assignment_delay(inst, *best, i);
  }
  return r;
}

enum class Rejection { None, Security, Capacity, Qos };

/// Incremental state of a partial assignment in (app, chain) module order.
class SearchState {
 public:
  SearchState(const Instance& inst, const Relaxations& relax) : inst_(inst), relax_(relax) {
    const std::size_t n_nodes = inst.nodes.size();
    for (std::size_t i = 0; i < inst.apps.size(); ++i) {
      const auto& app = inst.apps[i];
      double exec = 0.0;
      for (const auto& m : app.modules) exec += m.exec_delay;
      for (std::size_t j = 0; j < app.size(); ++j) {
        Slot s;
        s.app = i;
        s.chain = j;
        s.first = j == 0;
        s.last = j + 1 == app.size();
        s.module = &app.modules[j];
        s.inbound = j == 0 ? 0.0 : app.inter_traffic[j - 1];
        s.app_exec = exec;
        slots_.push_back(s);
      }
    }
    standalone_.assign(slots_.size(), std::vector<double>(n_nodes, 0.0));
    secure_.assign(slots_.size(), std::vector<char>(n_nodes, 1));
    for (std::size_t m = 0; m < slots_.size(); ++m) {
      const auto& s = slots_[m];
      const auto& app = inst.apps[s.app];
      for (std::size_t k = 0; k < n_nodes; ++k) {
        const auto& node = inst.nodes[k];
        double c = s.module->exec_delay * node.proc_cost + s.module->stor_req * node.stor_cost;
        if (s.first) c += app.input_traffic * node.sensor_bw_cost;
        if (s.last) c += app.output_traffic * node.user_bw_cost;
        standalone_[m][k] = c;
        if (!relax.drop_security)
          secure_[m][k] = numeric(*node.security_rating) >= numeric(app.security_req);
      }
    }
    used_proc_.assign(n_nodes, 0.0);
    used_mem_.assign(n_nodes, 0.0);
    used_stor_.assign(n_nodes, 0.0);
    cost_.assign(slots_.size() + 1, 0.0);
    comm_.assign(slots_.size() + 1, 0.0);
    current_.assign(slots_.size(), 0);
  }

  std::size_t size() const { return slots_.size(); }
  std::size_t node_count() const { return inst_.nodes.size(); }
  double standalone(std::size_t m, std::size_t k) const { return standalone_[m][k]; }
  double cost(std::size_t depth) const { return cost_[depth]; }
  const Assignment& current() const { return current_; }

  bool fits(std::size_t m, std::size_t k) const {
    const auto& node = inst_.nodes[k];
    const auto* mod = slots_[m].module;
    return within(used_proc_[k] + mod->proc_req, node.proc_capacity) &&
           within(used_mem_[k] + mod->mem_req, node.mem_capacity) &&
           within(used_stor_[k] + mod->stor_req, node.stor_capacity);
  }

  /// Places module m (which must be the next open one) on node k, or reports
  /// why that is impossible.
  Rejection place(std::size_t m, std::size_t k) {
    const auto& s = slots_[m];
    if (!secure_[m][k]) return Rejection::Security;
    if (!fits(m, k)) return Rejection::Capacity;

    const auto& node = inst_.nodes[k];
    const std::size_t prev = s.first ? 0 : current_[m - 1];
    double comm = s.first ? node.sensor_delay : comm_[m] + inst_.links.delay[prev][k];
    if (s.last) comm += node.user_delay;
    if (!relax_.drop_qos && !within(comm + s.app_exec, inst_.apps[s.app].qos_threshold))
      return Rejection::Qos;

    double cost = cost_[m] + standalone_[m][k];
    if (!s.first) cost += s.inbound * inst_.links.bw_cost[prev][k];

    used_proc_[k] += s.module->proc_req;
    used_mem_[k] += s.module->mem_req;
    used_stor_[k] += s.module->stor_req;
    current_[m] = k;
    cost_[m + 1] = cost;
    // A finished app contributes nothing to the next app's running delay.
    comm_[m + 1] = s.last ? 0.0 : comm;
    return Rejection::None;
  }

  void unplace(std::size_t m) {
    const std::size_t k = current_[m];
    const auto* mod = slots_[m].module;
    used_proc_[k] -= mod->proc_req;
    used_mem_[k] -= mod->mem_req;
    used_stor_[k] -= mod->stor_req;
  }

  /// Cost of the first `depth` modules plus, for every later module, the
  /// cheapest node that is secure enough and could still take it alone.
  double bound(std::size_t depth) const {
    double total = cost_[depth];
    for (std::size_t m = depth; m < slots_.size(); ++m) {
      double best = kInf;
      for (std::size_t k = 0; k < inst_.nodes.size(); ++k)
        if (secure_[m][k] && fits(m, k)) best = std::min(best, standalone_[m][k]);
      if (best == kInf) return kInf;
      total += best;
    }
    return total;
  }

 private:
  struct Slot {
    std::size_t app = 0;
    std::size_t chain = 0;
    bool first = false;
    bool last = false;
    const AppModule* module = nullptr;
    double inbound = 0.0;
    double app_exec = 0.0;
  };

  const Instance& inst_;
  Relaxations relax_;
  std::vector<Slot> slots_;
  std::vector<std::vector<double>> standalone_;
  std::vector<std::vector<char>> secure_;
  std::vector<double> used_proc_, used_mem_, used_stor_;
  std::vector<double> cost_;  // cost_[d]: cost of the first d modules
  std::vector<double> comm_;  // comm_[d]: running comm delay of the open app
  Assignment current_;
};

class BranchAndBound {
 public:
  BranchAndBound(const Instance& inst, const Relaxations& relax, const SolveOptions& opts)
      : state_(inst, relax), opts_(opts) {
    order_.resize(state_.size());
    for (std::size_t m = 0; m < state_.size(); ++m) {
      auto& order = order_[m];
      order.resize(state_.node_count());
      std::iota(order.begin(), order.end(), std::size_t{0});
      if (opts.node_order == NodeOrder::CheapestFirst) {
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
          return state_.standalone(m, a) < state_.standalone(m, b);
        });
      }
    }
    deadline_ = std::chrono::steady_clock::now() +
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(opts.time_limit));
  }

  void seed(const Assignment& a, double cost) {
    best_ = a;
    best_cost_ = cost;
  }

  void run() {
    if (state_.size() == 0) {
      best_ = Assignment{};
      best_cost_ = 0.0;
      return;
    }
    descend(0);
  }

  bool timed_out() const { return timed_out_; }
  const std::optional<Assignment>& best() const { return best_; }
  const SearchStats& stats() const { return stats_; }

 private:
  bool prunable(double bound) const {
    if (bound == kInf) return true;
    if (!best_) return false;
    const double target = best_cost_ * (1.0 - opts_.tolerance);
    return !strictly_better(bound, target);
  }

  void descend(std::size_t m) {
    for (std::size_t k : order_[m]) {
      if (timed_out_) return;
      ++stats_.nodes_explored;
      if ((stats_.nodes_explored & 1023) == 0 && std::chrono::steady_clock::now() > deadline_) {
        timed_out_ = true;
        return;
      }

      switch (state_.place(m, k)) {
        case Rejection::Security: ++stats_.prune_security; continue;
        case Rejection::Capacity: ++stats_.prune_capacity; continue;
        case Rejection::Qos: ++stats_.prune_qos; continue;
        case Rejection::None: break;
      }

      if (m + 1 == state_.size()) {
        const double cost = state_.cost(m + 1);
        if (!best_ || strictly_better(cost, best_cost_)) {
          best_ = state_.current();
          best_cost_ = cost;
        }
      } else {
        const double bound = state_.bound(m + 1);
        if (bound == kInf)
          ++stats_.prune_capacity;
        else if (prunable(bound))
          ++stats_.prune_bound;
        else
          descend(m + 1);
      }
      state_.unplace(m);
    }
  }

  SearchState state_;
  SolveOptions opts_;
  std::vector<std::vector<std::size_t>> order_;
  std::chrono::steady_clock::time_point deadline_;
  std::optional<Assignment> best_;
  double best_cost_ = kInf;
  SearchStats stats_;
  bool timed_out_ = false;
};

}  // namespace

SolveReport solve_exact(const Instance& inst, const Relaxations& relax, const SolveOptions& opts) {
  if (!(opts.time_limit > 0.0)) throw std::invalid_argument("time limit must be positive");
  if (opts.tolerance < 0.0 || opts.tolerance >= 1.0)
    throw std::invalid_argument("tolerance must lie in [0, 1)");
  require_rated(inst, relax);

  BranchAndBound search(inst, relax, opts);
  if (opts.greedy_incumbent) {
    auto greedy = solve_greedy(inst, relax);
    if (greedy.status == SolveStatus::Feasible) {
      auto a = assignment_from_placement(inst, *greedy.placement);
      search.seed(a, greedy.cost.total);
    }
  }
  search.run();

  SolveStatus status;
  if (search.timed_out())
    status = SolveStatus::TimeLimit;
  else
    status = search.best() ? SolveStatus::Optimal : SolveStatus::Infeasible;
  return make_report(inst, relax, "exact", status, search.best(), search.stats());
}

SolveReport solve_bruteforce(const Instance& inst, const Relaxations& relax) {
  const std::size_t n_modules = inst.module_count();
  const std::size_t n_nodes = inst.nodes.size();
  if (n_modules > kBruteForceMaxModules || n_nodes > kBruteForceMaxNodes) {
    throw EnumerationLimitError("brute force is limited to " +
                                std::to_string(kBruteForceMaxModules) + " modules and " +
                                std::to_string(kBruteForceMaxNodes) + " nodes (instance has " +
                                std::to_string(n_modules) + " and " + std::to_string(n_nodes) +
                                ")");
  }
  require_rated(inst, relax);

  SearchStats stats;
  std::optional<Assignment> best;
  double best_cost = kInf;
  if (n_nodes == 0 && n_modules > 0)
    return make_report(inst, relax, "brute", SolveStatus::Infeasible, best, stats);

  Assignment a(n_modules, 0);
  while (true) {
    ++stats.nodes_explored;
    if (assignment_violations(inst, a, relax).empty()) {
      const double cost = assignment_cost(inst, a).total;
      if (!best || strictly_better(cost, best_cost)) {
        best = a;
        best_cost = cost;
      }
    }
    // Odometer with the last module fastest gives lexicographic order.
    std::size_t pos = n_modules;
    while (pos > 0 && ++a[pos - 1] == n_nodes) a[--pos] = 0;
    if (pos == 0) break;
  }
  return make_report(inst, relax, "brute",
                     best ? SolveStatus::Optimal : SolveStatus::Infeasible, best, stats);
}

SolveReport solve_greedy(const Instance& inst, const Relaxations& relax) {
  require_rated(inst, relax);
  const std::size_t n_nodes = inst.nodes.size();
  std::vector<double> used_proc(n_nodes, 0.0), used_mem(n_nodes, 0.0), used_stor(n_nodes, 0.0);
  SearchStats stats;
  Assignment chosen;

  for (std::size_t i = 0; i < inst.apps.size(); ++i) {
    const auto& app = inst.apps[i];
    const std::size_t n = app.size();
    std::optional<Assignment> best;
    double best_cost = kInf;

    Assignment a(n, 0);
    std::vector<double> proc(n_nodes), mem(n_nodes), stor(n_nodes);
    bool more = n_nodes > 0;
    while (more) {
      ++stats.nodes_explored;
      bool ok = true;
      if (!relax.drop_security) {
        for (std::size_t j = 0; j < n && ok; ++j)
          ok = numeric(*inst.nodes[a[j]].security_rating) >= numeric(app.security_req);
        if (!ok) ++stats.prune_security;
      }
      if (ok) {
        proc = used_proc;
        mem = used_mem;
        stor = used_stor;
        for (std::size_t j = 0; j < n; ++j) {
          proc[a[j]] += app.modules[j].proc_req;
          mem[a[j]] += app.modules[j].mem_req;
          stor[a[j]] += app.modules[j].stor_req;
        }
        for (std::size_t k = 0; k < n_nodes && ok; ++k) {
          ok = within(proc[k], inst.nodes[k].proc_capacity) &&
               within(mem[k], inst.nodes[k].mem_capacity) &&
               within(stor[k], inst.nodes[k].stor_capacity);
        }
        if (!ok) ++stats.prune_capacity;
      }
      double cost = 0.0;
      if (ok) {
        double delay = inst.nodes[a.front()].sensor_delay + inst.nodes[a.back()].user_delay;
        cost = app.input_traffic * inst.nodes[a.front()].sensor_bw_cost +
               app.output_traffic * inst.nodes[a.back()].user_bw_cost;
        for (std::size_t j = 0; j < n; ++j) {
          const auto& node = inst.nodes[a[j]];
          delay += app.modules[j].exec_delay;
          cost += app.modules[j].exec_delay * node.proc_cost +
                  app.modules[j].stor_req * node.stor_cost;
          if (j > 0) {
            delay += inst.links.delay[a[j - 1]][a[j]];
            cost += app.inter_traffic[j - 1] * inst.links.bw_cost[a[j - 1]][a[j]];
          }
        }
        if (!relax.drop_qos && !within(delay, app.qos_threshold)) {
          ok = false;
          ++stats.prune_qos;
        }
      }
      if (ok && (!best || strictly_better(cost, best_cost))) {
        best = a;
        best_cost = cost;
      }

      std::size_t pos = n;
      while (pos > 0 && ++a[pos - 1] == n_nodes) a[--pos] = 0;
      more = pos > 0;
    }

    if (!best) {
      return make_report(inst, relax, "greedy", SolveStatus::HeuristicFailure, std::nullopt,
                         stats);
    }
    for (std::size_t j = 0; j < n; ++j) {
      used_proc[(*best)[j]] += app.modules[j].proc_req;
      used_mem[(*best)[j]] += app.modules[j].mem_req;
      used_stor[(*best)[j]] += app.modules[j].stor_req;
    }
    chosen.insert(chosen.end(), best->begin(), best->end());
  }
  return make_report(inst, relax, "greedy", SolveStatus::Feasible, chosen, stats);
}

double prefix_lower_bound(const Instance& inst, const Relaxations& relax,
                          const Assignment& prefix) {
  require_rated(inst, relax);
  SearchState state(inst, relax);
  if (prefix.size() > state.size()) throw std::invalid_argument("prefix longer than module count");
  for (std::size_t m = 0; m < prefix.size(); ++m) {
    if (prefix[m] >= state.node_count()) throw ReferenceError("node index out of range");
    if (state.place(m, prefix[m]) != Rejection::None) return kInf;
  }
  return state.bound(prefix.size());
}

nlohmann::ordered_json cost_to_json(const CostBreakdown& cost) {
  return {{"processing", cost.processing}, {"storage", cost.storage},
          {"sensor_comm", cost.sensor_comm}, {"inter_comm", cost.inter_comm},
          {"user_comm", cost.user_comm},     {"total", cost.total}};
}

nlohmann::ordered_json report_to_json(const SolveReport& report) {
  nlohmann::ordered_json doc;
  doc["solver"] = report.solver;
  doc["status"] = to_string(report.status);
  doc["relax"] = {{"drop_qos", report.relax.drop_qos},
                  {"drop_security", report.relax.drop_security}};
  if (report.placement) {
    doc["cost"] = cost_to_json(report.cost);
    auto delays = nlohmann::ordered_json::object();
    for (const auto& [app, d] : report.per_app_delay)
      delays[app] = {{"comm", d.comm}, {"exec", d.exec}};
    doc["per_app_delay"] = std::move(delays);
    doc["placement"] = placement_to_json(*report.placement);
  }
  doc["stats"] = {{"nodes_explored", report.stats.nodes_explored},
                  {"prune_bound", report.stats.prune_bound},
                  {"prune_capacity", report.stats.prune_capacity},
                  {"prune_qos", report.stats.prune_qos},
                  {"prune_security", report.stats.prune_security}};
  return doc;
}

}  // namespace fogplace
