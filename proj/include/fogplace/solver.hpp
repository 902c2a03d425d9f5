#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "fogplace/evaluate.hpp"
#include "fogplace/ilp.hpp"
#include "fogplace/model.hpp"
#include "json.hpp"

namespace fogplace {

enum class NodeOrder { Input, CheapestFirst };

struct SolveOptions {
  double time_limit = 60.0;  // seconds, must be positive
  NodeOrder node_order = NodeOrder::Input;
  /// Relative optimality gap accepted when pruning. 0 proves exact optimality.
  double tolerance = 0.0;
  /// Seed the search with the greedy placement when it succeeds.
  bool greedy_incumbent = true;
};

/// Optimal, Infeasible and TimeLimit come from the exact searches. The greedy
/// heuristic never claims optimality: it reports Feasible or HeuristicFailure.
enum class SolveStatus { Optimal, Infeasible, TimeLimit, Feasible, HeuristicFailure };

std::string to_string(SolveStatus status);

struct SearchStats {
  std::uint64_t nodes_explored = 0;
  std::uint64_t prune_bound = 0;
  std::uint64_t prune_capacity = 0;
  std::uint64_t prune_qos = 0;
  std::uint64_t prune_security = 0;

  bool operator==(const SearchStats&) const = default;
};

struct SolveReport {
  std::string solver;
  SolveStatus status = SolveStatus::Infeasible;
  std::optional<Placement> placement;
  CostBreakdown cost;
  std::map<std::string, Delay> per_app_delay;
  SearchStats stats;
  Relaxations relax;

  bool has_placement() const { return placement.has_value(); }
};

/// Thrown by solve_bruteforce when the instance is too large to enumerate.
class EnumerationLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::size_t kBruteForceMaxModules = 12;
inline constexpr std::size_t kBruteForceMaxNodes = 4;

/// Depth-first branch-and-bound over module -> node assignments in (app,
/// chain) order. Edge variables are implied by consecutive assignments.
/// Prunes on capacity, security, a delay underestimate and an admissible cost
/// bound (fixed prefix plus each open module's cheapest standalone placement).
SolveReport solve_exact(const Instance& inst, const Relaxations& relax,
                        const SolveOptions& opts = {});

/// Enumerates every assignment in lexicographic order; the first cheapest
/// feasible one wins.
SolveReport solve_bruteforce(const Instance& inst, const Relaxations& relax);

/// Places apps one at a time, each at its cheapest placement that still fits
/// the capacity left by earlier apps. Never backtracks across apps.
SolveReport solve_greedy(const Instance& inst, const Relaxations& relax);

/// The bound solve_exact uses at a search node whose first prefix.size()
/// modules are fixed. +infinity when the prefix itself is infeasible or some
/// open module has no node it could still fit on.
double prefix_lower_bound(const Instance& inst, const Relaxations& relax,
                          const Assignment& prefix);

nlohmann::ordered_json report_to_json(const SolveReport& report);
nlohmann::ordered_json cost_to_json(const CostBreakdown& cost);

}  // namespace fogplace
