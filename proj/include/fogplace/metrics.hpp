#pragma once

#include <cstddef>
#include <stdexcept>

#include "fogplace/model.hpp"
#include "fogplace/solver.hpp"

namespace fogplace {

struct DeployedCounts {
  std::size_t cloud = 0;
  std::size_t fog = 0;
};

struct MetricsReport {
  double resource_cost = 0.0;
  std::size_t modules_on_cloud = 0;
  std::size_t modules_on_fog = 0;
  double unprotected_data = 0.0;  // Gb
};

class NoPlacementError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Total resource cost of a solved report. Throws NoPlacementError when the
/// report carries no placement (infeasible, or a failed heuristic).
double resource_cost(const SolveReport& report);

DeployedCounts count_deployed(const Instance& inst, const Placement& p);

/// Traffic arriving at modules hosted below their application's security
/// requirement: sensor input for a first module, the predecessor edge
/// otherwise. In Gb.
double unprotected_data(const Instance& inst, const Placement& p);

MetricsReport compute_metrics(const Instance& inst, const SolveReport& report);

}  // namespace fogplace
