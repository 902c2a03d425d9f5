#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "fogplace/ilp.hpp"
#include "fogplace/model.hpp"

namespace fogplace {

class InconsistentPlacement : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CostBreakdown {
  double processing = 0.0;
  double storage = 0.0;
  double sensor_comm = 0.0;
  double inter_comm = 0.0;
  double user_comm = 0.0;
  double total = 0.0;

  bool operator==(const CostBreakdown&) const = default;
};

struct Delay {
  double comm = 0.0;
  double exec = 0.0;
  double total() const { return comm + exec; }
  bool operator==(const Delay&) const = default;
};

/// One violated row: the constraint family (2, 3, 4, 7, 8, 9, 14), what it
/// concerns, and by how much it is exceeded (always positive).
struct FeasibilityViolation {
  int equation = 0;
  std::string subject;
  double slack = 0.0;
};

/// Feasibility tolerance, scaled by max(1, |bound|). Shared by every check.
inline constexpr double kFeasibilityTolerance = 1e-9;

inline bool within(double lhs, double bound) {
  return lhs <= bound + kFeasibilityTolerance * (bound > 1.0 ? bound : 1.0);
}

CostBreakdown eval_cost(const Instance& inst, const Placement& p);
Delay eval_delay(const Instance& inst, const Placement& p, const Application& app);

/// Every active constraint the placement breaks. Works on incomplete or
/// inconsistent placements too: missing modules are reported under the
/// assignment family (9) and missing or mismatched edges under the edge family (14).
std::vector<FeasibilityViolation> check_feasibility(const Instance& inst, const Placement& p,
                                                    const Relaxations& relax);

// Same evaluations over a flat assignment (see model.hpp), used by the solvers.
CostBreakdown assignment_cost(const Instance& inst, const Assignment& a);
Delay assignment_delay(const Instance& inst, const Assignment& a, std::size_t app);
std::vector<FeasibilityViolation> assignment_violations(const Instance& inst, const Assignment& a,
                                                        const Relaxations& relax);

}  // namespace fogplace
