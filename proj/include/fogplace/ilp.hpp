#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fogplace/model.hpp"

namespace fogplace {

/// Constraint families that may be switched off. Both false is the full model;
/// both true is the "NoQoS" study.
struct Relaxations {
  bool drop_qos = false;
  bool drop_security = false;

  static constexpr Relaxations none() { return {}; }
  static constexpr Relaxations both() { return {true, true}; }
  static constexpr Relaxations qos_only() { return {true, false}; }
  static constexpr Relaxations security_only() { return {false, true}; }

  /// "none", "drop_qos", "drop_security" or "both".
  std::string name() const;
  bool operator==(const Relaxations&) const = default;
};

std::optional<Relaxations> parse_relaxations(const std::string& name);

/// Raised when the security family is active but a node has no rating.
class UnratedNodeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Variable {
  enum class Kind { Assign, Edge };
  Kind kind = Kind::Assign;
  std::size_t app = 0;
  std::size_t index = 0;  // module for Assign, edge for Edge
  std::size_t from = 0;   // hosting node for Assign, u for Edge
  std::size_t to = 0;     // v for Edge
  std::string name;
};

enum class Sense { LessEqual, GreaterEqual, Equal };

struct Term {
  std::size_t var = 0;
  double coef = 0.0;
};

struct Constraint {
  std::string name;
  int equation = 0;
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

/// The binary program: x (module on node) variables first, apps in input
/// order, modules ascending, nodes in input order; then z (edge on node pair)
/// variables in the same nesting with v innermost.
struct IlpModel {
  std::size_t node_count = 0;
  std::vector<Variable> variables;
  std::vector<double> objective;  // dense, one coefficient per variable
  std::vector<Constraint> constraints;
  Relaxations relax;

  std::size_t x_index(std::size_t app, std::size_t module, std::size_t node) const;
  std::size_t z_index(std::size_t app, std::size_t edge, std::size_t u, std::size_t v) const;

  std::vector<std::size_t> x_offset;  // per app
  std::vector<std::size_t> z_offset;  // per app
};

IlpModel build_model(const Instance& inst, const Relaxations& relax);

/// 0/1 vector for a placement: x from assign, z from edge_map.
std::vector<double> encode_placement(const IlpModel& model, const Instance& inst,
                                     const Placement& p);

double objective_value(const IlpModel& model, std::span<const double> values);
double row_activity(const Constraint& row, std::span<const double> values);
bool row_satisfied(const Constraint& row, std::span<const double> values,
                   double tolerance = 1e-9);

/// CPLEX LP text format. Output is a pure function of the model, so repeated
/// exports are byte-identical.
std::string export_lp(const IlpModel& model);

}  // namespace fogplace
