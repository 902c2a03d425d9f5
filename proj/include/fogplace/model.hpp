#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fogplace {

/// Thrown when a placement or query refers to an app, module or node that
/// does not exist in the instance.
class ReferenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SecurityLevel { Low = 1, Medium = 2, High = 3 };

constexpr int numeric(SecurityLevel level) { return static_cast<int>(level); }
std::string to_string(SecurityLevel level);
std::optional<SecurityLevel> parse_security_level(const std::string& text);

enum class Tier { Cloud, Fog };

std::string to_string(Tier tier);
std::optional<Tier> parse_tier(const std::string& text);

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

struct ResourceNode {
  std::string id;
  Tier tier = Tier::Fog;
  double proc_capacity = 0.0;  // MIPS
  double mem_capacity = 0.0;   // Gb
  double stor_capacity = 0.0;  // Gb
  double proc_cost = 0.0;      // per second of execution
  double stor_cost = 0.0;      // per Gb
  double sensor_bw_cost = 0.0; // per Gb from the sensors
  double user_bw_cost = 0.0;   // per Gb to the end user
  double sensor_delay = 0.0;   // seconds
  double user_delay = 0.0;     // seconds
  std::optional<Point> position;
  std::optional<double> tx_range;
  std::optional<SecurityLevel> security_rating;

  bool operator==(const ResourceNode&) const = default;
};

/// Dense |N| x |N| tables indexed by node position in Instance::nodes.
/// Diagonal entries are zero: adjacent modules sharing a node talk for free.
struct LinkTable {
  std::vector<std::vector<double>> delay;
  std::vector<std::vector<double>> bw_cost;

  bool operator==(const LinkTable&) const = default;
};

struct AppModule {
  double proc_req = 0.0;    // MI
  double mem_req = 0.0;     // Gb
  double stor_req = 0.0;    // Gb
  double exec_delay = 0.0;  // seconds, node independent

  bool operator==(const AppModule&) const = default;
};

/// A linear chain of modules. inter_traffic[j] flows from module j to j+1.
struct Application {
  std::string id;
  std::vector<AppModule> modules;
  double input_traffic = 0.0;  // Gb, sensors -> first module
  std::vector<double> inter_traffic;
  double output_traffic = 0.0;  // Gb, last module -> end user
  double qos_threshold = 0.0;   // seconds
  SecurityLevel security_req = SecurityLevel::Low;

  std::size_t size() const { return modules.size(); }
  bool operator==(const Application&) const = default;
};

struct FarmGeometry {
  double width = 0.0;
  double height = 0.0;
  bool operator==(const FarmGeometry&) const = default;
};

struct Instance {
  std::vector<ResourceNode> nodes;
  LinkTable links;
  std::vector<Application> apps;
  FarmGeometry farm;

  std::optional<std::size_t> node_index(const std::string& id) const;
  std::optional<std::size_t> app_index(const std::string& id) const;
  std::size_t module_count() const;

  bool operator==(const Instance&) const = default;
};

struct ModuleRef {
  std::string app;
  std::size_t index = 0;
  auto operator<=>(const ModuleRef&) const = default;
};

/// Module -> node assignment plus the induced mapping of chain edges onto
/// ordered node pairs. Edge j joins module j and module j + 1.
struct Placement {
  std::map<ModuleRef, std::string> assign;
  std::map<ModuleRef, std::pair<std::string, std::string>> edge_map;

  bool operator==(const Placement&) const = default;
};

struct Violation {
  std::string path;
  std::string message;
};

using ValidationReport = std::vector<Violation>;

/// Checks every structural invariant of the instance. Never throws; an empty
/// report means the instance is well formed.
ValidationReport validate_instance(const Instance& inst);

/// True iff every module is assigned, every internal edge is mapped, and each
/// edge maps to the pair of nodes hosting its endpoints. Throws ReferenceError
/// when the placement names an app, module or node unknown to the instance.
bool placement_is_consistent(const Instance& inst, const Placement& p);

/// Flat assignment: one node index per module, apps in input order and modules
/// in chain order. This is the representation the solvers search over.
using Assignment = std::vector<std::size_t>;

Placement placement_from_assignment(const Instance& inst, const Assignment& a);

/// Inverse of placement_from_assignment. Throws ReferenceError on unknown ids
/// and std::invalid_argument if a module is unassigned.
Assignment assignment_from_placement(const Instance& inst, const Placement& p);

}  // namespace fogplace
