#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fogplace/model.hpp"
#include "json.hpp"

namespace fogplace {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Closed interval for uniform draws.
struct Range {
  double low = 0.0;
  double high = 0.0;
  bool operator==(const Range&) const = default;
};

/// Per-tier unit costs, attach delays and capacities.
struct TierParams {
  double proc_cost = 0.0;
  double stor_cost = 0.0;
  double comm_cost = 0.0;     // sensor and end-user bandwidth, per Gb
  double sensor_delay = 0.0;  // seconds
  double user_delay = 0.0;    // seconds
  double proc_capacity = 0.0;
  double mem_capacity = 0.0;
  double stor_capacity = 0.0;
  bool operator==(const TierParams&) const = default;
};

struct FogSite {
  Point position;
  double tx_range = 0.0;
  bool operator==(const FogSite&) const = default;
};

/// Generation parameters. Defaults reproduce the two-fog, one-cloud smart
/// farm setup with the unit costs and delays of the original study; fields
/// the study leaves open (capacities, attach delays, execution times, fog
/// geometry) carry documented defaults.
struct ScenarioConfig {
  std::size_t n_fog = 2;
  std::size_t n_apps = 7;
  std::size_t modules_per_app = 3;

  Range proc_req{0.100, 2.100};          // MI
  Range mem_req{0.010, 0.040};           // Gb
  Range stor_req{0.256, 0.768};          // Gb
  Range input_traffic{0.001, 0.004};     // Gb
  Range inter_traffic{0.1, 1.0};         // Gb
  Range output_traffic{0.0005, 0.001};   // Gb

  double min_qos = 0.5;
  double max_qos = 1.5;
  /// Fraction of apps forced to High security. Unset: every app draws its
  /// level uniformly from all three.
  std::optional<double> alpha;

  TierParams cloud{0.03, 0.001, 3.0, 0.5, 0.5, 1e6, 1e6, 1e6};
  TierParams fog{0.02, 0.02, 5.0, 0.01, 0.01, 22.0, 0.42, 8.0};
  double cloud_fog_delay = 0.5;
  double fog_fog_delay = 0.01;
  /// Link bandwidth costs default to the cloud comm cost on cloud links and
  /// the fog comm cost between fog nodes.
  std::optional<double> cloud_fog_bw_cost;
  std::optional<double> fog_fog_bw_cost;

  FarmGeometry farm{1000.0, 1000.0};
  /// Explicit fog sites, used in order; fog nodes beyond this list are
  /// placed uniformly at random in the farm with default_tx_range.
  std::vector<FogSite> fog_sites{{{900.0, 500.0}, 300.0}, {{500.0, 500.0}, 300.0}};
  double default_tx_range = 300.0;

  /// Execution delay is proc_req / reference_mips unless fixed_exec_delay is set.
  double reference_mips = 20.0;
  std::optional<double> fixed_exec_delay;

  std::uint64_t seed = 0;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Throws ConfigError on empty ranges, alpha outside [0, 1], and the like.
void validate_config(const ScenarioConfig& cfg);

/// Deterministic for a given config. Every app draws from its own stream
/// derived from (seed, app index), so app i is identical whatever n_apps is,
/// and its QoS and security variates do not depend on max_qos or alpha:
///   Q_i = min_qos + u_i * (max_qos - min_qos)
///   W_i = High for the first ceil(alpha * n_apps) apps, else Low/Medium by v_i.
/// Streams are std::mt19937_64 seeded through SplitMix64; uniforms take the
/// top 53 bits, so results are identical on every platform.
Instance generate_instance(const ScenarioConfig& cfg);

nlohmann::ordered_json config_to_json(const ScenarioConfig& cfg);
/// Missing fields keep their defaults from `base`; unknown fields are rejected.
ScenarioConfig config_from_json(const nlohmann::ordered_json& doc, ScenarioConfig base = {});

}  // namespace fogplace
