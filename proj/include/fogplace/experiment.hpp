#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fogplace/ilp.hpp"
#include "fogplace/scenario.hpp"
#include "fogplace/solver.hpp"
#include "json.hpp"

namespace fogplace {

/// Cartesian product of scenario knobs. Cells are enumerated with n_apps
/// outermost, then max_qos, alpha and relax.
struct Grid {
  std::vector<std::size_t> n_apps;
  std::vector<double> max_qos;
  std::vector<std::optional<double>> alpha;  // nullopt: uniform security levels
  std::vector<Relaxations> relax;
};

struct ExperimentConfig {
  std::string name;
  Grid grid;
  std::vector<std::uint64_t> seeds;
  ScenarioConfig base;
  SolveOptions solve;
};

struct Cell {
  std::size_t n_apps = 0;
  double max_qos = 0.0;
  std::optional<double> alpha;
  Relaxations relax;
};

struct ResultRow {
  Cell cell;
  std::optional<std::uint64_t> seed;  // nullopt on aggregate rows
  std::string status;
  bool solved = false;  // a placement exists (per-seed) / any seed solved (aggregate)
  CostBreakdown cost;
  double modules_cloud = 0.0;
  double modules_fog = 0.0;
  double unprotected_data = 0.0;  // Gb
  SearchStats stats;
  double wall_seconds = 0.0;  // not written to the results CSV
  std::optional<Placement> placement;
  std::optional<Instance> instance;
};

struct ResultTable {
  std::vector<ResultRow> rows;       // cell-major, seeds inner
  std::vector<ResultRow> aggregates;  // one mean row per cell
};

std::vector<Cell> enumerate_cells(const Grid& grid);

/// Runs every (cell, seed) pair with solve_exact. Failures of a single pair
/// are recorded in its row. `threads` = 0 uses the hardware concurrency; the
/// table is assembled in cell order regardless. With keep_instances the
/// generated instance is stored on each row (for auditing and tests).
ResultTable run_sweep(const ExperimentConfig& cfg, unsigned threads = 0,
                      bool keep_instances = false);

std::string table_to_csv(const ResultTable& table);
std::string timings_to_csv(const ResultTable& table);
/// Per-row placements for audit, keyed by cell and seed.
nlohmann::ordered_json placements_to_json(const ResultTable& table);

enum class TrendStatus { Pass, Fail, Vacuous };

struct TrendResult {
  std::string name;
  std::string description;
  bool per_seed = false;  // checked on every seed rather than on means
  TrendStatus status = TrendStatus::Vacuous;
  std::size_t comparisons = 0;
  std::size_t violations = 0;
  std::string observed;
};

struct TrendReport {
  std::vector<TrendResult> trends;
  bool all_pass() const;
  const TrendResult* find(const std::string& name) const;
};

/// Evaluates the qualitative trends over a sweep:
///   cost_vs_apps     per seed: cost nondecreasing in n_apps
///   cost_vs_qos      per seed: cost at the tighter max_qos >= at the looser one
///   cost_vs_alpha    per seed: cost nondecreasing in alpha, infeasible stays infeasible
///   fog_vs_qos       mean fog-module count at the tighter max_qos >= at the looser one
///   unprotected_noqos mean unprotected data with both families dropped <= with only
///                    security dropped, for every max_qos
/// A trend with nothing to compare is vacuous and counts as passing.
TrendReport check_trends(const ResultTable& table);
std::string trends_to_text(const TrendReport& report);

std::vector<std::string> preset_names();
/// fig4, fig5, fig6 or fig7 with 20 seeds. Throws ConfigError otherwise.
ExperimentConfig preset_experiment(const std::string& name);

nlohmann::ordered_json experiment_to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_from_json(const nlohmann::ordered_json& doc);

}  // namespace fogplace
