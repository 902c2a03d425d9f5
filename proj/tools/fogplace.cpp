// Command-line front end: generate, rate, validate, solve, experiment.
//
// Exit codes:
//   0  success (Optimal for exact/brute, Feasible for greedy)
//   1  internal error
//   2  usage error
//   3  file cannot be read or written
//   4  invalid input (malformed document or failed validation)
//   5  infeasible
//   6  time limit reached
//   7  greedy heuristic failed
//   8  instance too large for the brute-force solver

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fogplace/evaluate.hpp"
#include "fogplace/experiment.hpp"
#include "fogplace/ilp.hpp"
#include "fogplace/instance_io.hpp"
#include "fogplace/metrics.hpp"
#include "fogplace/scenario.hpp"
#include "fogplace/security.hpp"
#include "fogplace/solver.hpp"

namespace {

enum Exit : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kFile = 3,
  kInvalidInput = 4,
  kInfeasible = 5,
  kTimeLimit = 6,
  kHeuristicFailure = 7,
  kTooLarge = 8,
};

using namespace fogplace;

void print_violations(const ValidationReport& report) {
  for (const auto& v : report) std::cerr << "  " << v.path << ": " << v.message << "\n";
}

Instance load_valid_instance(const std::string& path) {
  Instance inst = read_instance(path);
  auto report = validate_instance(inst);
  if (!report.empty()) {
    std::cerr << path << ": instance is invalid\n";
    print_violations(report);
    throw std::invalid_argument("validation failed");
  }
  return inst;
}

int cmd_generate(const std::string& config_path, std::optional<std::uint64_t> seed,
                 std::optional<std::size_t> n_apps, std::optional<double> max_qos,
                 std::optional<double> alpha, const std::string& out_path) {
  ScenarioConfig cfg;
  if (!config_path.empty()) cfg = config_from_json(parse_document(read_text_file(config_path)));
  if (seed) cfg.seed = *seed;
  if (n_apps) cfg.n_apps = *n_apps;
  if (max_qos) cfg.max_qos = *max_qos;
  if (alpha) cfg.alpha = *alpha;
  const Instance inst = generate_instance(cfg);
  auto report = validate_instance(inst);
  if (!report.empty()) {
    std::cerr << "generated instance failed validation\n";
    print_violations(report);
    return kInvalidInput;
  }
  const std::string text = dump_document(instance_to_json(inst));
  if (out_path.empty() || out_path == "-")
    std::cout << text;
  else
    write_text_file(out_path, text);
  return kOk;
}

int cmd_rate(const std::string& path) {
  const Instance inst = rate_infrastructure(load_valid_instance(path));
  std::printf("%-12s %-6s %14s %10s %-7s\n", "node", "tier", "min_dist_m", "tx_range_m", "rating");
  for (const auto& node : inst.nodes) {
    std::string dist = "-", range = "-";
    if (node.tier == Tier::Fog) {
      const auto d = boundary_distances(*node.position, inst.farm);
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", *std::min_element(d.begin(), d.end()));
      dist = buf;
      std::snprintf(buf, sizeof buf, "%.3f", *node.tx_range);
      range = buf;
    }
    std::printf("%-12s %-6s %14s %10s %-7s\n", node.id.c_str(), to_string(node.tier).c_str(),
                dist.c_str(), range.c_str(), to_string(*node.security_rating).c_str());
  }
  return kOk;
}

int cmd_validate(const std::string& path) {
  const Instance inst = read_instance(path);
  auto report = validate_instance(inst);
  if (report.empty()) {
    std::cout << path << ": valid (" << inst.nodes.size() << " nodes, " << inst.apps.size()
              << " apps, " << inst.module_count() << " modules)\n";
    return kOk;
  }
  std::cout << path << ": " << report.size() << " violation(s)\n";
  for (const auto& v : report) std::cout << "  " << v.path << ": " << v.message << "\n";
  return kInvalidInput;
}

struct SolveArgs {
  std::string instance;
  bool no_qos = false;
  bool no_security = false;
  std::string solver = "exact";
  double time_limit = 60.0;
  std::string node_order = "input";
  std::string export_lp_path;
  std::string out_path;
};

int cmd_solve(const SolveArgs& args) {
  Instance inst = load_valid_instance(args.instance);
  // Ratings are derived from geometry; re-rating keeps hand-written files honest.
  inst = rate_infrastructure(inst);
  const Relaxations relax{args.no_qos, args.no_security};

  if (!args.export_lp_path.empty())
    write_text_file(args.export_lp_path, export_lp(build_model(inst, relax)));

  SolveReport report;
  if (args.solver == "exact") {
    SolveOptions opts;
    opts.time_limit = args.time_limit;
    opts.node_order = args.node_order == "cheapest" ? NodeOrder::CheapestFirst : NodeOrder::Input;
    report = solve_exact(inst, relax, opts);
  } else if (args.solver == "greedy") {
    report = solve_greedy(inst, relax);
  } else {
    try {
      report = solve_bruteforce(inst, relax);
    } catch (const EnumerationLimitError& e) {
      std::cerr << "refused: " << e.what() << "\n";
      return kTooLarge;
    }
  }

  if (!args.out_path.empty()) write_text_file(args.out_path, dump_document(report_to_json(report)));

  std::printf("solver: %s  relax: %s  status: %s\n", report.solver.c_str(),
              relax.name().c_str(), to_string(report.status).c_str());
  if (report.placement) {
    const auto m = compute_metrics(inst, report);
    const auto& c = report.cost;
    std::printf("cost: total %.6f (processing %.6f, storage %.6f, sensor %.6f, inter %.6f, user %.6f)\n",
                c.total, c.processing, c.storage, c.sensor_comm, c.inter_comm, c.user_comm);
    std::printf("modules: cloud %zu, fog %zu  unprotected data: %.6f Gb (%.3f Mb)\n",
                m.modules_on_cloud, m.modules_on_fog, m.unprotected_data,
                m.unprotected_data * 1e3);
    for (const auto& app : inst.apps) {
      const auto& d = report.per_app_delay.at(app.id);
      std::printf("  %-8s delay %.4f s (comm %.4f + exec %.4f) / qos %.4f  W=%s  nodes:",
                  app.id.c_str(), d.total(), d.comm, d.exec, app.qos_threshold,
                  to_string(app.security_req).c_str());
      for (std::size_t j = 0; j < app.size(); ++j)
        std::printf(" %s", report.placement->assign.at({app.id, j}).c_str());
      std::printf("\n");
    }
  }
  std::printf("search: explored %llu, pruned bound %llu, capacity %llu, qos %llu, security %llu\n",
              static_cast<unsigned long long>(report.stats.nodes_explored),
              static_cast<unsigned long long>(report.stats.prune_bound),
              static_cast<unsigned long long>(report.stats.prune_capacity),
              static_cast<unsigned long long>(report.stats.prune_qos),
              static_cast<unsigned long long>(report.stats.prune_security));

  switch (report.status) {
    case SolveStatus::Optimal:
    case SolveStatus::Feasible: return kOk;
    case SolveStatus::Infeasible: return kInfeasible;
    case SolveStatus::TimeLimit: return kTimeLimit;
    case SolveStatus::HeuristicFailure: return kHeuristicFailure;
  }
  return kInternal;
}

struct ExperimentArgs {
  std::string grid_path;
  std::string preset;
  std::string out_path;
  std::string trends_path;
  std::string timings_path;
  std::string placements_path;
  unsigned threads = 0;
};

int cmd_experiment(const ExperimentArgs& args) {
  ExperimentConfig cfg;
  if (!args.grid_path.empty())
    cfg = experiment_from_json(parse_document(read_text_file(args.grid_path)));
  else
    cfg = preset_experiment(args.preset);

  const auto table = run_sweep(cfg, args.threads);
  write_text_file(args.out_path, table_to_csv(table));
  const auto trends = check_trends(table);
  const std::string text = trends_to_text(trends);
  if (!args.trends_path.empty()) write_text_file(args.trends_path, text);
  if (!args.timings_path.empty()) write_text_file(args.timings_path, timings_to_csv(table));
  if (!args.placements_path.empty())
    write_text_file(args.placements_path, dump_document(placements_to_json(table)));

  std::cout << "experiment " << (cfg.name.empty() ? "(unnamed)" : cfg.name) << ": "
            << table.rows.size() << " runs over " << table.aggregates.size() << " cells\n"
            << text;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost-minimal placement of chained IoT application modules on cloud-fog nodes"};
  app.require_subcommand(1);

  std::string gen_config, gen_out;
  std::optional<std::uint64_t> gen_seed;
  std::optional<std::size_t> gen_apps;
  std::optional<double> gen_qos, gen_alpha;
  auto* gen = app.add_subcommand("generate", "Generate a random instance from a scenario config");
  gen->add_option("-c,--config", gen_config, "Scenario config (JSON); defaults when omitted");
  gen->add_option("-s,--seed", gen_seed, "Override the config seed");
  gen->add_option("--apps", gen_apps, "Override the number of applications");
  gen->add_option("--max-qos", gen_qos, "Override MaxQoS (seconds)");
  gen->add_option("--alpha", gen_alpha, "Override the high-security fraction");
  gen->add_option("-o,--out", gen_out, "Output instance file (stdout when omitted)");

  std::string rate_path;
  auto* rate = app.add_subcommand("rate", "Print the security rating of every node");
  rate->add_option("instance", rate_path, "Instance file")->required();

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check an instance file for invariant violations");
  validate->add_option("instance", validate_path, "Instance file")->required();

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Solve the placement problem for an instance");
  solve->add_option("instance", solve_args.instance, "Instance file")->required();
  solve->add_flag("--no-qos", solve_args.no_qos, "Drop the end-to-end delay constraints");
  solve->add_flag("--no-security", solve_args.no_security, "Drop the security constraints");
  solve->add_option("--solver", solve_args.solver, "exact, greedy or brute")
      ->check(CLI::IsMember({"exact", "greedy", "brute"}));
  solve->add_option("--time-limit", solve_args.time_limit, "Seconds for the exact solver")
      ->check(CLI::PositiveNumber);
  solve->add_option("--node-order", solve_args.node_order, "input or cheapest")
      ->check(CLI::IsMember({"input", "cheapest"}));
  solve->add_option("--export-lp", solve_args.export_lp_path, "Write the model in LP format");
  solve->add_option("-o,--out", solve_args.out_path, "Write the solve report (JSON)");

  ExperimentArgs exp_args;
  auto* exp = app.add_subcommand("experiment", "Run an experiment grid and check trends");
  auto* grid_opt = exp->add_option("-g,--grid", exp_args.grid_path, "Experiment grid config (JSON)");
  auto* preset_opt = exp->add_option("-p,--preset", exp_args.preset, "Built-in grid: fig4..fig7")
                         ->check(CLI::IsMember(preset_names()));
  grid_opt->excludes(preset_opt);
  exp->add_option("-o,--out", exp_args.out_path, "Output CSV")->required();
  exp->add_option("--trends", exp_args.trends_path, "Write the trend report here");
  exp->add_option("--timings", exp_args.timings_path, "Write per-run wall times (CSV)");
  exp->add_option("--placements", exp_args.placements_path, "Write per-run placements (JSON)");
  exp->add_option("-j,--threads", exp_args.threads, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) return cmd_generate(gen_config, gen_seed, gen_apps, gen_qos, gen_alpha, gen_out);
    if (*rate) return cmd_rate(rate_path);
    if (*validate) return cmd_validate(validate_path);
    if (*solve) return cmd_solve(solve_args);
    if (*exp) {
      if (exp_args.grid_path.empty() && exp_args.preset.empty()) {
        std::cerr << "experiment: one of --grid or --preset is required\n";
        return kUsage;
      }
      return cmd_experiment(exp_args);
    }
  } catch (const FileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFile;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
