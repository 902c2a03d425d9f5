#include "fogplace/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "fogplace/instance_io.hpp"
#include "fogplace/metrics.hpp"

namespace fogplace {

std::vector<Cell> enumerate_cells(const Grid& grid) {
  std::vector<Cell> cells;
  for (auto n : grid.n_apps)
    for (double q : grid.max_qos)
      for (const auto& a : grid.alpha)
        for (const auto& r : grid.relax) cells.push_back({n, q, a, r});
  return cells;
}

namespace {

ResultRow run_one(const ExperimentConfig& cfg, const Cell& cell, std::uint64_t seed,
                  bool keep_instance) {
  ResultRow row;
  row.cell = cell;
  row.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    ScenarioConfig sc = cfg.base;
    sc.n_apps = cell.n_apps;
    sc.max_qos = cell.max_qos;
    sc.alpha = cell.alpha;
    sc.seed = seed;
    const Instance inst = generate_instance(sc);
    const SolveReport report = solve_exact(inst, cell.relax, cfg.solve);
    row.status = to_string(report.status);
    row.stats = report.stats;
    if (report.placement) {
      const auto metrics = compute_metrics(inst, report);
      row.solved = true;
      row.cost = report.cost;
      row.modules_cloud = static_cast<double>(metrics.modules_on_cloud);
      row.modules_fog = static_cast<double>(metrics.modules_on_fog);
      row.unprotected_data = metrics.unprotected_data;
      row.placement = report.placement;
    }
    if (keep_instance) row.instance = inst;
  } catch (const std::exception& e) {
    row.status = std::string("error: ") + e.what();
  }
  row.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

ResultRow aggregate(const Cell& cell, const std::vector<ResultRow>& rows, std::size_t first,
                    std::size_t count) {
  ResultRow agg;
  agg.cell = cell;
  std::size_t solved = 0;
  for (std::size_t s = first; s < first + count; ++s) {
    const auto& r = rows[s];
    agg.stats.nodes_explored += r.stats.nodes_explored;
    agg.stats.prune_bound += r.stats.prune_bound;
    agg.stats.prune_capacity += r.stats.prune_capacity;
    agg.stats.prune_qos += r.stats.prune_qos;
    agg.stats.prune_security += r.stats.prune_security;
    agg.wall_seconds += r.wall_seconds;
    if (!r.solved) continue;
    ++solved;
    agg.cost.processing += r.cost.processing;
    agg.cost.storage += r.cost.storage;
    agg.cost.sensor_comm += r.cost.sensor_comm;
    agg.cost.inter_comm += r.cost.inter_comm;
    agg.cost.user_comm += r.cost.user_comm;
    agg.cost.total += r.cost.total;
    agg.modules_cloud += r.modules_cloud;
    agg.modules_fog += r.modules_fog;
    agg.unprotected_data += r.unprotected_data;
  }
  agg.status = "solved=" + std::to_string(solved) + "/" + std::to_string(count);
  agg.solved = solved > 0;
  if (solved > 0) {
    const double d = static_cast<double>(solved);
    agg.cost.processing /= d;
    agg.cost.storage /= d;
    agg.cost.sensor_comm /= d;
    agg.cost.inter_comm /= d;
    agg.cost.user_comm /= d;
    agg.cost.total /= d;
    agg.modules_cloud /= d;
    agg.modules_fog /= d;
    agg.unprotected_data /= d;
  }
  if (count > 0) {
    agg.stats.nodes_explored /= count;
    agg.stats.prune_bound /= count;
    agg.stats.prune_capacity /= count;
    agg.stats.prune_qos /= count;
    agg.stats.prune_security /= count;
  }
  return agg;
}

std::string num(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

std::string alpha_text(const std::optional<double>& alpha) {
  return alpha ? num(*alpha) : "uniform";
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

ResultTable run_sweep(const ExperimentConfig& cfg, unsigned threads, bool keep_instances) {
  const auto cells = enumerate_cells(cfg.grid);
  const std::size_t n_seeds = cfg.seeds.size();
  const std::size_t n_tasks = cells.size() * n_seeds;

  ResultTable table;
  table.rows.resize(n_tasks);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n_tasks, 1)));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < n_tasks; t = next++)
      table.rows[t] = run_one(cfg, cells[t / n_seeds], cfg.seeds[t % n_seeds], keep_instances);
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t c = 0; c < cells.size(); ++c)
    table.aggregates.push_back(aggregate(cells[c], table.rows, c * n_seeds, n_seeds));
  return table;
}

std::string table_to_csv(const ResultTable& table) {
  std::ostringstream out;
  out << "n_apps,max_qos,alpha,relax,seed,status,cost_processing,cost_storage,cost_sensor_comm,"
         "cost_inter_comm,cost_user_comm,cost_total,modules_cloud,modules_fog,unprotected_gb,"
         "nodes_explored,prune_bound,prune_capacity,prune_qos,prune_security\n";
  auto emit = [&](const ResultRow& r) {
    out << r.cell.n_apps << ',' << num(r.cell.max_qos) << ',' << alpha_text(r.cell.alpha) << ','
        << r.cell.relax.name() << ',' << (r.seed ? std::to_string(*r.seed) : "mean") << ','
        << csv_escape(r.status) << ',';
    if (r.solved) {
      out << num(r.cost.processing) << ',' << num(r.cost.storage) << ','
          << num(r.cost.sensor_comm) << ',' << num(r.cost.inter_comm) << ','
          << num(r.cost.user_comm) << ',' << num(r.cost.total) << ',' << num(r.modules_cloud)
          << ',' << num(r.modules_fog) << ',' << num(r.unprotected_data) << ',';
    } else {
      out << ",,,,,,,,,";
    }
    out << r.stats.nodes_explored << ',' << r.stats.prune_bound << ',' << r.stats.prune_capacity
        << ',' << r.stats.prune_qos << ',' << r.stats.prune_security << '\n';
  };
  for (const auto& r : table.rows) emit(r);
  for (const auto& r : table.aggregates) emit(r);
  return out.str();
}

std::string timings_to_csv(const ResultTable& table) {
  std::ostringstream out;
  out << "n_apps,max_qos,alpha,relax,seed,wall_seconds\n";
  for (const auto& r : table.rows) {
    out << r.cell.n_apps << ',' << num(r.cell.max_qos) << ',' << alpha_text(r.cell.alpha) << ','
        << r.cell.relax.name() << ',' << (r.seed ? std::to_string(*r.seed) : "") << ','
        << num(r.wall_seconds) << '\n';
  }
  return out.str();
}

nlohmann::ordered_json placements_to_json(const ResultTable& table) {
  auto doc = nlohmann::ordered_json::array();
  for (const auto& r : table.rows) {
    nlohmann::ordered_json entry;
    entry["n_apps"] = r.cell.n_apps;
    entry["max_qos"] = r.cell.max_qos;
    entry["alpha"] = r.cell.alpha ? nlohmann::ordered_json(*r.cell.alpha) : nullptr;
    entry["relax"] = r.cell.relax.name();
    entry["seed"] = r.seed.value_or(0);
    entry["status"] = r.status;
    entry["placement"] = r.placement ? placement_to_json(*r.placement) : nullptr;
    doc.push_back(std::move(entry));
  }
  return doc;
}

bool TrendReport::all_pass() const {
  return std::all_of(trends.begin(), trends.end(),
                     [](const TrendResult& t) { return t.status != TrendStatus::Fail; });
}

const TrendResult* TrendReport::find(const std::string& name) const {
  for (const auto& t : trends)
    if (t.name == name) return &t;
  return nullptr;
}

namespace {

// Cells are compared by value; alpha nullopt sorts first.
using CellKey = std::tuple<std::size_t, double, int, double, bool, bool>;

CellKey key_of(std::size_t n, double qos, const std::optional<double>& alpha, Relaxations r) {
  return {n, qos, alpha ? 1 : 0, alpha.value_or(0.0), r.drop_qos, r.drop_security};
}

class RowIndex {
 public:
  explicit RowIndex(const ResultTable& table) {
    for (const auto& r : table.rows) {
      if (!r.seed) continue;
      rows_[{key_of(r.cell.n_apps, r.cell.max_qos, r.cell.alpha, r.cell.relax), *r.seed}] = &r;
      n_apps.insert(r.cell.n_apps);
      max_qos.insert(r.cell.max_qos);
      alpha.insert(r.cell.alpha);
      relax.insert({r.cell.relax.drop_qos, r.cell.relax.drop_security});
      seeds.insert(*r.seed);
    }
  }

  const ResultRow* get(std::size_t n, double q, const std::optional<double>& a, Relaxations r,
                       std::uint64_t seed) const {
    auto it = rows_.find({key_of(n, q, a, r), seed});
    return it == rows_.end() ? nullptr : it->second;
  }

  std::set<std::size_t> n_apps;
  std::set<double> max_qos;
  std::set<std::optional<double>> alpha;
  std::set<std::pair<bool, bool>> relax;
  std::set<std::uint64_t> seeds;

 private:
  std::map<std::pair<CellKey, std::uint64_t>, const ResultRow*> rows_;
};

bool geq(double a, double b) { return a >= b - 1e-9 * std::max(1.0, std::abs(b)); }

void finish(TrendResult& t) {
  if (t.comparisons == 0)
    t.status = TrendStatus::Vacuous;
  else
    t.status = t.violations == 0 ? TrendStatus::Pass : TrendStatus::Fail;
}

TrendResult make_trend(std::string name, std::string description, bool per_seed) {
  TrendResult t;
  t.name = std::move(name);
  t.description = std::move(description);
  t.per_seed = per_seed;
  return t;
}

Relaxations relax_of(const std::pair<bool, bool>& p) { return {p.first, p.second}; }

std::string describe(std::size_t n, double q, const std::optional<double>& a, Relaxations r,
                     std::uint64_t seed) {
  return "n_apps=" + std::to_string(n) + " max_qos=" + num(q) + " alpha=" + alpha_text(a) +
         " relax=" + r.name() + " seed=" + std::to_string(seed);
}

}  // namespace

TrendReport check_trends(const ResultTable& table) {
  const RowIndex idx(table);
  TrendReport report;

  {
    auto t = make_trend("cost_vs_apps", "cost nondecreasing in the number of applications", true);
    for (double q : idx.max_qos)
      for (const auto& a : idx.alpha)
        for (const auto& rp : idx.relax)
          for (auto seed : idx.seeds) {
            const ResultRow* prev = nullptr;
            for (auto n : idx.n_apps) {
              const auto* row = idx.get(n, q, a, relax_of(rp), seed);
              if (!row || !row->solved) {
                prev = nullptr;
                continue;
              }
              if (prev) {
                ++t.comparisons;
                if (!geq(row->cost.total, prev->cost.total)) {
                  ++t.violations;
                  if (t.observed.empty())
                    t.observed = "first violation at " + describe(n, q, a, relax_of(rp), seed);
                }
              }
              prev = row;
            }
          }
    finish(t);
    report.trends.push_back(t);
  }

  {
    auto t = make_trend("cost_vs_qos", "cost at a tighter max_qos >= cost at a looser one", true);
    double sum_tight = 0.0, sum_loose = 0.0;
    if (idx.max_qos.size() >= 2) {
      const double tight = *idx.max_qos.begin();
      const double loose = *idx.max_qos.rbegin();
      for (auto n : idx.n_apps)
        for (const auto& a : idx.alpha)
          for (const auto& rp : idx.relax) {
            if (rp.first) continue;  // QoS dropped: max_qos has no effect
            for (auto seed : idx.seeds) {
              const auto* lo = idx.get(n, tight, a, relax_of(rp), seed);
              const auto* hi = idx.get(n, loose, a, relax_of(rp), seed);
              if (!lo || !hi || !lo->solved || !hi->solved) continue;
              ++t.comparisons;
              sum_tight += lo->cost.total;
              sum_loose += hi->cost.total;
              if (!geq(lo->cost.total, hi->cost.total)) {
                ++t.violations;
                if (t.observed.empty())
                  t.observed = "first violation at " + describe(n, tight, a, relax_of(rp), seed) + "; ";
              }
            }
          }
      if (t.comparisons > 0) {
        t.observed += "mean cost " + num(sum_tight / t.comparisons) + " at max_qos=" + num(tight) +
                      " vs " + num(sum_loose / t.comparisons) + " at max_qos=" + num(loose);
      }
    }
    finish(t);
    report.trends.push_back(t);
  }

  {
    auto t = make_trend("cost_vs_alpha", "cost nondecreasing in alpha; once infeasible, stays infeasible", true);
    for (auto n : idx.n_apps)
      for (double q : idx.max_qos)
        for (const auto& rp : idx.relax) {
          if (rp.second) continue;  // security dropped: alpha has no effect
          for (auto seed : idx.seeds) {
            const ResultRow* prev = nullptr;
            bool seen_infeasible = false;
            for (const auto& a : idx.alpha) {
              if (!a) continue;
              const auto* row = idx.get(n, q, a, relax_of(rp), seed);
              if (!row) continue;
              if (row->status == to_string(SolveStatus::Infeasible)) {
                seen_infeasible = true;
                prev = nullptr;
                continue;
              }
              if (!row->solved) {
                prev = nullptr;
                continue;
              }
              if (seen_infeasible) {
                ++t.comparisons;
                ++t.violations;
                if (t.observed.empty())
                  t.observed = "feasible after infeasible at " + describe(n, q, a, relax_of(rp), seed);
                continue;
              }
              if (prev) {
                ++t.comparisons;
                if (!geq(row->cost.total, prev->cost.total)) {
                  ++t.violations;
                  if (t.observed.empty())
                    t.observed = "first violation at " + describe(n, q, a, relax_of(rp), seed);
                }
              }
              prev = row;
            }
          }
        }
    finish(t);
    report.trends.push_back(t);
  }

  {
    auto t = make_trend("fog_vs_qos", "mean fog-module count at a tighter max_qos >= at a looser one", false);
    if (idx.max_qos.size() >= 2) {
      const double tight = *idx.max_qos.begin();
      const double loose = *idx.max_qos.rbegin();
      double fog_tight = 0.0, fog_loose = 0.0;
      std::size_t pairs = 0;
      for (auto n : idx.n_apps)
        for (const auto& a : idx.alpha)
          for (const auto& rp : idx.relax) {
            if (rp.first) continue;
            for (auto seed : idx.seeds) {
              const auto* lo = idx.get(n, tight, a, relax_of(rp), seed);
              const auto* hi = idx.get(n, loose, a, relax_of(rp), seed);
              if (!lo || !hi || !lo->solved || !hi->solved) continue;
              ++pairs;
              fog_tight += lo->modules_fog;
              fog_loose += hi->modules_fog;
            }
          }
      if (pairs > 0) {
        t.comparisons = 1;
        fog_tight /= pairs;
        fog_loose /= pairs;
        if (!geq(fog_tight, fog_loose)) t.violations = 1;
        t.observed = "mean fog modules " + num(fog_tight) + " at max_qos=" + num(tight) + " vs " +
                     num(fog_loose) + " at max_qos=" + num(loose) + " over " +
                     std::to_string(pairs) + " paired runs";
      }
    }
    finish(t);
    report.trends.push_back(t);
  }

  {
    auto t = make_trend("unprotected_noqos", "mean unprotected data with QoS and security dropped <= with only security "
                  "dropped", false);
    const Relaxations both = Relaxations::both();
    const Relaxations sec = Relaxations::security_only();
    if (idx.relax.count({true, true}) && idx.relax.count({false, true})) {
      for (double q : idx.max_qos) {
        double noqos = 0.0, qos = 0.0;
        std::size_t pairs = 0;
        for (auto n : idx.n_apps)
          for (const auto& a : idx.alpha)
            for (auto seed : idx.seeds) {
              const auto* x = idx.get(n, q, a, both, seed);
              const auto* y = idx.get(n, q, a, sec, seed);
              if (!x || !y || !x->solved || !y->solved) continue;
              ++pairs;
              noqos += x->unprotected_data;
              qos += y->unprotected_data;
            }
        if (pairs == 0) continue;
        ++t.comparisons;
        noqos /= pairs;
        qos /= pairs;
        if (!geq(qos, noqos)) ++t.violations;
        if (!t.observed.empty()) t.observed += "; ";
        t.observed += "max_qos=" + num(q) + ": NoQoS " + num(noqos) + " Gb vs " + num(qos) + " Gb";
      }
    }
    finish(t);
    report.trends.push_back(t);
  }
  return report;
}

std::string trends_to_text(const TrendReport& report) {
  std::ostringstream out;
  for (const auto& t : report.trends) {
    const char* status = t.status == TrendStatus::Pass   ? "PASS"
                         : t.status == TrendStatus::Fail ? "FAIL"
                                                         : "VACUOUS";
    out << t.name << ": " << status << " (" << (t.per_seed ? "per seed" : "means")
        << ", comparisons=" << t.comparisons << ", violations=" << t.violations << ")\n"
        << "  " << t.description << "\n";
    if (!t.observed.empty()) out << "  observed: " << t.observed << "\n";
  }
  return out.str();
}

std::vector<std::string> preset_names() { return {"fig4", "fig5", "fig6", "fig7"}; }

ExperimentConfig preset_experiment(const std::string& name) {
  ExperimentConfig cfg;
  cfg.name = name;
  for (std::uint64_t s = 0; s < 20; ++s) cfg.seeds.push_back(s);
  const std::vector<std::size_t> one_to_seven{1, 2, 3, 4, 5, 6, 7};
  if (name == "fig4" || name == "fig6") {
    cfg.grid = {one_to_seven, {1.5, 3.0}, {std::nullopt}, {Relaxations::none()}};
  } else if (name == "fig5") {
    cfg.grid = {{4}, {1.5, 3.0}, {0.0, 0.25, 0.5, 0.75, 1.0}, {Relaxations::none()}};
  } else if (name == "fig7") {
    cfg.grid = {one_to_seven, {1.5, 3.0}, {0.25},
                {Relaxations::both(), Relaxations::security_only()}};
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected fig4, fig5, fig6 or fig7)");
  }
  return cfg;
}

nlohmann::ordered_json experiment_to_json(const ExperimentConfig& cfg) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["name"] = cfg.name;
  doc["seeds"] = cfg.seeds;
  ordered_json grid;
  grid["n_apps"] = cfg.grid.n_apps;
  grid["max_qos"] = cfg.grid.max_qos;
  auto alpha = ordered_json::array();
  for (const auto& a : cfg.grid.alpha) alpha.push_back(a ? ordered_json(*a) : ordered_json(nullptr));
  grid["alpha"] = std::move(alpha);
  auto relax = ordered_json::array();
  for (const auto& r : cfg.grid.relax) relax.push_back(r.name());
  grid["relax"] = std::move(relax);
  doc["grid"] = std::move(grid);
  doc["solver"] = {{"time_limit", cfg.solve.time_limit},
                   {"node_order", cfg.solve.node_order == NodeOrder::Input ? "input" : "cheapest"},
                   {"tolerance", cfg.solve.tolerance}};
  doc["scenario"] = config_to_json(cfg.base);
  return doc;
}

ExperimentConfig experiment_from_json(const nlohmann::ordered_json& doc) {
  using json_detail::ObjectReader;
  ExperimentConfig cfg;
  ObjectReader r(doc, "experiment");
  if (r.has("name")) cfg.name = r.string("name");

  const auto& seeds = r.at("seeds");
  if (seeds.is_array()) {
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const auto v = json_detail::as_integer(seeds[s], "experiment.seeds");
      if (v < 0) throw FormatError("experiment.seeds: must be nonnegative");
      cfg.seeds.push_back(static_cast<std::uint64_t>(v));
    }
  } else {
    ObjectReader sr(seeds, "experiment.seeds");
    const auto first = sr.has("first") ? sr.integer("first") : 0;
    const auto count = sr.integer("count");
    sr.finish();
    if (first < 0 || count < 0) throw FormatError("experiment.seeds: must be nonnegative");
    for (std::int64_t s = 0; s < count; ++s) cfg.seeds.push_back(static_cast<std::uint64_t>(first + s));
  }

  ObjectReader g(r.at("grid"), "experiment.grid");
  for (const auto& v : json_detail::as_array(g.at("n_apps"), g.child("n_apps"))) {
    const auto n = json_detail::as_integer(v, g.child("n_apps"));
    if (n < 1) throw FormatError(g.child("n_apps") + ": must be positive");
    cfg.grid.n_apps.push_back(static_cast<std::size_t>(n));
  }
  for (const auto& v : json_detail::as_array(g.at("max_qos"), g.child("max_qos")))
    cfg.grid.max_qos.push_back(json_detail::as_number(v, g.child("max_qos")));
  if (const auto* alpha = g.find("alpha")) {
    for (const auto& v : json_detail::as_array(*alpha, g.child("alpha"))) {
      if (v.is_null())
        cfg.grid.alpha.push_back(std::nullopt);
      else
        cfg.grid.alpha.push_back(json_detail::as_number(v, g.child("alpha")));
    }
  } else {
    cfg.grid.alpha.push_back(std::nullopt);
  }
  if (const auto* relax = g.find("relax")) {
    for (const auto& v : json_detail::as_array(*relax, g.child("relax"))) {
      if (!v.is_string()) throw FormatError(g.child("relax") + ": expected strings");
      auto parsed = parse_relaxations(v.get<std::string>());
      if (!parsed) throw FormatError(g.child("relax") + ": unknown relaxation '" + v.get<std::string>() + "'");
      cfg.grid.relax.push_back(*parsed);
    }
  } else {
    cfg.grid.relax.push_back(Relaxations::none());
  }
  g.finish();

  if (const auto* solver = r.find("solver")) {
    ObjectReader sr(*solver, "experiment.solver");
    cfg.solve.time_limit = sr.number_or("time_limit", cfg.solve.time_limit);
    cfg.solve.tolerance = sr.number_or("tolerance", cfg.solve.tolerance);
    if (sr.has("node_order")) {
      const auto order = sr.string("node_order");
      if (order == "input")
        cfg.solve.node_order = NodeOrder::Input;
      else if (order == "cheapest")
        cfg.solve.node_order = NodeOrder::CheapestFirst;
      else
        throw FormatError("experiment.solver.node_order: expected input or cheapest");
    }
    sr.finish();
  }
  if (const auto* scenario = r.find("scenario")) cfg.base = config_from_json(*scenario);
  r.finish();

  if (cfg.grid.n_apps.empty() || cfg.grid.max_qos.empty())
    throw ConfigError("experiment grid needs at least one n_apps and one max_qos value");
  for (const auto& a : cfg.grid.alpha)
    if (a && !(*a >= 0.0 && *a <= 1.0)) throw ConfigError("alpha values must lie in [0, 1]");
  if (!(cfg.solve.time_limit > 0.0)) throw ConfigError("time_limit must be positive");
  validate_config(cfg.base);
  return cfg;
}

}  // namespace fogplace
