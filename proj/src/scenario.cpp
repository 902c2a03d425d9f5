#include "fogplace/scenario.hpp"

#include <cmath>
#include <random>

#include "fogplace/instance_io.hpp"
#include "fogplace/security.hpp"

namespace fogplace {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t index)
      : engine_(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x5bd1e995ULL))) {}

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double draw(const Range& r) { return r.low + unit() * (r.high - r.low); }

 private:
  std::mt19937_64 engine_;
};

void check_range(const char* name, const Range& r) {
  if (!std::isfinite(r.low) || !std::isfinite(r.high) || r.low < 0.0 || r.low > r.high)
    throw ConfigError(std::string(name) + ": need 0 <= low <= high");
}

void check_tier(const char* name, const TierParams& t) {
  const double values[] = {t.proc_cost,    t.stor_cost,     t.comm_cost,
                           t.sensor_delay, t.user_delay,    t.proc_capacity,
                           t.mem_capacity, t.stor_capacity};
  for (double v : values)
    if (!std::isfinite(v) || v < 0.0)
      throw ConfigError(std::string(name) + ": parameters must be finite and nonnegative");
}

std::size_t high_security_count(const ScenarioConfig& cfg) {
  if (!cfg.alpha) return 0;
  return static_cast<std::size_t>(std::ceil(*cfg.alpha * static_cast<double>(cfg.n_apps) - 1e-9));
}

}  // namespace

void validate_config(const ScenarioConfig& cfg) {
  if (cfg.modules_per_app == 0) throw ConfigError("modules_per_app must be at least 1");
  check_range("proc_req", cfg.proc_req);
  check_range("mem_req", cfg.mem_req);
  check_range("stor_req", cfg.stor_req);
  check_range("input_traffic", cfg.input_traffic);
  check_range("inter_traffic", cfg.inter_traffic);
  check_range("output_traffic", cfg.output_traffic);
  if (!(cfg.min_qos > 0.0) || !(cfg.max_qos >= cfg.min_qos) || !std::isfinite(cfg.max_qos))
    throw ConfigError("qos: need 0 < min_qos <= max_qos");
  if (cfg.alpha && !(*cfg.alpha >= 0.0 && *cfg.alpha <= 1.0))
    throw ConfigError("alpha must lie in [0, 1]");
  check_tier("cloud", cfg.cloud);
  check_tier("fog", cfg.fog);
  for (double d : {cfg.cloud_fog_delay, cfg.fog_fog_delay, cfg.cloud_fog_bw_cost.value_or(0.0),
                   cfg.fog_fog_bw_cost.value_or(0.0)})
    if (!std::isfinite(d) || d < 0.0) throw ConfigError("link parameters must be nonnegative");
  if (!(cfg.farm.width > 0.0) || !(cfg.farm.height > 0.0))
    throw ConfigError("farm width and height must be positive");
  for (const auto& site : cfg.fog_sites) {
    const auto [x, y] = site.position;
    if (!(x >= 0.0 && y >= 0.0 && x <= cfg.farm.width && y <= cfg.farm.height))
      throw ConfigError("fog site outside farm rectangle");
    if (!(site.tx_range > 0.0)) throw ConfigError("fog site tx_range must be positive");
  }
  if (!(cfg.default_tx_range > 0.0)) throw ConfigError("default_tx_range must be positive");
  if (!(cfg.reference_mips > 0.0)) throw ConfigError("reference_mips must be positive");
  if (cfg.fixed_exec_delay && !(*cfg.fixed_exec_delay >= 0.0))
    throw ConfigError("fixed_exec_delay must be nonnegative");
}

Instance generate_instance(const ScenarioConfig& cfg) {
  validate_config(cfg);
  Instance inst;
  inst.farm = cfg.farm;

  auto make_node = [](std::string id, Tier tier, const TierParams& t) {
    ResourceNode n;
    n.id = std::move(id);
    n.tier = tier;
    n.proc_capacity = t.proc_capacity;
    n.mem_capacity = t.mem_capacity;
    n.stor_capacity = t.stor_capacity;
    n.proc_cost = t.proc_cost;
    n.stor_cost = t.stor_cost;
    n.sensor_bw_cost = t.comm_cost;
    n.user_bw_cost = t.comm_cost;
    n.sensor_delay = t.sensor_delay;
    n.user_delay = t.user_delay;
    return n;
  };

  inst.nodes.push_back(make_node("cloud", Tier::Cloud, cfg.cloud));
  Stream site_stream(cfg.seed, 0);
  for (std::size_t f = 0; f < cfg.n_fog; ++f) {
    auto node = make_node("fog" + std::to_string(f + 1), Tier::Fog, cfg.fog);
    if (f < cfg.fog_sites.size()) {
      node.position = cfg.fog_sites[f].position;
      node.tx_range = cfg.fog_sites[f].tx_range;
    } else {
      const double x = site_stream.draw({0.0, cfg.farm.width});
      const double y = site_stream.draw({0.0, cfg.farm.height});
      node.position = Point{x, y};
      node.tx_range = cfg.default_tx_range;
    }
    inst.nodes.push_back(std::move(node));
  }

  const std::size_t n_nodes = inst.nodes.size();
  const double cloud_bw = cfg.cloud_fog_bw_cost.value_or(cfg.cloud.comm_cost);
  const double fog_bw = cfg.fog_fog_bw_cost.value_or(cfg.fog.comm_cost);
  inst.links.delay.assign(n_nodes, std::vector<double>(n_nodes, 0.0));
  inst.links.bw_cost.assign(n_nodes, std::vector<double>(n_nodes, 0.0));
  for (std::size_t u = 0; u < n_nodes; ++u) {
    for (std::size_t v = 0; v < n_nodes; ++v) {
      if (u == v) continue;
      const bool cloud_link = inst.nodes[u].tier == Tier::Cloud || inst.nodes[v].tier == Tier::Cloud;
      inst.links.delay[u][v] = cloud_link ? cfg.cloud_fog_delay : cfg.fog_fog_delay;
      inst.links.bw_cost[u][v] = cloud_link ? cloud_bw : fog_bw;
    }
  }

  const std::size_t n_high = high_security_count(cfg);
  for (std::size_t i = 0; i < cfg.n_apps; ++i) {
    Stream s(cfg.seed, i + 1);
    Application app;
    app.id = "app" + std::to_string(i + 1);
    for (std::size_t j = 0; j < cfg.modules_per_app; ++j) {
      AppModule m;
      m.proc_req = s.draw(cfg.proc_req);
      m.mem_req = s.draw(cfg.mem_req);
      m.stor_req = s.draw(cfg.stor_req);
      m.exec_delay = cfg.fixed_exec_delay.value_or(m.proc_req / cfg.reference_mips);
      app.modules.push_back(m);
    }
    app.input_traffic = s.draw(cfg.input_traffic);
    for (std::size_t j = 0; j + 1 < cfg.modules_per_app; ++j)
      app.inter_traffic.push_back(s.draw(cfg.inter_traffic));
    app.output_traffic = s.draw(cfg.output_traffic);

    const double u_qos = s.unit();
    const double u_sec = s.unit();
    app.qos_threshold = cfg.min_qos + u_qos * (cfg.max_qos - cfg.min_qos);
    if (!cfg.alpha)
      app.security_req = static_cast<SecurityLevel>(1 + static_cast<int>(u_sec * 3.0));
    else if (i < n_high)
      app.security_req = SecurityLevel::High;
    else
      app.security_req = u_sec < 0.5 ? SecurityLevel::Low : SecurityLevel::Medium;
    inst.apps.push_back(std::move(app));
  }

  return rate_infrastructure(inst);
}

namespace {

using nlohmann::ordered_json;
using json_detail::ObjectReader;

ordered_json range_json(const Range& r) { return ordered_json::array({r.low, r.high}); }

ordered_json tier_json(const TierParams& t) {
  return {{"proc_cost", t.proc_cost},         {"stor_cost", t.stor_cost},
          {"comm_cost", t.comm_cost},         {"sensor_delay", t.sensor_delay},
          {"user_delay", t.user_delay},       {"proc_capacity", t.proc_capacity},
          {"mem_capacity", t.mem_capacity},   {"stor_capacity", t.stor_capacity}};
}

void read_range(ObjectReader& r, const std::string& key, Range& out) {
  const auto* v = r.find(key);
  if (!v) return;
  if (!v->is_array() || v->size() != 2)
    throw FormatError(r.child(key) + ": expected [low, high]");
  out.low = json_detail::as_number((*v)[0], r.child(key));
  out.high = json_detail::as_number((*v)[1], r.child(key));
}

void read_tier(ObjectReader& parent, const std::string& key, TierParams& t) {
  const auto* v = parent.find(key);
  if (!v) return;
  ObjectReader r(*v, parent.child(key));
  t.proc_cost = r.number_or("proc_cost", t.proc_cost);
  t.stor_cost = r.number_or("stor_cost", t.stor_cost);
  t.comm_cost = r.number_or("comm_cost", t.comm_cost);
  t.sensor_delay = r.number_or("sensor_delay", t.sensor_delay);
  t.user_delay = r.number_or("user_delay", t.user_delay);
  t.proc_capacity = r.number_or("proc_capacity", t.proc_capacity);
  t.mem_capacity = r.number_or("mem_capacity", t.mem_capacity);
  t.stor_capacity = r.number_or("stor_capacity", t.stor_capacity);
  r.finish();
}

std::size_t read_count(ObjectReader& r, const std::string& key, std::size_t fallback) {
  const auto* v = r.find(key);
  if (!v) return fallback;
  const auto n = json_detail::as_integer(*v, r.child(key));
  if (n < 0) throw FormatError(r.child(key) + ": must be nonnegative");
  return static_cast<std::size_t>(n);
}

void read_optional(ObjectReader& r, const std::string& key, std::optional<double>& out) {
  const auto* v = r.find(key);
  if (!v) return;
  if (v->is_null())
    out.reset();
  else
    out = json_detail::as_number(*v, r.child(key));
}

}  // namespace

ordered_json config_to_json(const ScenarioConfig& cfg) {
  ordered_json doc;
  doc["n_fog"] = cfg.n_fog;
  doc["n_apps"] = cfg.n_apps;
  doc["modules_per_app"] = cfg.modules_per_app;
  doc["proc_req"] = range_json(cfg.proc_req);
  doc["mem_req"] = range_json(cfg.mem_req);
  doc["stor_req"] = range_json(cfg.stor_req);
  doc["input_traffic"] = range_json(cfg.input_traffic);
  doc["inter_traffic"] = range_json(cfg.inter_traffic);
  doc["output_traffic"] = range_json(cfg.output_traffic);
  doc["min_qos"] = cfg.min_qos;
  doc["max_qos"] = cfg.max_qos;
  doc["alpha"] = cfg.alpha ? ordered_json(*cfg.alpha) : ordered_json(nullptr);
  doc["cloud"] = tier_json(cfg.cloud);
  doc["fog"] = tier_json(cfg.fog);
  doc["cloud_fog_delay"] = cfg.cloud_fog_delay;
  doc["fog_fog_delay"] = cfg.fog_fog_delay;
  doc["cloud_fog_bw_cost"] =
      cfg.cloud_fog_bw_cost ? ordered_json(*cfg.cloud_fog_bw_cost) : ordered_json(nullptr);
  doc["fog_fog_bw_cost"] =
      cfg.fog_fog_bw_cost ? ordered_json(*cfg.fog_fog_bw_cost) : ordered_json(nullptr);
  doc["farm"] = {{"width", cfg.farm.width}, {"height", cfg.farm.height}};
  auto sites = ordered_json::array();
  for (const auto& s : cfg.fog_sites)
    sites.push_back({{"position", {s.position.x, s.position.y}}, {"tx_range", s.tx_range}});
  doc["fog_sites"] = std::move(sites);
  doc["default_tx_range"] = cfg.default_tx_range;
  doc["reference_mips"] = cfg.reference_mips;
  doc["fixed_exec_delay"] =
      cfg.fixed_exec_delay ? ordered_json(*cfg.fixed_exec_delay) : ordered_json(nullptr);
  doc["seed"] = cfg.seed;
  return doc;
}

ScenarioConfig config_from_json(const ordered_json& doc, ScenarioConfig cfg) {
  ObjectReader r(doc, "config");
  cfg.n_fog = read_count(r, "n_fog", cfg.n_fog);
  cfg.n_apps = read_count(r, "n_apps", cfg.n_apps);
  cfg.modules_per_app = read_count(r, "modules_per_app", cfg.modules_per_app);
  read_range(r, "proc_req", cfg.proc_req);
  read_range(r, "mem_req", cfg.mem_req);
  read_range(r, "stor_req", cfg.stor_req);
  read_range(r, "input_traffic", cfg.input_traffic);
  read_range(r, "inter_traffic", cfg.inter_traffic);
  read_range(r, "output_traffic", cfg.output_traffic);
  cfg.min_qos = r.number_or("min_qos", cfg.min_qos);
  cfg.max_qos = r.number_or("max_qos", cfg.max_qos);
  read_optional(r, "alpha", cfg.alpha);
  read_tier(r, "cloud", cfg.cloud);
  read_tier(r, "fog", cfg.fog);
  cfg.cloud_fog_delay = r.number_or("cloud_fog_delay", cfg.cloud_fog_delay);
  cfg.fog_fog_delay = r.number_or("fog_fog_delay", cfg.fog_fog_delay);
  read_optional(r, "cloud_fog_bw_cost", cfg.cloud_fog_bw_cost);
  read_optional(r, "fog_fog_bw_cost", cfg.fog_fog_bw_cost);
  if (const auto* farm = r.find("farm")) {
    ObjectReader fr(*farm, "config.farm");
    cfg.farm.width = fr.number("width");
    cfg.farm.height = fr.number("height");
    fr.finish();
  }
  if (const auto* sites = r.find("fog_sites")) {
    const auto& arr = json_detail::as_array(*sites, "config.fog_sites");
    cfg.fog_sites.clear();
    for (std::size_t s = 0; s < arr.size(); ++s) {
      const std::string path = "config.fog_sites[" + std::to_string(s) + "]";
      ObjectReader sr(arr[s], path);
      const auto& pos = json_detail::as_array(sr.at("position"), path + ".position");
      if (pos.size() != 2) throw FormatError(path + ".position: expected [x, y]");
      FogSite site;
      site.position = {json_detail::as_number(pos[0], path + ".position"),
                       json_detail::as_number(pos[1], path + ".position")};
      site.tx_range = sr.number("tx_range");
      sr.finish();
      cfg.fog_sites.push_back(site);
    }
  }
  cfg.default_tx_range = r.number_or("default_tx_range", cfg.default_tx_range);
  cfg.reference_mips = r.number_or("reference_mips", cfg.reference_mips);
  read_optional(r, "fixed_exec_delay", cfg.fixed_exec_delay);
  if (const auto* seed = r.find("seed")) {
    if (!seed->is_number_unsigned() && !seed->is_number_integer())
      throw FormatError("config.seed: expected an integer");
    cfg.seed = seed->get<std::uint64_t>();
  }
  r.finish();
  return cfg;
}

}  // namespace fogplace
