#include "fogplace/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace fogplace {

using nlohmann::ordered_json;

namespace json_detail {

ObjectReader::ObjectReader(const ordered_json& obj, std::string path)
    : obj_(obj), path_(std::move(path)) {
  if (!obj_.is_object()) throw FormatError(path_ + ": expected an object");
}

bool ObjectReader::has(const std::string& key) const { return obj_.contains(key); }

const ordered_json* ObjectReader::find(const std::string& key) {
  auto it = obj_.find(key);
  if (it == obj_.end()) return nullptr;
  used_.push_back(key);
  return &*it;
}

const ordered_json& ObjectReader::at(const std::string& key) {
  const auto* value = find(key);
  if (!value) throw FormatError(child(key) + ": missing required field");
  return *value;
}

double ObjectReader::number(const std::string& key) { return as_number(at(key), child(key)); }

double ObjectReader::number_or(const std::string& key, double fallback) {
  const auto* value = find(key);
  return value ? as_number(*value, child(key)) : fallback;
}

std::string ObjectReader::string(const std::string& key) {
  const auto& value = at(key);
  if (!value.is_string()) throw FormatError(child(key) + ": expected a string");
  return value.get<std::string>();
}

bool ObjectReader::boolean_or(const std::string& key, bool fallback) {
  const auto* value = find(key);
  if (!value) return fallback;
  if (!value->is_boolean()) throw FormatError(child(key) + ": expected a boolean");
  return value->get<bool>();
}

std::int64_t ObjectReader::integer(const std::string& key) {
  return as_integer(at(key), child(key));
}

void ObjectReader::finish() const {
  for (const auto& [key, value] : obj_.items()) {
    if (std::find(used_.begin(), used_.end(), key) == used_.end())
      throw FormatError(child(key) + ": unknown field");
  }
}

double as_number(const ordered_json& value, const std::string& path) {
  if (!value.is_number()) throw FormatError(path + ": expected a number");
  return value.get<double>();
}

std::int64_t as_integer(const ordered_json& value, const std::string& path) {
  if (!value.is_number_integer()) throw FormatError(path + ": expected an integer");
  return value.get<std::int64_t>();
}

const ordered_json& as_array(const ordered_json& value, const std::string& path) {
  if (!value.is_array()) throw FormatError(path + ": expected an array");
  return value;
}

}  // namespace json_detail

using json_detail::ObjectReader;

namespace {

ordered_json node_to_json(const ResourceNode& n) {
  ordered_json j;
  j["id"] = n.id;
  j["tier"] = to_string(n.tier);
  j["proc_capacity"] = n.proc_capacity;
  j["mem_capacity"] = n.mem_capacity;
  j["stor_capacity"] = n.stor_capacity;
  j["proc_cost"] = n.proc_cost;
  j["stor_cost"] = n.stor_cost;
  j["sensor_bw_cost"] = n.sensor_bw_cost;
  j["user_bw_cost"] = n.user_bw_cost;
  j["sensor_delay"] = n.sensor_delay;
  j["user_delay"] = n.user_delay;
  if (n.position) j["position"] = {n.position->x, n.position->y};
  if (n.tx_range) j["tx_range"] = *n.tx_range;
  if (n.security_rating) j["security_rating"] = to_string(*n.security_rating);
  return j;
}

SecurityLevel read_level(ObjectReader& r, const std::string& key) {
  auto text = r.string(key);
  auto level = parse_security_level(text);
  if (!level) throw FormatError(r.child(key) + ": expected low, medium or high, got '" + text + "'");
  return *level;
}

ResourceNode node_from_json(const ordered_json& doc, const std::string& path) {
  ObjectReader r(doc, path);
  ResourceNode n;
  n.id = r.string("id");
  auto tier_text = r.string("tier");
  auto tier = parse_tier(tier_text);
  if (!tier) throw FormatError(r.child("tier") + ": expected cloud or fog, got '" + tier_text + "'");
  n.tier = *tier;
  n.proc_capacity = r.number("proc_capacity");
  n.mem_capacity = r.number("mem_capacity");
  n.stor_capacity = r.number("stor_capacity");
  n.proc_cost = r.number("proc_cost");
  n.stor_cost = r.number("stor_cost");
  n.sensor_bw_cost = r.number("sensor_bw_cost");
  n.user_bw_cost = r.number("user_bw_cost");
  n.sensor_delay = r.number("sensor_delay");
  n.user_delay = r.number("user_delay");
  if (const auto* pos = r.find("position")) {
    const auto& arr = json_detail::as_array(*pos, r.child("position"));
    if (arr.size() != 2) throw FormatError(r.child("position") + ": expected [x, y]");
    n.position = Point{json_detail::as_number(arr[0], r.child("position[0]")),
                       json_detail::as_number(arr[1], r.child("position[1]"))};
  }
  if (r.has("tx_range")) n.tx_range = r.number("tx_range");
  if (r.has("security_rating")) n.security_rating = read_level(r, "security_rating");
  r.finish();
  return n;
}

std::vector<std::vector<double>> table_from_json(const ordered_json& doc, const std::string& path) {
  std::vector<std::vector<double>> table;
  const auto& rows = json_detail::as_array(doc, path);
  for (std::size_t u = 0; u < rows.size(); ++u) {
    const std::string row_path = path + "[" + std::to_string(u) + "]";
    const auto& row = json_detail::as_array(rows[u], row_path);
    auto& out = table.emplace_back();
    for (std::size_t v = 0; v < row.size(); ++v)
      out.push_back(json_detail::as_number(row[v], row_path + "[" + std::to_string(v) + "]"));
  }
  return table;
}

ordered_json app_to_json(const Application& app) {
  ordered_json j;
  j["id"] = app.id;
  auto modules = ordered_json::array();
  for (const auto& m : app.modules) {
    modules.push_back({{"proc_req", m.proc_req},
                       {"mem_req", m.mem_req},
                       {"stor_req", m.stor_req},
                       {"exec_delay", m.exec_delay}});
  }
  j["modules"] = std::move(modules);
  j["input_traffic"] = app.input_traffic;
  j["inter_traffic"] = app.inter_traffic;
  j["output_traffic"] = app.output_traffic;
  j["qos_threshold"] = app.qos_threshold;
  j["security_req"] = to_string(app.security_req);
  return j;
}

Application app_from_json(const ordered_json& doc, const std::string& path) {
  ObjectReader r(doc, path);
  Application app;
  app.id = r.string("id");
  const auto& modules = json_detail::as_array(r.at("modules"), r.child("modules"));
  for (std::size_t j = 0; j < modules.size(); ++j) {
    ObjectReader m(modules[j], r.child("modules[" + std::to_string(j) + "]"));
    AppModule mod;
    mod.proc_req = m.number("proc_req");
    mod.mem_req = m.number("mem_req");
    mod.stor_req = m.number("stor_req");
    mod.exec_delay = m.number("exec_delay");
    m.finish();
    app.modules.push_back(mod);
  }
  app.input_traffic = r.number("input_traffic");
  const auto& inter = json_detail::as_array(r.at("inter_traffic"), r.child("inter_traffic"));
  for (std::size_t j = 0; j < inter.size(); ++j)
    app.inter_traffic.push_back(
        json_detail::as_number(inter[j], r.child("inter_traffic[" + std::to_string(j) + "]")));
  app.output_traffic = r.number("output_traffic");
  app.qos_threshold = r.number("qos_threshold");
  app.security_req = read_level(r, "security_req");
  r.finish();
  return app;
}

}  // namespace

ordered_json instance_to_json(const Instance& inst) {
  ordered_json doc;
  doc["farm"] = {{"width", inst.farm.width}, {"height", inst.farm.height}};
  auto nodes = ordered_json::array();
  for (const auto& n : inst.nodes) nodes.push_back(node_to_json(n));
  doc["nodes"] = std::move(nodes);
  doc["links"] = {{"delay", inst.links.delay}, {"bw_cost", inst.links.bw_cost}};
  auto apps = ordered_json::array();
  for (const auto& app : inst.apps) apps.push_back(app_to_json(app));
  doc["apps"] = std::move(apps);
  return doc;
}

Instance instance_from_json(const ordered_json& doc) {
  ObjectReader r(doc, "instance");
  Instance inst;

  ObjectReader farm(r.at("farm"), "farm");
  inst.farm.width = farm.number("width");
  inst.farm.height = farm.number("height");
  farm.finish();

  const auto& nodes = json_detail::as_array(r.at("nodes"), "nodes");
  for (std::size_t k = 0; k < nodes.size(); ++k)
    inst.nodes.push_back(node_from_json(nodes[k], "nodes[" + std::to_string(k) + "]"));

  ObjectReader links(r.at("links"), "links");
  inst.links.delay = table_from_json(links.at("delay"), "links.delay");
  inst.links.bw_cost = table_from_json(links.at("bw_cost"), "links.bw_cost");
  links.finish();

  const auto& apps = json_detail::as_array(r.at("apps"), "apps");
  for (std::size_t i = 0; i < apps.size(); ++i)
    inst.apps.push_back(app_from_json(apps[i], "apps[" + std::to_string(i) + "]"));

  r.finish();
  return inst;
}

ordered_json placement_to_json(const Placement& p) {
  // Grouped per app, in (app, index) order.
  ordered_json assign = ordered_json::object();
  for (const auto& [ref, node] : p.assign) assign[ref.app].push_back(node);
  ordered_json edges = ordered_json::object();
  for (const auto& [ref, pair] : p.edge_map)
    edges[ref.app].push_back(ordered_json::array({pair.first, pair.second}));
  return {{"assign", std::move(assign)}, {"edge_map", std::move(edges)}};
}

Placement placement_from_json(const ordered_json& doc) {
  ObjectReader r(doc, "placement");
  Placement p;
  ObjectReader assign(r.at("assign"), "placement.assign");
  for (const auto& [app, nodes] : doc.at("assign").items()) {
    const auto& arr = json_detail::as_array(assign.at(app), assign.child(app));
    for (std::size_t j = 0; j < arr.size(); ++j) {
      if (!arr[j].is_string()) throw FormatError(assign.child(app) + ": expected node ids");
      p.assign[{app, j}] = arr[j].get<std::string>();
    }
  }
  if (const auto* edges = r.find("edge_map")) {
    ObjectReader er(*edges, "placement.edge_map");
    for (const auto& [app, pairs] : edges->items()) {
      const auto& arr = json_detail::as_array(er.at(app), er.child(app));
      for (std::size_t j = 0; j < arr.size(); ++j) {
        if (!arr[j].is_array() || arr[j].size() != 2 || !arr[j][0].is_string() ||
            !arr[j][1].is_string())
          throw FormatError(er.child(app) + ": expected [from, to] node id pairs");
        p.edge_map[{app, j}] = {arr[j][0].get<std::string>(), arr[j][1].get<std::string>()};
      }
    }
  }
  r.finish();
  return p;
}

std::string dump_document(const ordered_json& doc) { return doc.dump(2) + "\n"; }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw FileError("error reading '" + path.string() + "'");
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FileError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw FileError("error writing '" + path.string() + "'");
}

ordered_json parse_document(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

Instance read_instance(const std::filesystem::path& path) {
  return instance_from_json(parse_document(read_text_file(path)));
}

void write_instance(const std::filesystem::path& path, const Instance& inst) {
  write_text_file(path, dump_document(instance_to_json(inst)));
}

}  // namespace fogplace
