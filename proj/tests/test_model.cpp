#include <algorithm>

#include "doctest.h"
#include "fogplace/instance_io.hpp"
#include "fogplace/model.hpp"
#include "test_support.hpp"

using namespace fogplace;
using namespace fogplace::testing;

namespace {

bool mentions(const ValidationReport& report, const std::string& text) {
  return std::any_of(report.begin(), report.end(),
                     [&](const Violation& v) { return v.message.find(text) != std::string::npos; });
}

}  // namespace

TEST_CASE("security levels map to 1, 2, 3 in order") {
  CHECK(numeric(SecurityLevel::Low) == 1);
  CHECK(numeric(SecurityLevel::Medium) == 2);
  CHECK(numeric(SecurityLevel::High) == 3);
  CHECK(SecurityLevel::Low < SecurityLevel::Medium);
  CHECK(SecurityLevel::Medium < SecurityLevel::High);
  CHECK(parse_security_level("high") == SecurityLevel::High);
  CHECK_FALSE(parse_security_level("HIGH"));
}

TEST_CASE("validate_instance") {
  SUBCASE("well-formed 3-node, 1-app instance is clean") {
    auto inst = three_node_instance({chain_app("a1", 3)});
    CHECK(validate_instance(inst).empty());
  }
  SUBCASE("inter_traffic length must be n-1") {
    auto inst = three_node_instance({chain_app("a1", 3)});
    inst.apps[0].inter_traffic = {0.1, 0.2, 0.3};
    auto report = validate_instance(inst);
    REQUIRE(report.size() == 1);
    CHECK(report[0].path == "apps[0].inter_traffic");
    CHECK(mentions(report, "edge count must be n-1 = 2"));
  }
  SUBCASE("fog node outside the farm") {
    auto inst = three_node_instance({chain_app("a1", 3)});
    inst.farm = {100.0, 100.0};
    inst.nodes[1].position = Point{-5.0, 10.0};
    inst.nodes[2].position = Point{50.0, 50.0};
    auto report = validate_instance(inst);
    REQUIRE(report.size() == 1);
    CHECK(report[0].path == "nodes[1].position");
    CHECK(mentions(report, "fog node outside farm rectangle"));
  }
  SUBCASE("negative and non-finite values, bad link tables") {
    auto inst = three_node_instance({chain_app("a1", 2)});
    inst.nodes[0].proc_cost = -1.0;
    inst.apps[0].modules[1].stor_req = std::numeric_limits<double>::infinity();
    inst.apps[0].qos_threshold = 0.0;
    inst.links.delay[1][1] = 0.2;
    inst.links.bw_cost.pop_back();
    auto report = validate_instance(inst);
    CHECK(mentions(report, "must be nonnegative"));
    CHECK(mentions(report, "must be finite"));
    CHECK(mentions(report, "self-loop entry must be 0"));
    CHECK(mentions(report, "one row per node"));
    CHECK(mentions(report, "must be positive"));
  }
  SUBCASE("duplicate ids, missing fog geometry, empty chain") {
    auto inst = three_node_instance({chain_app("a1", 2), chain_app("a1", 2)});
    inst.nodes[2].id = "fogA";
    inst.nodes[1].tx_range.reset();
    inst.apps.push_back(Application{"a3", {}, 0.0, {}, 0.0, 1.0, SecurityLevel::Low});
    auto report = validate_instance(inst);
    CHECK(mentions(report, "duplicate node id"));
    CHECK(mentions(report, "duplicate app id"));
    CHECK(mentions(report, "transmission range"));
    CHECK(mentions(report, "at least one module"));
  }
  SUBCASE("idempotent and side-effect free") {
    auto inst = three_node_instance({chain_app("a1", 3)});
    inst.apps[0].inter_traffic.push_back(1.0);
    const Instance copy = inst;
    auto first = validate_instance(inst);
    auto second = validate_instance(inst);
    REQUIRE(first.size() == second.size());
    for (std::size_t v = 0; v < first.size(); ++v) {
      CHECK(first[v].path == second[v].path);
      CHECK(first[v].message == second[v].message);
    }
    CHECK(inst == copy);
  }
}

TEST_CASE("placement_is_consistent") {
  const auto inst = three_node_instance({chain_app("a1", 3), chain_app("a2", 3)});

  SUBCASE("identity edge map is consistent") {
    auto p = placement_from_assignment(inst, {0, 1, 1, 2, 2, 0});
    CHECK(placement_is_consistent(inst, p));
    CHECK(p.edge_map.at({"a1", 0}) == std::make_pair(std::string("cloud"), std::string("fogA")));
  }
  SUBCASE("edge not matching its endpoints") {
    auto p = placement_from_assignment(inst, {0, 1, 1, 2, 2, 0});
    p.edge_map[{"a1", 0}] = {"cloud", "fogB"};
    CHECK_FALSE(placement_is_consistent(inst, p));
  }
  SUBCASE("missing module") {
    auto p = placement_from_assignment(inst, {0, 1, 1, 2, 2, 0});
    p.assign.erase({"a2", 1});
    CHECK_FALSE(placement_is_consistent(inst, p));
  }
  SUBCASE("missing or extra edge") {
    auto p = placement_from_assignment(inst, {0, 1, 1, 2, 2, 0});
    p.edge_map.erase({"a2", 1});
    CHECK_FALSE(placement_is_consistent(inst, p));
  }
  SUBCASE("unknown ids are referential errors") {
    auto p = placement_from_assignment(inst, {0, 1, 1, 2, 2, 0});
    p.assign[{"a1", 0}] = "nowhere";
    CHECK_THROWS_AS(placement_is_consistent(inst, p), ReferenceError);
    auto q = placement_from_assignment(inst, {0, 1, 1, 2, 2, 0});
    q.assign[{"ghost", 0}] = "cloud";
    CHECK_THROWS_AS(placement_is_consistent(inst, q), ReferenceError);
    auto r = placement_from_assignment(inst, {0, 1, 1, 2, 2, 0});
    r.edge_map[{"a1", 2}] = {"cloud", "cloud"};
    CHECK_THROWS_AS(placement_is_consistent(inst, r), ReferenceError);
  }
}

TEST_CASE("property: identity edge maps are consistent, any single perturbation is not") {
  const auto inst = three_node_instance({chain_app("a1", 3), chain_app("a2", 2)});
  const std::size_t n = inst.nodes.size();
  // All 3^5 assignments.
  Assignment a(inst.module_count(), 0);
  std::size_t checked = 0;
  while (true) {
    auto p = placement_from_assignment(inst, a);
    REQUIRE(placement_is_consistent(inst, p));
    CHECK(assignment_from_placement(inst, p) == a);
    for (const auto& [ref, pair] : p.edge_map) {
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
          std::pair<std::string, std::string> other{inst.nodes[u].id, inst.nodes[v].id};
          if (other == pair) continue;
          auto q = p;
          q.edge_map[ref] = other;
          CHECK_FALSE(placement_is_consistent(inst, q));
        }
    }
    ++checked;
    std::size_t pos = a.size();
    while (pos > 0 && ++a[pos - 1] == n) a[--pos] = 0;
    if (pos == 0) break;
  }
  CHECK(checked == 243);
}

TEST_CASE("instance files") {
  auto inst = three_node_instance({chain_app("a1", 3), chain_app("a2", 1, SecurityLevel::High)});
  inst.apps[0].modules[1].exec_delay = 0.1 + 0.2;  // not exactly representable in short decimal

  SUBCASE("write then read is lossless") {
    const auto text = dump_document(instance_to_json(inst));
    const auto back = instance_from_json(parse_document(text));
    CHECK(back == inst);
    CHECK(dump_document(instance_to_json(back)) == text);
  }
  SUBCASE("unknown fields are rejected at every level") {
    auto doc = instance_to_json(inst);
    auto top = doc;
    top["extra"] = 1;
    CHECK_THROWS_AS(instance_from_json(top), FormatError);
    auto node = doc;
    node["nodes"][1]["colour"] = "red";
    CHECK_THROWS_AS(instance_from_json(node), FormatError);
    auto mod = doc;
    mod["apps"][0]["modules"][0]["cpu"] = 1.0;
    CHECK_THROWS_AS(instance_from_json(mod), FormatError);
    auto links = doc;
    links["links"]["jitter"] = nlohmann::ordered_json::array();
    CHECK_THROWS_AS(instance_from_json(links), FormatError);
  }
  SUBCASE("type errors and missing fields") {
    auto doc = instance_to_json(inst);
    auto missing = doc;
    missing["apps"][0].erase("qos_threshold");
    CHECK_THROWS_AS(instance_from_json(missing), FormatError);
    auto wrong = doc;
    wrong["nodes"][0]["proc_cost"] = "cheap";
    CHECK_THROWS_AS(instance_from_json(wrong), FormatError);
    auto level = doc;
    level["apps"][0]["security_req"] = "extreme";
    CHECK_THROWS_AS(instance_from_json(level), FormatError);
    CHECK_THROWS_AS(parse_document("{not json"), FormatError);
  }
  SUBCASE("placement documents round-trip") {
    auto p = placement_from_assignment(inst, {1, 1, 2, 0});
    auto back = placement_from_json(placement_to_json(p));
    CHECK(back == p);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(read_instance("/nonexistent/instance.json"), FileError);
  }
}
