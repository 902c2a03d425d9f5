#include <algorithm>

#include "doctest.h"
#include "fogplace/evaluate.hpp"
#include "fogplace/ilp.hpp"
#include "test_support.hpp"

using namespace fogplace;
using namespace fogplace::testing;

namespace {

std::size_t count_rows(const IlpModel& m, int equation) {
  return static_cast<std::size_t>(std::count_if(m.constraints.begin(), m.constraints.end(),
                                                [&](const Constraint& c) { return c.equation == equation; }));
}

template <class F>
void for_each_assignment(std::size_t modules, std::size_t nodes, F&& f) {
  Assignment a(modules, 0);
  while (true) {
    f(a);
    std::size_t pos = a.size();
    while (pos > 0 && ++a[pos - 1] == nodes) a[--pos] = 0;
    if (pos == 0) return;
  }
}

}  // namespace

TEST_CASE("variable and row counts") {
  SUBCASE("one app, three modules, three nodes") {
    const auto inst = three_node_instance({chain_app("a1", 3)});
    const auto m = build_model(inst, Relaxations::none());
    const auto xs = std::count_if(m.variables.begin(), m.variables.end(),
                                  [](const Variable& v) { return v.kind == Variable::Kind::Assign; });
    CHECK(xs == 9);
    CHECK(m.variables.size() == 9 + 18);
    CHECK(m.objective.size() == m.variables.size());
    CHECK(count_rows(m, 9) == 3);
    CHECK(count_rows(m, 14) == 2);
    CHECK(count_rows(m, 11) == 18);
    CHECK(count_rows(m, 7) == 1);
    CHECK(count_rows(m, 8) == 3);
    CHECK(count_rows(m, 2) == 3);
    CHECK(m.variables[m.x_index(0, 2, 1)].name == "x_1_3_2");
    CHECK(m.variables[m.z_index(0, 1, 2, 0)].name == "z_1_2_3_1");
  }
  SUBCASE("two apps") {
    const auto inst = three_node_instance({chain_app("a1", 3), chain_app("a2", 3)});
    const auto m = build_model(inst, Relaxations::none());
    CHECK(count_rows(m, 9) == 6);
    CHECK(m.variables.size() == 2 * (9 + 18));
  }
  SUBCASE("relaxations remove exactly their families") {
    const auto inst = three_node_instance({chain_app("a1", 3), chain_app("a2", 2)});
    const auto full = build_model(inst, Relaxations::none());
    const auto noqos = build_model(inst, Relaxations::both());
    CHECK(count_rows(noqos, 7) == 0);
    CHECK(count_rows(noqos, 8) == 0);
    CHECK(noqos.variables.size() == full.variables.size());
    CHECK(noqos.constraints.size() == full.constraints.size() - 2 - 5);
    const auto nosec = build_model(inst, Relaxations::security_only());
    CHECK(count_rows(nosec, 8) == 0);
    CHECK(count_rows(nosec, 7) == 2);
  }
  SUBCASE("unrated nodes") {
    auto inst = three_node_instance({chain_app("a1", 2)});
    inst.nodes[1].security_rating.reset();
    CHECK_THROWS_AS(build_model(inst, Relaxations::none()), UnratedNodeError);
    CHECK_NOTHROW(build_model(inst, Relaxations::security_only()));
  }
}

TEST_CASE("relaxation names") {
  for (auto r : {Relaxations::none(), Relaxations::both(), Relaxations::qos_only(),
                 Relaxations::security_only()})
    CHECK(parse_relaxations(r.name()) == r);
  CHECK(parse_relaxations("noqos") == Relaxations::both());
  CHECK_FALSE(parse_relaxations("all"));
}

TEST_CASE("LP export") {
  const auto inst = three_node_instance({chain_app("a1", 3), chain_app("a2", 2, SecurityLevel::High)});
  const auto m = build_model(inst, Relaxations::none());
  const auto text = export_lp(m);
  CHECK(text == export_lp(build_model(inst, Relaxations::none())));
  const auto binaries = text.find("Binaries");
  REQUIRE(binaries != std::string::npos);
  REQUIRE(text.find("Minimize") < text.find("Subject To"));
  REQUIRE(text.find("Subject To") < binaries);
  // One binary per variable, listed after the Binaries header.
  const auto tail = text.substr(binaries);
  std::size_t listed = 0;
  for (const auto& v : m.variables)
    if (tail.find(" " + v.name + "\n") != std::string::npos ||
        tail.find("\n" + v.name + "\n") != std::string::npos ||
        tail.find(" " + v.name + " ") != std::string::npos ||
        tail.find("\n" + v.name + " ") != std::string::npos)
      ++listed;
  CHECK(listed == m.variables.size());
  CHECK(text.find("eq8_app2_mod1:") != std::string::npos);
  CHECK(text.find("eq7_app1:") != std::string::npos);

  const auto relaxed = export_lp(build_model(inst, Relaxations::security_only()));
  CHECK(relaxed.find("eq8") == std::string::npos);
  CHECK(relaxed.find("eq7_app1:") != std::string::npos);
  CHECK(text.substr(text.size() - 4) == "End\n");
}

TEST_CASE("objective of the encoded placement equals eval_cost on every assignment") {
  const auto inst = random_instance(3, 2, 3, 2);
  const auto m = build_model(inst, Relaxations::none());
  std::size_t count = 0;
  for_each_assignment(inst.module_count(), inst.nodes.size(), [&](const Assignment& a) {
    const auto p = placement_from_assignment(inst, a);
    const auto values = encode_placement(m, inst, p);
    const double obj = objective_value(m, values);
    const double direct = eval_cost(inst, p).total;
    CHECK(obj == doctest::Approx(direct).epsilon(1e-12));
    // Structural rows always hold on a consistent placement.
    for (const auto& row : m.constraints)
      if (row.equation >= 9) CHECK(row_satisfied(row, values));
    // Side rows agree with the direct feasibility check.
    bool rows_ok = std::all_of(m.constraints.begin(), m.constraints.end(),
                               [&](const Constraint& row) { return row_satisfied(row, values); });
    CHECK(rows_ok == check_feasibility(inst, p, Relaxations::none()).empty());
    ++count;
  });
  CHECK(count == 729);
}

TEST_CASE("linearization: z = x * x' is the only edge value rows 11-13 admit") {
  const auto inst = three_node_instance({chain_app("a1", 2)});
  const auto m = build_model(inst, Relaxations::both());
  for_each_assignment(2, 3, [&](const Assignment& a) {
    auto values = encode_placement(m, inst, placement_from_assignment(inst, a));
    for (std::size_t u = 0; u < 3; ++u)
      for (std::size_t v = 0; v < 3; ++v) {
        const auto zi = m.z_index(0, 0, u, v);
        const double product = values[m.x_index(0, 0, u)] * values[m.x_index(0, 1, v)];
        CHECK(values[zi] == product);
        const double saved = values[zi];
        values[zi] = 1.0 - saved;
        bool linking_ok = true;
        for (const auto& row : m.constraints)
          if (row.equation >= 11 && row.equation <= 13) linking_ok &= row_satisfied(row, values);
        CHECK_FALSE(linking_ok);
        values[zi] = saved;
      }
  });
}
