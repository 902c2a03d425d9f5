#include "doctest.h"
#include "fogplace/metrics.hpp"
#include "test_support.hpp"

using namespace fogplace;
using namespace fogplace::testing;

TEST_CASE("unprotected data") {
  const auto inst = three_node_instance({chain_app("a1", 3, SecurityLevel::High)});
  SUBCASE("inbound traffic of every module below the requirement") {
    // cloud (Medium), cloud, fogA (High): sensor input plus the first edge.
    CHECK(unprotected_data(inst, placement_from_assignment(inst, {0, 0, 1})) == doctest::Approx(0.302));
    CHECK(unprotected_data(inst, placement_from_assignment(inst, {1, 1, 1})) == 0.0);
    CHECK(unprotected_data(inst, placement_from_assignment(inst, {1, 2, 0})) == doctest::Approx(0.6));
  }
  SUBCASE("Low requirement never counts") {
    const auto low = three_node_instance({chain_app("a1", 3, SecurityLevel::Low)});
    CHECK(unprotected_data(low, placement_from_assignment(low, {2, 0, 2})) == 0.0);
  }
  SUBCASE("unrated nodes") {
    auto bad = inst;
    bad.nodes[2].security_rating.reset();
    CHECK_THROWS_AS(unprotected_data(bad, placement_from_assignment(bad, {2, 2, 2})), UnratedNodeError);
  }
}

TEST_CASE("property: module counts partition the modules, stricter W exposes more") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto inst = random_instance(seed, 2, 3, 2);
    const Assignment a{seed % 3, 1, 2, (seed + 1) % 3, 0, seed % 2};
    const auto p = placement_from_assignment(inst, a);
    const auto counts = count_deployed(inst, p);
    CHECK(counts.cloud + counts.fog == inst.module_count());
    std::size_t on_cloud = 0;
    for (auto k : a) on_cloud += inst.nodes[k].tier == Tier::Cloud;
    CHECK(counts.cloud == on_cloud);

    double previous = -1.0;
    for (auto w : {SecurityLevel::Low, SecurityLevel::Medium, SecurityLevel::High}) {
      for (auto& app : inst.apps) app.security_req = w;
      const double u = unprotected_data(inst, p);
      CHECK(u >= previous);
      previous = u;
    }
  }
}

TEST_CASE("compute_metrics") {
  const auto inst = three_node_instance({chain_app("a1", 3, SecurityLevel::High)});
  const auto solved = solve_exact(inst, Relaxations::none());
  REQUIRE(solved.status == SolveStatus::Optimal);
  const auto m = compute_metrics(inst, solved);
  CHECK(m.resource_cost == solved.cost.total);
  CHECK(resource_cost(solved) == solved.cost.total);
  CHECK(m.modules_on_fog == 3);
  CHECK(m.modules_on_cloud == 0);
  CHECK(m.unprotected_data == 0.0);

  const auto relaxed = solve_exact(inst, Relaxations::both());
  CHECK(compute_metrics(inst, relaxed).unprotected_data > 0.0);

  auto impossible = three_node_instance({chain_app("a1", 3, SecurityLevel::Low, 0.01)});
  const auto none = solve_exact(impossible, Relaxations::none());
  CHECK_THROWS_AS(resource_cost(none), NoPlacementError);
  CHECK_THROWS_AS(compute_metrics(impossible, none), NoPlacementError);
}
