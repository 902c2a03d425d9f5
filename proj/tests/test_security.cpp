#include <random>

#include "doctest.h"
#include "fogplace/security.hpp"
#include "test_support.hpp"

using namespace fogplace;
using namespace fogplace::testing;

namespace {

using Dists = std::array<double, 4>;

ResourceNode fog_at(Point p, double range) { return fog_node("f", p, range); }

}  // namespace

TEST_CASE("boundary distances in a 100 x 100 farm") {
  const FarmGeometry farm{100.0, 100.0};
  CHECK(boundary_distances({50, 50}, farm) == Dists{50, 50, 50, 50});
  CHECK(boundary_distances({10, 70}, farm) == Dists{10, 90, 70, 30});
  CHECK(boundary_distances({0, 40}, farm) == Dists{0, 100, 40, 60});
  CHECK(boundary_distances({100, 100}, farm) == Dists{100, 0, 100, 0});
  CHECK_THROWS_AS(boundary_distances({-0.1, 40}, farm), GeometryError);
  CHECK_THROWS_AS(boundary_distances({50, 100.5}, farm), GeometryError);
}

TEST_CASE("fog rating") {
  const FarmGeometry farm{100.0, 100.0};
  CHECK(rate_fog_node(fog_at({50, 50}, 30), farm) == SecurityLevel::High);
  CHECK(rate_fog_node(fog_at({10, 70}, 30), farm) == SecurityLevel::Low);
  CHECK(rate_fog_node(fog_at({0, 40}, 1e-6), farm) == SecurityLevel::Low);
  // Range exactly equal to the nearest boundary stays inside: High.
  CHECK(rate_fog_node(fog_at({50, 50}, 50), farm) == SecurityLevel::High);
  CHECK(rate_fog_node(fog_at({50, 50}, std::nextafter(50.0, 100.0)), farm) == SecurityLevel::Low);
}

TEST_CASE("property: rating is monotone in range and in distance to the boundary") {
  const FarmGeometry farm{100.0, 100.0};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(0.0, 100.0), range(0.0, 60.0);
  for (int t = 0; t < 2000; ++t) {
    const Point p{coord(rng), coord(rng)};
    const double r1 = range(rng), r2 = range(rng);
    const auto lo = std::min(r1, r2), hi = std::max(r1, r2);
    // Larger range never rates higher.
    CHECK(rate_fog_node(fog_at(p, hi), farm) <= rate_fog_node(fog_at(p, lo), farm));
    // Moving toward the centre along x never lowers the rating.
    const Point q{p.x + (50.0 - p.x) * 0.5, p.y};
    CHECK(rate_fog_node(fog_at(q, lo), farm) >= rate_fog_node(fog_at(p, lo), farm));
    const auto d = boundary_distances(p, farm);
    CHECK(d[0] + d[1] == doctest::Approx(100.0));
    CHECK(d[2] + d[3] == doctest::Approx(100.0));
  }
}

TEST_CASE("rate_infrastructure") {
  Instance inst;
  inst.farm = {1000.0, 1000.0};
  inst.nodes = {cloud_node(), fog_node("edge", {900, 500}), fog_node("centre", {500, 500})};
  inst.links = reference_links(inst.nodes);
  const auto rated = rate_infrastructure(inst);
  CHECK_FALSE(inst.nodes[0].security_rating);
  CHECK(rated.nodes[0].security_rating == SecurityLevel::Medium);
  CHECK(rated.nodes[1].security_rating == SecurityLevel::Low);
  CHECK(rated.nodes[2].security_rating == SecurityLevel::High);
  CHECK(rate_infrastructure(rated) == rated);

  inst.nodes[1].position = Point{1200, 500};
  CHECK_THROWS_AS(rate_infrastructure(inst), GeometryError);
}
