#include <catch2/catch_amalgamated.hpp>

#include "anglers/lp.hpp"
#include "anglers/surfaces.hpp"
#include "support/instances.hpp"

using namespace anglers;

namespace {

AngleAssignment witness_of(const IdealTriangulation& tri) {
  auto out = solve(tri);
  REQUIRE(out.status == LPStatus::strictly_feasible);
  return *out.witness;
}

}  // namespace

TEST_CASE("disk classification by corner counts") {
  AdmissibleDisk d;
  d.tet = 0;
  d.corners = {SurfaceCorner::internal(0), SurfaceCorner::internal(1), SurfaceCorner::internal(2)};
  CHECK(classify_disk(d) == DiskType::I);
  d.corners = {SurfaceCorner::internal(0), SurfaceCorner::internal(3), SurfaceCorner::internal(5),
               SurfaceCorner::internal(2)};
  CHECK(classify_disk(d) == DiskType::II);
  d.corners = {SurfaceCorner::external(0, 2), SurfaceCorner::external(0, 3),
               SurfaceCorner::internal(3), SurfaceCorner::internal(4)};
  CHECK(classify_disk(d) == DiskType::III);
  d.corners = {SurfaceCorner::external(0, 2), SurfaceCorner::external(0, 3),
               SurfaceCorner::external(1, 3), SurfaceCorner::external(1, 2)};
  CHECK(classify_disk(d) == DiskType::IV);
  // hexagon with four external and two internal corners is outside the list
  d.corners = {SurfaceCorner::external(0, 2), SurfaceCorner::external(0, 3),
               SurfaceCorner::internal(3),    SurfaceCorner::external(1, 3),
               SurfaceCorner::external(1, 2), SurfaceCorner::internal(3)};
  CHECK(classify_disk(d) == DiskType::other);
}

TEST_CASE("admissibility checks") {
  auto tri = instances::fmp_two_tet();
  SECTION("edge-tube quad passes") {
    auto tube = edge_tube_surface(tri, 0);
    auto rep = check_admissibility(tri, tube);
    for (const auto& v : rep.violations) INFO(v);
    CHECK(rep.pass);
  }
  SECTION("empty corner list violates condition 1") {
    SurfaceComplex s;
    s.disks.push_back({0, {}});
    auto rep = check_admissibility(tri, s);
    CHECK_FALSE(rep.pass);
    CHECK_THAT(rep.violations.at(0), Catch::Matchers::ContainsSubstring("condition 1"));
  }
  SECTION("both endpoints on the same edge violate condition 2") {
    SurfaceComplex s;
    AdmissibleDisk d;
    d.tet = 0;
    d.corners = {SurfaceCorner::internal(0), SurfaceCorner::internal(0),
                 SurfaceCorner::internal(3)};
    s.disks.push_back(d);
    auto rep = check_admissibility(tri, s);
    CHECK_FALSE(rep.pass);
  }
  SECTION("arc from an edge to an adjacent external edge violates condition 2") {
    SurfaceComplex s;
    AdmissibleDisk d;
    d.tet = 0;
    // edge {0,1} and external edge (0, f): vertex 0 lies on the edge
    d.corners = {SurfaceCorner::internal(0), SurfaceCorner::external(0, 2),
                 SurfaceCorner::internal(1)};
    s.disks.push_back(d);
    auto rep = check_admissibility(tri, s);
    CHECK_FALSE(rep.pass);
    bool cond2 = false;
    for (const auto& v : rep.violations)
      if (v.find("condition 2") != std::string::npos || v.find("adjacent") != std::string::npos)
        cond2 = true;
    CHECK(cond2);
  }
  SECTION("both endpoints on the same external edge violate condition 3") {
    SurfaceComplex s;
    AdmissibleDisk d;
    d.tet = 0;
    d.corners = {SurfaceCorner::external(1, 0), SurfaceCorner::external(1, 0)};
    s.disks.push_back(d);
    auto rep = check_admissibility(tri, s);
    CHECK_FALSE(rep.pass);
  }
  SECTION("malformed references throw") {
    SurfaceComplex s;
    s.disks.push_back({5, {SurfaceCorner::internal(0)}});
    CHECK_THROWS_AS(check_admissibility(tri, s), SurfaceEncodingError);
  }
}

TEST_CASE("inner angles") {
  auto tri = instances::fmp_two_tet();
  auto alpha = witness_of(tri);  // uniform 1/6 by symmetry of the instance
  SECTION("type IV disks carry four right angles") {
    auto tube = edge_tube_surface(tri, 0);
    auto th = inner_angles(tri, tube, alpha);
    for (const auto& disk : th.theta) {
      REQUIRE(disk.size() == 4);
      for (const auto& v : disk) CHECK(v == Rational(1, 2));
    }
  }
  SECTION("type I disks carry the three vertex angles") {
    auto bp = boundary_parallel_surface(tri);
    auto th = inner_angles(tri, bp, alpha);
    REQUIRE(th.theta.size() == 8);
    for (std::size_t d = 0; d < th.theta.size(); ++d) {
      Rational sum = 0;
      for (const auto& v : th.theta[d]) sum += v;
      CHECK(sum < 1);  // strict vertex sums
    }
  }
}

TEST_CASE("edge tube: chi = 0 and all disks type IV") {
  for (auto tri : {instances::fmp_two_tet(), instances::valence8_four_tet()}) {
    auto alpha = witness_of(tri);
    for (const auto& cls : tri.edge_classes()) {
      auto tube = edge_tube_surface(tri, cls.id);
      REQUIRE(tube.disks.size() == static_cast<std::size_t>(cls.valence()));
      CHECK(check_admissibility(tri, tube).pass);
      derive_surface(tri, tube, true);  // must be carried by the face gluings
      auto th = inner_angles(tri, tube, alpha);
      auto lemma = lemma_3_2_check(tri, tube, th);
      for (const auto& f : lemma.failures) INFO(f);
      CHECK(lemma.pass);
      auto euler = euler_characteristics(tri, tube, th);
      CHECK_FALSE(euler.closed);  // boundary circles on dM
      CHECK(euler.chi_combinatorial == 0);
      CHECK(euler.chi_angle == 0);
      auto verdict = prop_3_3_verdict(tri, tube, th);
      CHECK(verdict.pass());
      CHECK(verdict.is_edge_tube);
      CHECK(verdict.all_type_iv);
    }
  }
}

TEST_CASE("boundary-parallel surface: chi equals the boundary Euler characteristic") {
  for (auto tri : {instances::fmp_two_tet(), instances::valence8_four_tet()}) {
    auto alpha = witness_of(tri);
    auto bp = boundary_parallel_surface(tri);
    CHECK(check_admissibility(tri, bp).pass);
    derive_surface(tri, bp, true);
    auto th = inner_angles(tri, bp, alpha);
    auto lemma = lemma_3_2_check(tri, bp, th);
    for (const auto& f : lemma.failures) INFO(f);
    CHECK(lemma.pass);
    auto euler = euler_characteristics(tri, bp, th);
    CHECK(euler.closed);
    long chi_boundary = 0;
    for (const auto& b : tri.boundary_components()) chi_boundary += b.euler_characteristic;
    CHECK(euler.chi_combinatorial == chi_boundary);
    CHECK(euler.chi_angle == Rational(chi_boundary));  // exact agreement
    auto verdict = prop_3_3_verdict(tri, bp, th);
    CHECK(verdict.pass());
    CHECK(verdict.chi < 0);
    CHECK_FALSE(verdict.all_type_iv);
    CHECK_FALSE(verdict.is_edge_tube);
  }
}

TEST_CASE("internal 0-cell sums inherit the edge condition exactly") {
  auto tri = instances::valence8_four_tet();
  auto alpha = witness_of(tri);
  auto bp = boundary_parallel_surface(tri);
  auto der = derive_surface(tri, bp, true);
  auto th = inner_angles(tri, bp, alpha);
  int internal_orbits = 0;
  for (int o = 0; o < der.orbit_count; ++o) {
    if (!der.orbit_internal[o]) continue;
    ++internal_orbits;
    Rational sum = 0;
    for (auto [d, i] : der.orbit_members[o]) sum += th.theta[d][i];
    CHECK(sum == 2);
  }
  CHECK(internal_orbits == static_cast<int>(tri.edge_classes().size()) * 2);
}

TEST_CASE("disjoint union of two tubes is additive") {
  auto tri = instances::valence8_four_tet();
  auto alpha = witness_of(tri);
  auto t0 = edge_tube_surface(tri, 0);
  auto t1 = edge_tube_surface(tri, 1);
  SurfaceComplex both = t0;
  int shift = static_cast<int>(t0.disks.size());
  for (const auto& d : t1.disks) both.disks.push_back(d);
  for (const auto& p : t1.pairings)
    both.pairings.push_back({p.disk_a + shift, p.side_a, p.disk_b + shift, p.side_b});
  auto th = inner_angles(tri, both, alpha);
  auto euler = euler_characteristics(tri, both, th);
  CHECK(euler.chi_combinatorial == 0);
  CHECK(euler.chi_angle == 0);
  CHECK(prop_3_3_verdict(tri, both, th).is_edge_tube);
}

TEST_CASE("a surface containing a type I disk has chi < 0") {
  auto tri = instances::fmp_two_tet();
  auto alpha = witness_of(tri);
  auto bp = boundary_parallel_surface(tri);  // all type I
  auto th = inner_angles(tri, bp, alpha);
  auto verdict = prop_3_3_verdict(tri, bp, th);
  CHECK(verdict.chi < 0);
  CHECK(verdict.consistent);
  CHECK_FALSE(verdict.equality);
}

TEST_CASE("encoding inconsistencies are flagged, not miscomputed") {
  auto tri = instances::fmp_two_tet();
  auto alpha = witness_of(tri);
  SECTION("a lone internal quad does not close around edges") {
    SurfaceComplex s;
    AdmissibleDisk d;
    d.tet = 0;
    d.corners = {SurfaceCorner::internal(0), SurfaceCorner::internal(3),
                 SurfaceCorner::internal(5), SurfaceCorner::internal(2)};
    s.disks.push_back(d);
    auto th = inner_angles(tri, s, alpha);
    auto verdict = prop_3_3_verdict(tri, s, th);
    CHECK_FALSE(verdict.consistent);  // chi_angle != chi_combinatorial
    CHECK_FALSE(verdict.pass());
  }
  SECTION("pairings not carried by face gluings throw on strict derivation") {
    auto tube = edge_tube_surface(tri, 0);
    auto broken = tube;
    std::swap(broken.pairings[0].disk_b, broken.pairings[1].disk_b);
    CHECK_THROWS_AS(derive_surface(tri, broken, true), SurfaceEncodingError);
  }
  SECTION("doubly paired side throws") {
    auto tube = edge_tube_surface(tri, 0);
    tube.pairings.push_back(tube.pairings[0]);
    CHECK_THROWS_AS(derive_surface(tri, tube, false), SurfaceEncodingError);
  }
  SECTION("internal 0-cell spanning two edge classes throws") {
    auto tri8 = instances::valence8_four_tet();
    // pair two triangle sides from unrelated disks with mismatched classes
    SurfaceComplex s;
    AdmissibleDisk d0;
    d0.tet = 0;
    d0.corners = {SurfaceCorner::internal(0), SurfaceCorner::internal(1),
                  SurfaceCorner::internal(2)};
    s.disks.push_back(d0);
    s.disks.push_back(d0);
    s.pairings.push_back({0, 0, 1, 0});
    if (tri8.edge_class_id(0, 0) != tri8.edge_class_id(0, 1)) {
      CHECK_THROWS_AS(derive_surface(tri8, s, false), SurfaceEncodingError);
    }
  }
}

TEST_CASE("lemma 3.2 margins: type II and III disks stay strictly below the bound") {
  auto tri = instances::fmp_two_tet();
  auto alpha = witness_of(tri);
  SurfaceComplex s;
  AdmissibleDisk quad;  // type II: normal quad around the (0,5) edge pair
  quad.tet = 0;
  quad.corners = {SurfaceCorner::internal(0), SurfaceCorner::internal(3),
                  SurfaceCorner::internal(5), SurfaceCorner::internal(2)};
  s.disks.push_back(quad);
  AdmissibleDisk three;  // type III: two external corners at vertex 0
  three.tet = 0;
  three.corners = {SurfaceCorner::external(0, 2), SurfaceCorner::external(0, 3),
                   SurfaceCorner::internal(3), SurfaceCorner::internal(4)};
  s.disks.push_back(three);
  CHECK(check_admissibility(tri, s).pass);
  auto th = inner_angles(tri, s, alpha);
  auto lemma = lemma_3_2_check(tri, s, th);
  REQUIRE(lemma.disk_margin_pi_units.size() == 2);
  CHECK(lemma.disk_margin_pi_units[0] > 0);
  CHECK(lemma.disk_margin_pi_units[1] > 0);
  CHECK(classify_disk(quad) == DiskType::II);
  CHECK(classify_disk(three) == DiskType::III);
}
