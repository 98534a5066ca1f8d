#include <doctest.h>

#include "surfmeas/errors.hpp"
#include "surfmeas/polytope.hpp"

#include <random>

using namespace surfmeas;

namespace {

HalfspaceSystem cubeSystem(double extra = 0.0) {
  std::vector<UnitVector> n{UnitVector(1, 0, 0), UnitVector(-1, 0, 0), UnitVector(0, 1, 0),
                            UnitVector(0, -1, 0), UnitVector(0, 0, 1),  UnitVector(0, 0, -1)};
  std::vector<double> h(6, 0.5);
  if (extra > 0.0) {
    n.push_back(UnitVector(0, 0, 1));
    h.push_back(extra);
  }
  return HalfspaceSystem(n, h);
}

UnitVector randomDirection(std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  return UnitVector(g(rng), g(rng), g(rng));
}

// Jittered golden-spiral directions under a random rotation. Independent
// uniform directions leave gaps that inflate the circumscribed volume by 6–8%.
std::vector<UnitVector> spreadDirections(std::mt19937_64 &rng, int count) {
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  const Eigen::Quaterniond q(Eigen::Vector4d(randomDirection(rng).vec().x(), randomDirection(rng).vec().y(),
                                             randomDirection(rng).vec().z(), 1.0)
                                 .normalized());
  std::vector<UnitVector> out;
  for (int i = 0; i < count; ++i) {
    const double z = std::clamp(1.0 - 2.0 * (i + 0.5 + jitter(rng)) / count, -1.0, 1.0);
    const double phi = kPi * (1.0 + std::sqrt(5.0)) * (i + 0.5) + jitter(rng);
    const double rho = std::sqrt(1.0 - z * z);
    out.push_back(UnitVector(q * Vec3(rho * std::cos(phi), rho * std::sin(phi), z)));
  }
  return out;
}

} // namespace

TEST_CASE("surfaceMeasure") {
  SUBCASE("unit cube") {
    const auto mu = surfaceMeasure(unitCube());
    CHECK(mu.size() == 6);
    for (const Vec3 n : {Vec3(1, 0, 0), Vec3(-1, 0, 0), Vec3(0, 1, 0), Vec3(0, -1, 0), Vec3(0, 0, 1), Vec3(0, 0, -1)})
      CHECK(mu.weightAt(UnitVector(n)) == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("scaled cube") {
    const auto mu = surfaceMeasure(unitCube().scaled(2.0));
    for (const auto &a : mu.atoms())
      CHECK(a.w == doctest::Approx(4.0).epsilon(1e-14));
  }
  SUBCASE("regular tetrahedron") {
    const Polytope t = regularTetrahedron(1.0);
    const auto mu = surfaceMeasure(t);
    CHECK(mu.size() == 4);
    // oracle: Heron/cross-product area of each face
    for (const auto &f : t.facets()) {
      const Vec3 a = t.vertices()[f[0]], b = t.vertices()[f[1]], c = t.vertices()[f[2]];
      CHECK((b - a).cross(c - a).norm() / 2.0 == doctest::Approx(std::sqrt(3.0) / 4.0).epsilon(1e-14));
    }
    for (const auto &a : mu.atoms())
      CHECK(a.w == doctest::Approx(std::sqrt(3.0) / 4.0).epsilon(1e-14));
  }
  SUBCASE("closure, translation and scaling") {
    std::mt19937_64 rng(9);
    std::vector<Vec3> pts;
    for (int i = 0; i < 60; ++i)
      pts.push_back(randomDirection(rng).vec() * 1.3);
    const Polytope p = convexHullPolytope(pts);
    const auto mu = surfaceMeasure(p);
    CHECK(checkAlexandrov(mu).closureResidual <= 1e-10);
    const auto moved = surfaceMeasure(p.translated(Vec3(3, -2, 7)));
    REQUIRE(moved.size() == mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
      CHECK(moved.atoms()[i].n.vec() == mu.atoms()[i].n.vec());
      CHECK(moved.atoms()[i].w == mu.atoms()[i].w);
    }
    const auto big = surfaceMeasure(p.scaled(1.7));
    for (std::size_t i = 0; i < mu.size(); ++i)
      CHECK(big.atoms()[i].w == doctest::Approx(1.7 * 1.7 * mu.atoms()[i].w).epsilon(1e-13));
  }
}

TEST_CASE("halfspaceIntersection") {
  SUBCASE("axis-aligned cube") {
    const Polytope c = halfspaceIntersection(cubeSystem());
    CHECK(c.vertices().size() == 8);
    CHECK(c.facetCount() == 6);
    CHECK(c.volume() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hausdorffDistance(c, unitCube()) <= 1e-12);
  }
  SUBCASE("redundant plane is dropped") {
    const Polytope c = halfspaceIntersection(cubeSystem(5.0));
    CHECK(c.facetCount() == 6);
    CHECK(hausdorffDistance(c, unitCube()) <= 1e-12);
  }
  SUBCASE("tangent planes of the unit ball") {
    std::mt19937_64 rng(2024);
    const auto n = spreadDirections(rng, 100);
    const Polytope p = halfspaceIntersection(HalfspaceSystem(n, std::vector<double>(100, 1.0)));
    CHECK(p.check().valid());
    // Monte-Carlo volume oracle on the bounding box
    double lo = 0.0, hi = 0.0;
    for (const auto &v : p.vertices()) {
      lo = std::min(lo, v.minCoeff());
      hi = std::max(hi, v.maxCoeff());
    }
    std::uniform_real_distribution<double> u(lo, hi);
    const int samples = 200000;
    int inside = 0;
    for (int i = 0; i < samples; ++i) {
      const Vec3 x(u(rng), u(rng), u(rng));
      bool in = true;
      for (std::size_t j = 0; j < n.size() && in; ++j)
        in = n[j].dot(x) <= 1.0;
      inside += in;
    }
    const double mc = std::pow(hi - lo, 3) * inside / samples;
    CHECK(std::abs(p.volume() - mc) <= 0.02 * mc);
    CHECK(std::abs(mc - 4.0 * kPi / 3.0) <= 0.05 * 4.0 * kPi / 3.0);
  }
  SUBCASE("facet planes reproduce the polytope") {
    std::mt19937_64 rng(77);
    std::vector<Vec3> pts;
    for (int i = 0; i < 40; ++i)
      pts.push_back(randomDirection(rng).vec() + Vec3(0.5, 0.1, -0.3));
    const Polytope p = convexHullPolytope(pts);
    const Polytope q = halfspaceIntersection(HalfspaceSystem::fromPolytope(p));
    CHECK(hausdorffDistance(p, q) <= 1e-9 * p.diameter());
    CHECK(q.facetCount() == p.facetCount());
  }
  SUBCASE("errors") {
    CHECK_THROWS_WITH_AS(HalfspaceSystem({UnitVector(1, 0, 0), UnitVector(-1, 0, 0), UnitVector(0, 1, 0)},
                                         {1.0, 1.0, 1.0}),
                         "unbounded system", InvalidInput);
    CHECK_THROWS_WITH_AS(HalfspaceSystem({UnitVector(1, 0, 0), UnitVector(-1, 0, 0), UnitVector(0, 1, 0),
                                          UnitVector(0, -1, 0), UnitVector(0, 0, 1), UnitVector(0, 0, -1)},
                                         {0.5, -0.6, 0.5, 0.5, 0.5, 0.5}),
                         "infeasible system", InvalidInput);
    // a flat slab has no interior either
    CHECK_THROWS_WITH_AS(HalfspaceSystem({UnitVector(1, 0, 0), UnitVector(-1, 0, 0), UnitVector(0, 1, 0),
                                          UnitVector(0, -1, 0), UnitVector(0, 0, 1), UnitVector(0, 0, -1)},
                                         {0.5, -0.5, 0.5, 0.5, 0.5, 0.5}),
                         "infeasible system", InvalidInput);
  }
}

TEST_CASE("gaussPreimage") {
  const Polytope cube = unitCube();
  const UnitVector e3(0, 0, 1);
  const UnitVector vp(1, 0, 1), vm(-1, 0, 1);
  const auto region = [&](const UnitVector &n) {
    return angleBetween(n, e3) > 0.1 && angleBetween(n, vp) > 0.1 && angleBetween(n, vm) > 0.1;
  };
  const auto g = gaussPreimage(cube, region);
  CHECK(g.facets.size() == 5);
  CHECK(g.area == doctest::Approx(5.0).epsilon(1e-14));
  const auto all = gaussPreimage(cube, [](const UnitVector &) { return true; });
  CHECK(all.area == doctest::Approx(cube.surfaceArea()));
}

TEST_CASE("OFF round trip") {
  const std::string cubeOff = "OFF\n8 6 12\n"
                              "0 0 0\n1 0 0\n1 1 0\n0 1 0\n0 0 1\n1 0 1\n1 1 1\n0 1 1\n"
                              "4 0 3 2 1\n4 4 5 6 7\n4 0 1 5 4\n4 1 2 6 5\n4 2 3 7 6\n4 3 0 4 7\n";
  const Polytope p = readOFF(cubeOff);
  CHECK(p.vertices().size() == 8);
  CHECK(p.facetCount() == 6);
  const std::string written = writeOFF(p);
  CHECK(written.rfind("OFF\n8 6 12\n", 0) == 0);
  const Polytope q = readOFF(written);
  CHECK(q.facets() == p.facets());
  for (std::size_t i = 0; i < p.vertices().size(); ++i)
    CHECK((q.vertices()[i] - p.vertices()[i]).norm() <= 1e-12);
  CHECK(writeOFF(q) == written);

  const std::string inner = "OFF\n5 0 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n0.1 0.1 0.1\n";
  CHECK_THROWS_WITH_AS(readOFF(inner), "non-convex vertex set", InvalidInput);
  CHECK_THROWS_AS(readOFF("OFF\n3 1\n"), InvalidInput);
  CHECK_THROWS_AS(readOFF("PLY\n"), InvalidInput);
}
