#include <doctest.h>

#include "surfmeas/errors.hpp"
#include "surfmeas/hull.hpp"
#include "surfmeas/polytope.hpp"

#include <random>

using namespace surfmeas;

TEST_CASE("quickhull of random points is a closed convex surface") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec3> pts;
  for (int i = 0; i < 500; ++i)
    pts.emplace_back(u(rng), u(rng), u(rng));
  const auto hull = quickhull(pts);
  for (std::size_t t = 0; t < hull.triangles.size(); ++t)
    for (const auto &p : pts)
      REQUIRE(hull.normals[t].dot(p) - hull.offsets[t] <= 1e-9);
  const Polytope poly = convexHullPolytope(pts);
  CHECK(poly.check().valid());
}

TEST_CASE("hull of a point set without volume is rejected") {
  const std::vector<Vec3> flat{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0.5, 0.5, 0}};
  CHECK_THROWS_AS(quickhull(flat), InvalidInput);
}

TEST_CASE("hull merges coplanar points into polygonal facets") {
  std::vector<Vec3> pts;
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j <= 4; ++j)
      for (int k = 0; k <= 4; ++k)
        pts.emplace_back(i / 4.0, j / 4.0, k / 4.0);
  const Polytope cube = convexHullPolytope(pts);
  CHECK(cube.vertices().size() == 8);
  CHECK(cube.facetCount() == 6);
  CHECK(cube.volume() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hull handles many points on a sphere") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  std::vector<Vec3> pts;
  for (int i = 0; i < 4000; ++i)
    pts.push_back(Vec3(g(rng), g(rng), g(rng)).normalized());
  const Polytope p = convexHullPolytope(pts);
  CHECK(p.vertices().size() == pts.size());
  CHECK(p.check().valid());
  CHECK(p.volume() < 4.0 * kPi / 3.0);
  CHECK(p.volume() > 0.99 * 4.0 * kPi / 3.0);
}
