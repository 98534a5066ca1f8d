#include <doctest.h>

#include "fixtures.hpp"
#include "surfmeas/errors.hpp"
#include "surfmeas/resistance.hpp"

using namespace surfmeas;
using namespace fixtures;

TEST_CASE("newtonDrag") {
  CHECK(newtonDrag(UnitVector(0, 0, 1)) == 1.0);
  CHECK(newtonDrag(UnitVector(0, 0, -1)) == 0.0);
  CHECK(newtonDrag(UnitVector(0, std::sin(kPi / 3), std::cos(kPi / 3))) == doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("functional on measures") {
  const auto f = newtonDragFunctional();
  const DiscreteMeasure cube = surfaceMeasure(unitCube(Vec3::Zero()));
  CHECK(functional(cube, f) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(functional(cube.scaled(3.5), f) == doctest::Approx(3.5).epsilon(1e-14));
  // house: the top face replaced by two roof faces of area √2/2 with normals (e₃ ± e₁)/√2
  const double r = std::sqrt(0.5);
  const DiscreteMeasure house(std::vector<Atom>{{UnitVector(1, 0, 0), 1.0},
                                                {UnitVector(-1, 0, 0), 1.0},
                                                {UnitVector(0, 1, 0), 1.0},
                                                {UnitVector(0, -1, 0), 1.0},
                                                {UnitVector(0, 0, -1), 1.0},
                                                {UnitVector(r, 0, r), r},
                                                {UnitVector(-r, 0, r), r}});
  CHECK(functional(house, f) == doctest::Approx(0.5).epsilon(1e-14));

  SUBCASE("linearity on atoms") {
    const auto g = randomFunctional(7);
    const SignedDiscreteMeasure a = cube.asSigned(), b = house.asSigned();
    const double lhs = functional(a * 2.5 + b * -1.25, g);
    const double rhs = 2.5 * functional(a, g) - 1.25 * functional(b, g);
    CHECK(std::abs(lhs - rhs) <= 1e-12);
  }
  SUBCASE("binned measure uses bin mean normals") {
    const SphericalPartition part(Vec3(0, 0, 1));
    CHECK(functional(binMeasure(house, part), f) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("random functionals are bounded") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto g = randomFunctional(seed);
      for (const auto &n : spiralDirections(500))
        CHECK(std::abs(g.evaluate(n)) <= g.bound);
    }
  }
  CHECK(functionalByName("newton").name == "newton");
  CHECK(functionalByName("random:12").evaluate(UnitVector(0, 0, 1)) == randomFunctional(12).evaluate(UnitVector(0, 0, 1)));
  CHECK_THROWS_AS(functionalByName("drag"), InvalidInput);
}

TEST_CASE("graphResistance") {
  const auto flat = GraphBody::sample(512, 1.0, [](double, double) { return 1.0; });
  const auto q = graphResistanceDetailed(flat);
  CHECK(std::abs(q.value - kPi) <= 1e-3);
  CHECK(q.value == doctest::Approx(q.coveredArea).epsilon(1e-15));

  const auto cone = GraphBody::sample(512, 1.0, [](double x, double y) { return 1.0 - std::hypot(x, y); });
  cone.validate();
  CHECK(std::abs(graphResistance(cone) - kPi / 2) <= 1e-3);
  CHECK(graphResistance(cone) > 0.0);
  CHECK(graphResistance(cone) <= kPi);
}

TEST_CASE("graph resistance matches the surface-measure functional on a cap") {
  // spherical cap of radius 2 over the unit disk
  const double base = std::sqrt(3.0);
  const auto cap = GraphBody::sample(256, 2.0 - base, [&](double x, double y) {
    return std::sqrt(std::max(0.0, 4.0 - x * x - y * y)) - base;
  });
  // ∫∫ 1/(1+|∇u|²) = ∫ (4 − ρ²)/4 · 2πρ dρ = 2π (1/2 − 1/16)
  const double analytic = 2.0 * kPi * (0.5 - 1.0 / 16.0);
  const double viaGraph = graphResistance(cap);
  CHECK(viaGraph == doctest::Approx(analytic).epsilon(2e-3));
  const Polytope mesh = bodyMesh(BodyModel(cap));
  const double viaMeasure = functional(surfaceMeasure(mesh), newtonDragFunctional());
  CHECK(viaMeasure == doctest::Approx(viaGraph).epsilon(1e-2));
}

TEST_CASE("affineCheck") {
  const auto p = ballProfile(65, 64);
  const auto fam = makeFamily(p, BumpShape{0.45, 0.3, 0.5}, 0.9, SphericalPartition(Vec3(1, 0, 0), 32, 64));
  const std::vector<double> s{-1.0, -0.5, 0.0, 0.5, 1.0};
  const auto one = affineCheck(fam, constantFunctional(1.0), s);
  CHECK(one.ok);
  CHECK(one.values[2] == doctest::Approx(fam.baseMeasure().totalMass()).epsilon(1e-12));
  for (const auto &f : {newtonDragFunctional(), randomFunctional(1), randomFunctional(2)}) {
    const auto rep = affineCheck(fam, f, s);
    CHECK(rep.ok);
    CHECK(rep.maxResidual <= 1e-8 * rep.reference);
  }
  const auto single = affineCheck(fam, newtonDragFunctional(), {0.5});
  CHECK(single.maxResidual == 0.0);
  CHECK(single.ok);
}
