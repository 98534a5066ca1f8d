#include <doctest.h>

#include "fixtures.hpp"
#include "surfmeas/errors.hpp"

using namespace surfmeas;
using namespace fixtures;

TEST_CASE("ball profile matches the closed-form tangent geometry") {
  const auto p = ballProfile(257, 512);
  double err = 0.0;
  for (std::size_t j = 0; j < p.nt(); ++j)
    for (std::size_t k = 0; k < p.nphi(); ++k) {
      err = std::max(err, std::abs(p.r(j, k) - ballR(p.t[j])));
      err = std::max(err, std::abs(p.sigma(j, k) - ballSigma(p.t[j])));
    }
  CHECK(err <= 1e-9);
  CHECK(p.sigma(0, 0) == doctest::Approx(1.7320508).epsilon(1e-7));
  CHECK(p.r(0, 0) == doctest::Approx(0.8660254).epsilon(1e-7));
  CHECK(p.sigma(128, 3) == doctest::Approx(1.1180340).epsilon(1e-7));
  CHECK(p.r(128, 3) == doctest::Approx(0.7453560).epsilon(1e-7));
  for (std::size_t k = 0; k < p.nphi(); ++k)
    CHECK(p.r(256, k) == 0.0);
  // rotational symmetry
  double spread = 0.0;
  for (std::size_t j = 0; j < p.nt(); ++j)
    spread = std::max(spread, p.sigma.row(j).maxCoeff() - p.sigma.row(j).minCoeff());
  CHECK(spread <= 1e-9);
  CHECK(p.supportIdentityResidual() <= 1e-9 * p.diam);
  const auto mono = checkMonotonicity(p);
  CHECK(mono.rIncrease < 0.0);
  CHECK(mono.sigmaIncrease <= 0.0);
  CHECK(sandwichViolation(p.r, p.sigma, p.alpha) <= 1e-9 * p.diam);
}

TEST_CASE("sampled sections reproduce the closed form") {
  ProfileOptions opt;
  opt.forceSampled = true;
  const auto s = buildProfile(offCenterBall(), ballScene(), uniformTGrid(17), 8, AlphaSpec::linear(1.0), opt);
  for (std::size_t j = 0; j + 1 < s.nt(); ++j)
    for (std::size_t k = 0; k < s.nphi(); ++k) {
      CHECK(s.sigma(j, k) == doctest::Approx(ballSigma(s.t[j])).epsilon(1e-7));
      CHECK(s.r(j, k) == doctest::Approx(ballR(s.t[j])).epsilon(1e-4));
    }
}

TEST_CASE("polytope sections track the smooth body") {
  // inscribed mesh of the ball; B is where the x axis enters the mesh
  const Polytope mesh = bodyMesh(offCenterBall(), 6000);
  double entry = 0.0;
  for (std::size_t f = 0; f < mesh.facets().size(); ++f)
    if (mesh.facetNormals()[f].x() < 0.0)
      entry = std::max(entry, mesh.facetOffsets()[f] / mesh.facetNormals()[f].x());
  const auto scene = SceneFrame::make(Vec3::Zero(), Vec3(entry, 0, 0), Vec3(2.95, 0, 0));
  const auto p = buildProfile(mesh, scene, 9, 16);
  for (std::size_t j = 0; j + 1 < p.nt(); ++j)
    for (std::size_t k = 0; k < p.nphi(); ++k) {
      CHECK(p.sigma(j, k) == doctest::Approx(ballSigma(p.t[j])).epsilon(1e-2));
      CHECK(p.r(j, k) == doctest::Approx(ballR(p.t[j])).epsilon(2e-2));
    }
  CHECK(p.supportIdentityResidual() <= 1e-9 * p.diam);
}

TEST_CASE("validateConditions on the ball") {
  const auto p = ballProfile(257, 512);
  const auto c = validateConditions(p, 0.9);
  CHECK(c.tangencyOK);
  CHECK(c.k == 1.0);
  CHECK(c.maxSigma == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
  // γ = min α′ / (diam · k · (1 + c²)^{3/2}) = 1 / (2 · 1 · 8)
  CHECK(c.gamma == doctest::Approx(0.0625).epsilon(1e-13));
  CHECK(lipschitzViolation(p, 0.9, c.gamma) <= 0.0);
}

TEST_CASE("sigmaPhiDerivative") {
  SUBCASE("ball: zero derivative and zero residual") {
    const auto p = ballProfile(65, 128);
    const auto d = sigmaPhiDerivative(p);
    CHECK(d.sigmaPhi.cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(d.keyFormulaResidual <= 1e-9);
  }
  SUBCASE("ellipsoid: second-order convergence of the key formula") {
    const BodyModel e = Ellipsoid{Vec3(2.5, 0, 0), Vec3(1.0, 1.0, 1.2)};
    const auto scene = SceneFrame::make(Vec3::Zero(), Vec3(1.5, 0, 0), Vec3(3.4, 0, 0));
    const auto coarse = buildProfile(e, scene, 33, 32);
    const auto fine = buildProfile(e, scene, 33, 64);
    const double rc = sigmaPhiDerivative(coarse).keyFormulaResidual;
    const double rf = sigmaPhiDerivative(fine).keyFormulaResidual;
    CHECK(rc > 0.0);
    CHECK(rc / rf == doctest::Approx(4.0).epsilon(0.1));
  }
  SUBCASE("constant sigma rows give zero derivative") {
    auto p = ballProfile(9, 16);
    p.sigma.row(3).setConstant(0.7);
    p.sigmaPhi = sigmaPhiDerivative(p).sigmaPhi;
    CHECK(p.sigmaPhi.row(3).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("coneNormal") {
  const auto n = coneNormal(std::sqrt(3.0), 0.0, 0.0);
  CHECK(n.x() == doctest::Approx(-0.5));
  CHECK(n.y() == doctest::Approx(std::sqrt(3.0) / 2));
  CHECK(n.z() == doctest::Approx(0.0));
  // outward sphere normal at the tangency point (3/2, √3/2, 0)
  const Vec3 sphere = (Vec3(1.5, std::sqrt(3.0) / 2, 0) - Vec3(2, 0, 0)).normalized();
  CHECK((n.vec() - sphere).norm() <= 1e-15);
  const auto flat = coneNormal(0.0, 0.0, 1.234);
  CHECK(flat.vec() == Vec3(-1, 0, 0));
  for (int i = 0; i < 50; ++i) {
    const double s = std::sin(i * 1.7) * 5, sp = std::cos(i * 0.3) * 3, ph = i * 0.41;
    CHECK(std::abs(coneNormal(s, sp, ph).vec().squaredNorm() - 1.0) <= 1e-12);
  }
}

TEST_CASE("omegaClassify") {
  const auto p = ballProfile(65, 64);
  const OmegaSplit split(p);
  CHECK(omegaClassify(split, UnitVector(-1, 0, 0)) == OmegaSide::Minus);
  CHECK(omegaClassify(split, UnitVector(1, 0, 0)) == OmegaSide::Plus);
  // t = 0 normals are the boundary of Ω₋ (orthogonal to their own generator)
  for (std::size_t j = 1; j < p.nt(); ++j)
    for (std::size_t k = 0; k < p.nphi(); ++k)
      REQUIRE(omegaClassify(split, coneNormalWorld(p, j, k)) == OmegaSide::Minus);
  CHECK(omegaClassify(split, coneNormalWorld(p, 0, 0)) == OmegaSide::Plus);
}

TEST_CASE("measureFromProfile") {
  SUBCASE("cap area") {
    const auto p = ballProfile(257, 512);
    const SphericalPartition part(Vec3(1, 0, 0));
    const auto mu = measureFromProfile(p, part, unitWeights(p));
    CHECK(std::abs(mu.totalMass() - kPi) <= 1e-3);
    const auto whole = bodyMeasure(p, part);
    CHECK(whole.totalMass() == doctest::Approx(4.0 * kPi).epsilon(1e-5));
    CHECK(whole.firstMoment().norm() <= 1e-10 * whole.totalMass());
  }
  SUBCASE("left-endpoint rule converges at first order") {
    QuadratureOptions left;
    left.rule = StieltjesRule::LeftEndpoint;
    const SphericalPartition part(Vec3(1, 0, 0), 8, 16);
    const auto a = ballProfile(257, 64), b = ballProfile(513, 64);
    const double ea = std::abs(measureFromProfile(a, part, unitWeights(a), left).totalMass() - kPi);
    const double eb = std::abs(measureFromProfile(b, part, unitWeights(b), left).totalMass() - kPi);
    CHECK(ea / eb == doctest::Approx(2.0).epsilon(0.05));
  }
  SUBCASE("zero weighting") {
    const auto p = ballProfile(17, 16);
    const auto mu = measureFromProfile(p, SphericalPartition(Vec3(1, 0, 0)), std::vector<double>(p.nt(), 0.0));
    CHECK(mu.totalVariation() == 0.0);
  }
  SUBCASE("negative increments are rejected") {
    const auto p = ballProfile(17, 16);
    std::vector<double> m(p.nt(), 1.0);
    m[5] = 0.2;
    CHECK_THROWS_WITH_AS(measureFromProfile(p, SphericalPartition(Vec3(1, 0, 0)), m), "non-admissible weighting",
                         InvalidInput);
  }
}

TEST_CASE("profile measure agrees with a fine circumscribed mesh") {
  const auto p = ballProfile(257, 512);
  const SphericalPartition part(Vec3(1, 0, 0));
  const OmegaSplit split(p);
  const auto mu = measureFromProfile(p, part, unitWeights(p));
  // oracle: tangent planes of the ball at 2×2 sub-bin centers, so every mesh
  // facet normal falls inside its bin
  std::vector<UnitVector> normals;
  std::vector<double> offsets;
  for (std::size_t bin = 0; bin < part.size(); ++bin) {
    const auto b = part.region(bin);
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) {
        const UnitVector n = part.direction(b.polarLo + (i + 0.5) * (b.polarHi - b.polarLo) / 2,
                                            b.lonLo + (k + 0.5) * (b.lonHi - b.lonLo) / 2);
        if (b.polarHi > 1.9 || (i == 0 && k == 0 && bin % 5 == 0)) {
          normals.push_back(n);
          offsets.push_back(n.dot(Vec3(2, 0, 0)) + 1.0);
        }
      }
  }
  const Polytope mesh = halfspaceIntersection(HalfspaceSystem(normals, offsets));
  const auto oracle = binMeasure(surfaceMeasure(mesh), part);
  double diff = 0.0, mass = 0.0;
  for (std::size_t bin = 0; bin < part.size(); ++bin) {
    if (split.classifyBin(part, bin) != OmegaSplit::BinClass::Minus)
      continue;
    diff += std::abs(mu.mass(bin) - oracle.mass(bin));
    mass += mu.mass(bin);
  }
  CHECK(mass > 0.9 * kPi);
  CHECK(diff <= 0.02 * mass);
}

TEST_CASE("scene and tangency errors") {
  CHECK_THROWS_AS(SceneFrame::make(Vec3::Zero(), Vec3(2, 0, 0), Vec3(1, 0, 0)), InvalidInput);
  CHECK_THROWS_AS(SceneFrame::make(Vec3::Zero(), Vec3(1, 0, 0), Vec3(2, 1, 0)), InvalidInput);
  // B′ outside the ball
  CHECK_THROWS_AS(buildProfile(offCenterBall(), SceneFrame::make(Vec3::Zero(), Vec3(1, 0, 0), Vec3(3.5, 0, 0)), 9, 8),
                  InvalidInput);
  // the axis runs along a facet: on the far side the support ray only meets
  // the body on the axis
  const Polytope box(std::vector<Vec3>{{1, 0, -1}, {3, 0, -1}, {3, 2, -1}, {1, 2, -1},
                                       {1, 0, 1},  {3, 0, 1},  {3, 2, 1},  {1, 2, 1}},
                     {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4}, {2, 3, 7, 6}, {1, 2, 6, 5}, {0, 4, 7, 3}});
  const auto scene = SceneFrame::make(Vec3::Zero(), Vec3(1, 0, 0), Vec3(2.9, 0, 0));
  CHECK_THROWS_WITH_AS(buildProfile(box, scene, 9, 8), doctest::Contains("tangency violation"), InvalidInput);
}
