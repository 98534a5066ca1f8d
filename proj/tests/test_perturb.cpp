#include <doctest.h>

#include "fixtures.hpp"
#include "surfmeas/errors.hpp"
#include "surfmeas/perturb.hpp"

using namespace surfmeas;
using namespace fixtures;

namespace {

const CylindricalProfile &profile() {
  static const CylindricalProfile p = ballProfile(129, 128);
  return p;
}

const PerturbedFamily &family() {
  static const PerturbedFamily f = makeFamily(profile(), BumpShape{0.45, 0.3, 0.5}, 0.9, SphericalPartition(Vec3(1, 0, 0), 32, 64));
  return f;
}

// independent acceptance test for |d/dt ½ ln(1 ± θ)| ≤ c: central differences on a fine grid
bool slopeOK(double amplitude, double c) {
  const BumpShape b{0.45, 0.3, amplitude};
  const double h = 1e-6;
  for (int i = 0; i <= 100000; ++i) {
    const double t = 0.15 + 0.6 * i / 100000.0;
    for (double sign : {-1.0, 1.0}) {
      const double d = (0.5 * std::log(1.0 + sign * b.value(t + h)) - 0.5 * std::log(1.0 + sign * b.value(t - h))) / (2 * h);
      if (std::abs(d) > c)
        return false;
    }
  }
  return true;
}

} // namespace

TEST_CASE("lemma7Constant") {
  // min(γ/(2 diam), ln 3 / 0.9) with γ = 1/16 and diam = 2
  CHECK(lemma7Constant(profile(), 0.9) == doctest::Approx(0.015625).epsilon(1e-12));
  CHECK(0.015625 < std::log(3.0) / 0.9);
  CHECK(lemma7Constant(profile(), 0.5) > 0.0);
  CHECK_THROWS_AS(lemma7Constant(profile(), 1.0), InvalidInput);
}

TEST_CASE("makeModulation") {
  SUBCASE("accepted amplitude is the largest admissible halving") {
    const auto mod = makeModulation(BumpShape{0.45, 0.3, 0.5}, 0.9, profile());
    int k = 0;
    while (!slopeOK(0.5 / std::pow(2.0, k), mod.c))
      ++k;
    CHECK(mod.halvings == k);
    CHECK(mod.shape.amplitude == 0.5 / std::pow(2.0, k));
    CHECK(mod.requestedAmplitude == 0.5);
    CHECK(mod.logSlope() <= mod.c);
    for (std::size_t j = 0; j < profile().nt(); ++j)
      if (profile().t[j] >= 0.9)
        CHECK(mod.theta[j] == 0.0);
  }
  SUBCASE("zero amplitude") {
    const auto mod = makeModulation(BumpShape{0.45, 0.3, 0.0}, 0.9, profile());
    CHECK(mod.halvings == 0);
    for (double th : mod.theta)
      CHECK(th == 0.0);
    CHECK(mod.eta(0.4, 1.0) == 1.0);
  }
  SUBCASE("rejections") {
    CHECK_THROWS_AS(makeModulation(BumpShape{0.45, 0.3, 1.0}, 0.9, profile()), InvalidInput);
    CHECK_THROWS_AS(makeModulation(BumpShape{0.8, 0.2, 0.1}, 0.9, profile()), InvalidInput);
    CHECK_THROWS_AS(makeModulation(BumpShape{0.1, 0.2, 0.1}, 0.9, profile()), InvalidInput);
    CHECK_THROWS_AS(makeModulation(BumpShape{0.45, 0.0, 0.1}, 0.9, profile()), InvalidInput);
  }
}

TEST_CASE("tildeAlpha") {
  const auto &f = family();
  CHECK(f.alphaTilde(0.0) == profile().alpha);
  const auto a = f.alphaTilde(1.0);
  CHECK(a.front() == 0.0);
  for (std::size_t j = 0; j + 1 < a.size(); ++j)
    CHECK(a[j + 1] > a[j]);
  // oracle: composite Simpson on a 10× finer grid
  const int n = 10 * 128;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = double(i) / n;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += w * f.modulation().eta(t, 1.0);
  }
  CHECK(std::abs(a.back() - sum / (3.0 * n)) <= 1e-9);
  CHECK(a.back() < profile().scene.obPrime);
}

TEST_CASE("admissibility over the s grid") {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i)
    grid.push_back(-1.0 + 0.1 * i);
  CHECK(admissibilityMargin(family(), grid) < 0.0);
}

TEST_CASE("perturbBody") {
  const auto &f = family();
  SUBCASE("s = 0 stays close to the base ball") {
    const auto b = perturbBody(f, 0.0);
    CHECK(b.mesh.check().valid(1e-7));
    // outer approximation: Hausdorff distance to the ball is the vertex overshoot
    double lo = 2.0, hi = 0.0;
    for (const auto &v : b.mesh.vertices()) {
      lo = std::min(lo, (v - Vec3(2, 0, 0)).norm());
      hi = std::max(hi, (v - Vec3(2, 0, 0)).norm());
    }
    CHECK(lo >= 1.0 - 1e-9);
    CHECK(hi - 1.0 <= 0.05);
  }
  SUBCASE("s = 1: tangency points lie on the boundary, ∂₊ unchanged") {
    const auto b = perturbBody(f, 1.0);
    double gap = 0.0;
    for (const auto &m : b.supportPoints)
      gap = std::max(gap, std::abs(b.mesh.planeGap(m)));
    CHECK(gap <= 1e-6);
    // every ∂₊ facet of C(1) is a facet of C(0)
    const auto b0 = perturbBody(f, 0.0);
    const OmegaSplit split(f.base());
    int plusFacets = 0;
    for (std::size_t fi = 0; fi < b.mesh.facets().size(); ++fi) {
      const UnitVector &n = b.mesh.facetNormals()[fi];
      if (split.classify(n) != OmegaSide::Plus)
        continue;
      ++plusFacets;
      double best = 1.0;
      for (std::size_t gi = 0; gi < b0.mesh.facets().size(); ++gi)
        best = std::min(best, (n.vec() - b0.mesh.facetNormals()[gi].vec()).norm() +
                                  std::abs(b.mesh.facetOffsets()[fi] - b0.mesh.facetOffsets()[gi]));
      CHECK(best <= 1e-8);
    }
    CHECK(plusFacets > 100);
  }
  CHECK_THROWS_AS(perturbBody(f, 1.5), InvalidInput);
}

TEST_CASE("directorMeasure") {
  const auto &f = family();
  const auto &delta = f.director();
  CHECK(delta.totalVariation() > 0.0);
  CHECK(delta.firstMoment().norm() <= 1e-6 * delta.totalVariation());
  const auto diff = f.measureAt(1.0) - f.baseMeasure();
  const OmegaSplit split(f.base());
  for (std::size_t b = 0; b < delta.size(); ++b) {
    REQUIRE(std::abs(delta.mass(b) - diff.mass(b)) <= 1e-8);
    if (split.classifyBin(f.partition(), b) == OmegaSplit::BinClass::Plus)
      REQUIRE(delta.mass(b) == 0.0);
  }
  const PerturbedFamily flat = makeFamily(profile(), BumpShape{0.45, 0.3, 0.0}, 0.9, f.partition());
  CHECK(flat.director().totalVariation() == 0.0);
}

TEST_CASE("verifySegment") {
  const auto &f = family();
  const auto rep = verifySegment(f, {-1.0, -0.5, 0.0, 0.5, 1.0}, 1e-10);
  CHECK(rep.affineOK);
  CHECK(rep.midpointOK);
  CHECK(rep.omegaPlusIdentical);
  CHECK(rep.residual[2] == 0.0);
  for (double c : rep.closure)
    CHECK(c <= 1e-6 * rep.totalMass);
  CHECK(rep.totalMass == doctest::Approx(4 * kPi).epsilon(1e-4));
}

TEST_CASE("lemma8 and lemma10 on the ball family") {
  const auto &f = family();
  CHECK(lemma8Check(f, 0.0) == sandwichViolation(profile().r, profile().sigma, profile().alpha));
  for (double s : {-1.0, 1.0}) {
    CHECK(lemma8Check(f, s) <= 1e-9 * 2);
    for (double tau : {0.5, 0.9}) {
      const auto c = lemma10Check(f, s, tau);
      CHECK(c.ok());
      // on [0.9, 1] the section is an unperturbed unit circle
      if (tau == 0.9)
        CHECK(c.measured == doctest::Approx(1.0).epsilon(1e-3));
    }
  }
}

TEST_CASE("rank probe") {
  std::vector<BumpShape> bumps;
  for (int i = 0; i < 12; ++i)
    bumps.push_back({0.08 + 0.06 * i, 0.07, 0.5});
  const auto rep = rankProbe(profile(), bumps, 0.9, SphericalPartition(Vec3(1, 0, 0), 256, 16));
  CHECK(rep.rank == 12);
  // two copies of one bump: rank drops
  const auto dup = rankProbe(profile(), {bumps[3], bumps[3], bumps[5]}, 0.9, SphericalPartition(Vec3(1, 0, 0), 256, 16));
  CHECK(dup.rank == 2);
}
