// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.
#include "fixtures.hpp"
#include "surfmeas/body.hpp"
#include "surfmeas/demos.hpp"
#include "surfmeas/errors.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

using namespace surfmeas;
using namespace fixtures;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char *name, double limitSeconds, const std::function<Outcome()> &body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception &e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limitSeconds > 0 && secs > limitSeconds) {
    o.pass = false;
    o.detail += " [runtime limit " + std::to_string(limitSeconds) + " s exceeded]";
  }
  failures += o.pass ? 0 : 1;
  std::printf("%s criterion %2d  %-34s %8.2f s  %s\n", o.pass ? "PASS" : "FAIL", id, name, secs, o.detail.c_str());
  std::fflush(stdout);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Random tangent planes ⟨x, n⟩ ≤ h, h ∈ [1, 1.5], until the intersection is a
// bounded polytope with 10–50 facets.
Polytope randomPolytope(std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> count(10, 60);
  for (;;) {
    const int n = count(rng);
    std::vector<UnitVector> normals;
    std::vector<double> offsets;
    for (int i = 0; i < n; ++i) {
      normals.emplace_back(g(rng), g(rng), g(rng));
      offsets.push_back(1.0 + 0.5 * u(rng));
    }
    try {
      Polytope p = halfspaceIntersection(HalfspaceSystem(normals, offsets));
      if (p.facetCount() >= 10 && p.facetCount() <= 50)
        return p;
    } catch (const InvalidInput &) {
      // unbounded draw
    }
  }
}

double maxScaledGap(const Eigen::MatrixXd &a, const std::function<double(int)> &oracle) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    const double v = oracle(static_cast<int>(j));
    for (Eigen::Index k = 0; k < a.cols(); ++k)
      worst = std::max(worst, std::abs(a(j, k) - v));
  }
  return worst;
}

double capMassError(int tNodes, int phiCount, StieltjesRule rule) {
  const auto p = ballProfile(tNodes, phiCount);
  QuadratureOptions q;
  q.rule = rule;
  const auto mu = measureFromProfile(p, SphericalPartition(Vec3(1, 0, 0)), unitWeights(p), q);
  return std::abs(mu.totalMass() - kPi);
}

} // namespace

int main() {
  criterion(1, "cube/house", 10.0, [] {
    const auto rep = cubeHouseDemo();
    const bool areas = std::abs(rep.cubePreimageArea - 5.0) <= 1e-6 && std::abs(rep.housePreimageArea - 5.0) <= 1e-6;
    return Outcome{rep.measuresAgree() && rep.bodiesDiffer() && areas,
                   "offDiff=" + num(rep.offExceptionalDifference) + " hausdorff=" + num(rep.centeredHausdorff) +
                       " preimage=" + num(rep.cubePreimageArea) + "/" + num(rep.housePreimageArea)};
  });

  criterion(2, "Alexandrov round trip", 60.0, [] {
    std::mt19937_64 rng(20231);
    double worstL1 = 0.0, worstTranslation = 0.0;
    for (int i = 0; i < 20; ++i) {
      const Polytope p = randomPolytope(rng);
      const DiscreteMeasure mu = surfaceMeasure(p);
      ReconstructionSettings s;
      const Polytope a = reconstruct(mu, s);
      s.randomSeed = 1000 + i;
      const Polytope b = reconstruct(mu, s);
      worstL1 = std::max({worstL1, measureResidual(a, mu), measureResidual(b, mu)});
      worstTranslation = std::max(worstTranslation, distanceUpToTranslation(a, b) / p.diameter());
      worstTranslation = std::max(worstTranslation, distanceUpToTranslation(a, p) / p.diameter());
    }
    return Outcome{worstL1 <= 1e-6 && worstTranslation <= 1e-5,
                   "L1=" + num(worstL1) + " translation/diam=" + num(worstTranslation)};
  });

  criterion(3, "Blaschke homogeneity", 0.0, [] {
    const Polytope cube = unitCube();
    const Polytope tet = regularTetrahedron();
    const double homog = distanceUpToTranslation(blaschkeSum(cube, cube), cube.scaled(std::sqrt(2.0)));
    const double comm = distanceUpToTranslation(blaschkeSum(cube, tet), blaschkeSum(tet, cube));
    return Outcome{homog <= 1e-6 && comm <= 1e-6, "homogeneity=" + num(homog) + " commutativity=" + num(comm)};
  });

  criterion(4, "profile oracle", 0.0, [] {
    const auto p = ballProfile(257, 512);
    const double er = maxScaledGap(p.r, [&](int j) { return ballR(p.t[j]); });
    const double es = maxScaledGap(p.sigma, [&](int j) { return ballSigma(p.t[j]); });
    const double gamma = validateConditions(p, 0.9).gamma;
    const double sandwich = sandwichViolation(p.r, p.sigma, p.alpha);
    const bool ok = er <= 1e-9 && es <= 1e-9 && std::abs(gamma - 0.0625) <= 1e-12 && sandwich <= 1e-9 * 2.0;
    return Outcome{ok, "r=" + num(er) + " sigma=" + num(es) + " gamma-1/16=" + num(gamma - 0.0625) +
                           " sandwich=" + num(sandwich)};
  });

  criterion(5, "integral formula", 0.0, [] {
    const double e = capMassError(257, 512, StieltjesRule::Midpoint);
    // first-order rule, one refinement of both Δt and Δφ
    const double l1 = capMassError(257, 512, StieltjesRule::LeftEndpoint);
    const double l2 = capMassError(513, 1024, StieltjesRule::LeftEndpoint);
    const double order = std::log2(l1 / l2);
    return Outcome{e <= 1e-3 && order >= 0.8,
                   "|cap-pi|=" + num(e) + " left-rule errors " + num(l1) + " -> " + num(l2) + " order=" + num(order)};
  });

  // ball family shared by criteria 6, 8 and 10
  std::optional<PerturbedFamily> family;
  const std::vector<double> sList{-1.0, -0.5, 0.0, 0.5, 1.0};

  criterion(6, "segment property", 120.0, [&] {
    family.emplace(makeFamily(ballProfile(257, 512), BumpShape{}, 0.9, SphericalPartition(Vec3(1, 0, 0))));
    const auto rep = verifySegment(*family, sList, 1e-10);
    double closure = 0.0, residual = 0.0;
    for (std::size_t i = 0; i < rep.s.size(); ++i) {
      closure = std::max(closure, rep.closure[i]);
      residual = std::max(residual, rep.residual[i]);
    }
    const bool closed = closure <= 1e-6 * rep.totalMass;
    return Outcome{rep.affineOK && rep.midpointOK && rep.omegaPlusIdentical && closed,
                   "residual/mass=" + num(residual / rep.totalMass) +
                       " midpoint/mass=" + num(rep.midpointResidual / rep.totalMass) +
                       " closure/mass=" + num(closure / rep.totalMass) +
                       (rep.omegaPlusIdentical ? " plus-bins identical" : " plus-bins differ")};
  });

  criterion(7, "rank probe", 0.0, [] {
    std::vector<BumpShape> bumps;
    for (int i = 0; i < 12; ++i)
      bumps.push_back({0.08 + 0.06 * i, 0.07, 0.5});
    const auto rep = rankProbe(ballProfile(257, 512), bumps, 0.9, SphericalPartition(Vec3(1, 0, 0), 256, 16));
    const auto &sv = rep.singularValues;
    return Outcome{rep.rank == 12, "rank=" + std::to_string(rep.rank) +
                                       " smallest/largest=" + num(sv[sv.size() - 1] / sv[0])};
  });

  criterion(8, "affine functionals", 0.0, [&] {
    if (!family)
      return Outcome{false, "family unavailable"};
    bool ok = true;
    std::string detail;
    for (const auto &f : {newtonDragFunctional(), randomFunctional(1), randomFunctional(2), randomFunctional(3)}) {
      const auto rep = affineCheck(*family, f, sList);
      ok = ok && rep.ok && rep.maxResidual <= 1e-8 * rep.reference;
      detail += f.name + "=" + num(rep.maxResidual / rep.reference) + " ";
    }
    return Outcome{ok, detail};
  });

  criterion(9, "resistance sanity", 0.0, [] {
    const double flat = graphResistance(GraphBody::sample(512, 1.0, [](double, double) { return 1.0; }));
    const double cone =
        graphResistance(GraphBody::sample(512, 1.0, [](double x, double y) { return 1.0 - std::hypot(x, y); }));
    const double base = std::sqrt(3.0);
    const auto cap = GraphBody::sample(256, 2.0 - base, [&](double x, double y) {
      return std::sqrt(std::max(0.0, 4.0 - x * x - y * y)) - base;
    });
    const double viaGraph = graphResistance(cap);
    const double viaMeasure = functional(surfaceMeasure(bodyMesh(BodyModel(cap))), newtonDragFunctional());
    const double rel = std::abs(viaMeasure - viaGraph) / viaGraph;
    return Outcome{std::abs(flat - kPi) <= 1e-3 && std::abs(cone - kPi / 2) <= 1e-3 && rel <= 0.01,
                   "flat-pi=" + num(flat - kPi) + " cone-pi/2=" + num(cone - kPi / 2) + " cap rel=" + num(rel)};
  });

  criterion(10, "tilde sandwich and curvature", 0.0, [&] {
    if (!family)
      return Outcome{false, "family unavailable"};
    const double diam = family->base().diam;
    bool ok = true;
    std::string detail;
    for (double s : {-1.0, 1.0}) {
      const double l8 = lemma8Check(*family, s);
      const auto c = lemma10Check(*family, s, 0.9);
      ok = ok && l8 <= 1e-9 * diam && c.ok();
      detail += "s=" + num(s) + ": sandwich=" + num(l8) + " curvature " + num(c.measured) + "<=" + num(c.bound) + " ";
    }
    return Outcome{ok, detail};
  });

  std::printf("%d criteria failed\n", failures);
  return failures;
}
