#include "surfmeas/demos.hpp"

#include <algorithm>
#include <cmath>

namespace surfmeas {

DiscreteMeasure houseMeasure() {
  const double r = std::sqrt(0.5);
  return DiscreteMeasure({{UnitVector(1, 0, 0), 1.0},
                          {UnitVector(-1, 0, 0), 1.0},
                          {UnitVector(0, 1, 0), 1.0},
                          {UnitVector(0, -1, 0), 1.0},
                          {UnitVector(0, 0, -1), 1.0},
                          {UnitVector(1, 0, 1), r},
                          {UnitVector(-1, 0, 1), r}});
}

CubeHouseReport cubeHouseDemo(const ReconstructionSettings &settings) {
  CubeHouseReport rep;
  rep.cube = surfaceMeasure(unitCube(Vec3(0, 0, 0.5)));
  rep.house = houseMeasure();
  const std::vector<UnitVector> exceptional{UnitVector(0, 0, 1), UnitVector(1, 0, 1), UnitVector(-1, 0, 1)};
  auto regular = [&](const UnitVector &n) {
    return std::all_of(exceptional.begin(), exceptional.end(),
                       [&](const UnitVector &e) { return angleBetween(n, e) > 1e-6; });
  };
  for (const auto &a : rep.cube.atoms())
    if (regular(a.n)) {
      ++rep.comparedAtoms;
      rep.offExceptionalDifference = std::max(rep.offExceptionalDifference, std::abs(a.w - rep.house.weightAt(a.n)));
    }
  for (const auto &a : rep.house.atoms())
    if (regular(a.n))
      rep.offExceptionalDifference = std::max(rep.offExceptionalDifference, std::abs(a.w - rep.cube.weightAt(a.n)));

  rep.cubeBody = reconstruct(rep.cube, settings);
  rep.houseBody = reconstruct(rep.house, settings);
  rep.centeredHausdorff = distanceUpToTranslation(rep.cubeBody, rep.houseBody);
  rep.cubePreimageArea = gaussPreimage(rep.cubeBody, regular).area;
  rep.housePreimageArea = gaussPreimage(rep.houseBody, regular).area;
  return rep;
}

BallFamilyReport ballFamilyDemo(const BallFamilyOptions &opt) {
  const BodyModel ball = Ball{Vec3(2, 0, 0), 1.0};
  const auto scene = SceneFrame::make(Vec3::Zero(), Vec3(1, 0, 0), Vec3(3, 0, 0));
  const auto profile = buildProfile(ball, scene, opt.tNodes, opt.phiCount);
  const auto family = makeFamily(profile, opt.bump, opt.T, SphericalPartition(scene.frame.axis));

  BallFamilyReport rep;
  rep.acceptedAmplitude = family.modulation().shape.amplitude;
  rep.segment = verifySegment(family, opt.s, opt.segmentTolerance);
  rep.newton = affineCheck(family, newtonDragFunctional(), opt.s);
  rep.lemma8 = std::max(lemma8Check(family, -1.0), lemma8Check(family, 1.0));
  rep.lemma10 = lemma10Check(family, 1.0, opt.T);
  const auto other = lemma10Check(family, -1.0, opt.T);
  if (other.measured - other.bound > rep.lemma10.measured - rep.lemma10.bound)
    rep.lemma10 = other;
  for (double s : opt.s)
    rep.measures.push_back(family.measureAt(s));
  return rep;
}

} // namespace surfmeas
