#pragma once

#include "surfmeas/minkowski.hpp"
#include "surfmeas/perturb.hpp"
#include "surfmeas/resistance.hpp"

namespace surfmeas {

/// Unit cube over the floor z = 0 turned into a pentagonal "house": the top
/// face is replaced by the roof faces with normals v± = (e₃ ± e₁)/√2.
DiscreteMeasure houseMeasure();

struct CubeHouseReport {
  DiscreteMeasure cube, house;
  double offExceptionalDifference = 0.0; ///< max weight difference off {e₃, v±}
  std::size_t comparedAtoms = 0;
  Polytope cubeBody, houseBody;          ///< reconstructed, centered
  double centeredHausdorff = 0.0;
  double cubePreimageArea = 0.0, housePreimageArea = 0.0;
  bool measuresAgree() const { return offExceptionalDifference == 0.0 && comparedAtoms == 5; }
  bool bodiesDiffer() const { return centeredHausdorff > 0.05; }
};

/// Reconstructs both bodies from their measures and compares them.
CubeHouseReport cubeHouseDemo(const ReconstructionSettings &settings = {});

struct BallFamilyOptions {
  int tNodes = 257;
  int phiCount = 512;
  BumpShape bump{};
  double T = 0.9;
  std::vector<double> s{-1.0, -0.5, 0.0, 0.5, 1.0};
  double segmentTolerance = 1e-10;
};

struct BallFamilyReport {
  SegmentReport segment;
  AffineReport newton;
  double lemma8 = 0.0; ///< worst over s = ±1
  CurvatureCheck lemma10;
  double acceptedAmplitude = 0.0;
  std::vector<BinnedMeasure> measures; ///< ν_{C(s)} per s
  bool ok() const {
    return segment.affineOK && segment.midpointOK && segment.omegaPlusIdentical && newton.ok && lemma10.ok() &&
           lemma8 <= 1e-9 * 2.0;
  }
};

/// Off-center unit ball at (2, 0, 0) seen from the origin; bump family.
BallFamilyReport ballFamilyDemo(const BallFamilyOptions &opt = {});

} // namespace surfmeas
