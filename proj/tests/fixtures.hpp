#pragma once

#include "surfmeas/capbody.hpp"

namespace fixtures {

using namespace surfmeas;

/// Unit ball centered at (2, 0, 0) seen from the origin along +x, with
/// B = (1, 0, 0) and B′ = (3, 0, 0).
inline BodyModel offCenterBall() { return Ball{Vec3(2, 0, 0), 1.0}; }
inline SceneFrame ballScene() { return SceneFrame::make(Vec3::Zero(), Vec3(1, 0, 0), Vec3(3, 0, 0)); }
inline CylindricalProfile ballProfile(int tNodes, int phiCount) {
  return buildProfile(offCenterBall(), ballScene(), tNodes, phiCount);
}

// closed-form tangent geometry of the ball fixture, d = 2 − t
inline double ballSigma(double t) {
  const double d = 2.0 - t;
  return std::sqrt(d * d - 1.0);
}
inline double ballR(double t) {
  const double d = 2.0 - t;
  return std::sqrt(d * d - 1.0) / d;
}

} // namespace fixtures
