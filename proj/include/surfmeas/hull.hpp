#pragma once

#include "surfmeas/geometry.hpp"

#include <array>
#include <span>
#include <vector>

namespace surfmeas {

/// Triangulated boundary of the convex hull of a point set. Triangles index
/// into the input array and are oriented counter-clockwise seen from outside.
struct HullTriangles {
  std::vector<std::array<int, 3>> triangles;
  std::vector<Vec3> normals;   ///< unit outward normal per triangle
  std::vector<double> offsets; ///< plane offset per triangle: ⟨normal, p⟩ = offset
  double tolerance = 0.0;      ///< distance below which points count as coplanar
};

/// Quickhull. Throws InvalidInput when the points do not span 3 dimensions.
HullTriangles quickhull(std::span<const Vec3> points);

} // namespace surfmeas
