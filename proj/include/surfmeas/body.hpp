#pragma once

#include "surfmeas/graph_body.hpp"
#include "surfmeas/polytope.hpp"

#include <string>
#include <variant>

namespace surfmeas {

struct Ball {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;
};

/// Axis-aligned ellipsoid: semiAxes along the world x, y, z directions.
struct Ellipsoid {
  Vec3 center = Vec3::Zero();
  Vec3 semiAxes = Vec3::Ones();
};

using BodyModel = std::variant<Ball, Ellipsoid, Polytope, GraphBody>;

std::string bodyKind(const BodyModel &b);
/// Throws InvalidInput("invalid body: ...").
void validateBody(const BodyModel &b);
bool bodyContains(const BodyModel &b, const Vec3 &p, double tol = 0.0);
double bodyDiameter(const BodyModel &b);
/// Inscribed polytope through `resolution`-ish surface samples (the polytope
/// itself for polytope bodies).
Polytope bodyMesh(const BodyModel &b, int resolution = 4000);

/// Approximately uniform directions: golden-spiral layout.
std::vector<UnitVector> spiralDirections(int count);

} // namespace surfmeas
