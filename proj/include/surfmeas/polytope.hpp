#pragma once

#include "surfmeas/geometry.hpp"
#include "surfmeas/measures.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace surfmeas {

struct PolytopeReport {
  double planeResidual = 0.0;     ///< max distance of a vertex from an incident facet plane
  double convexityViolation = 0.0;///< max ⟨v, nⱼ⟩ − hⱼ over all vertices and facets
  double closureResidual = 0.0;   ///< |Σ aⱼ nⱼ| / Σ aⱼ
  int euler = 0;                  ///< V − E + F
  bool valid(double tol = 1e-9) const {
    return planeResidual <= tol && convexityViolation <= tol && closureResidual <= tol && euler == 2;
  }
};

/// Convex polytope as a vertex-facet mesh. Facet cycles are counter-clockwise
/// seen from outside.
class Polytope {
public:
  Polytope() = default;
  /// Assembles a mesh and derives normals, offsets and areas from the cycles.
  Polytope(std::vector<Vec3> vertices, std::vector<std::vector<int>> facets);

  const std::vector<Vec3> &vertices() const noexcept { return vertices_; }
  const std::vector<std::vector<int>> &facets() const noexcept { return facets_; }
  const std::vector<UnitVector> &facetNormals() const noexcept { return normals_; }
  const std::vector<double> &facetAreas() const noexcept { return areas_; }
  const std::vector<double> &facetOffsets() const noexcept { return offsets_; }
  std::size_t facetCount() const noexcept { return facets_.size(); }

  PolytopeReport check() const;
  /// Throws InvalidInput when check() fails at the given tolerance.
  void validate(double tol = 1e-9) const;

  double surfaceArea() const;
  double volume() const;
  Vec3 centroid() const; ///< volume centroid
  double diameter() const;
  int edgeCount() const;

  Polytope translated(const Vec3 &v) const;
  Polytope scaled(double lambda) const;

  /// Signed distance of p to the boundary: positive outside (max of plane gaps).
  double planeGap(const Vec3 &p) const;
  /// Euclidean distance from p to the polytope (0 inside).
  double distanceTo(const Vec3 &p) const;

private:
  std::vector<Vec3> vertices_;
  std::vector<std::vector<int>> facets_;
  std::vector<UnitVector> normals_;
  std::vector<double> offsets_;
  std::vector<double> areas_;
};

/// Hull of a point set with coplanar triangles merged into polygonal facets.
/// Vertices keep the relative input order; points that are not vertices are
/// dropped.
Polytope convexHullPolytope(std::span<const Vec3> points);

/// Support-number description ⟨x, nⱼ⟩ ≤ hⱼ. Construction checks that the
/// region is bounded ("unbounded system") with nonempty interior
/// ("infeasible system").
class HalfspaceSystem {
public:
  HalfspaceSystem(std::vector<UnitVector> normals, std::vector<double> offsets);
  /// Facet planes of a polytope.
  static HalfspaceSystem fromPolytope(const Polytope &p);

  const std::vector<UnitVector> &normals() const noexcept { return normals_; }
  const std::vector<double> &offsets() const noexcept { return offsets_; }
  const Vec3 &interiorPoint() const noexcept { return center_; }
  double inradius() const noexcept { return radius_; }

private:
  std::vector<UnitVector> normals_;
  std::vector<double> offsets_;
  Vec3 center_ = Vec3::Zero();
  double radius_ = 0.0;
};

struct HalfspaceResult {
  Polytope polytope;
  std::vector<int> sourcePlane; ///< per facet, index of the generating halfspace
};

/// Intersection by polar duality around the Chebyshev center. Redundant
/// halfspaces and facets with area < 1e−12 are dropped.
HalfspaceResult halfspaceIntersectionDetailed(const HalfspaceSystem &h);
Polytope halfspaceIntersection(const HalfspaceSystem &h);

/// One atom per facet normal weighted by facet area.
DiscreteMeasure surfaceMeasure(const Polytope &p);

struct GaussPreimage {
  std::vector<int> facets;
  double area = 0.0;
};
GaussPreimage gaussPreimage(const Polytope &p, const std::function<bool(const UnitVector &)> &region);

/// Symmetric Hausdorff distance between two convex polytopes.
double hausdorffDistance(const Polytope &a, const Polytope &b);

Polytope readOFF(const std::string &text);
std::string writeOFF(const Polytope &p);

// Standard fixtures.
Polytope unitCube(const Vec3 &center = Vec3::Zero());
Polytope regularTetrahedron(double edge = 1.0);

} // namespace surfmeas
