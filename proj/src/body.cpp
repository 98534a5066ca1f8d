#include "surfmeas/body.hpp"

#include "surfmeas/errors.hpp"

namespace surfmeas {

namespace {
template <class... F> struct Overload : F... {
  using F::operator()...;
};
template <class... F> Overload(F...) -> Overload<F...>;
} // namespace

std::string bodyKind(const BodyModel &b) {
  return std::visit(Overload{[](const Ball &) { return std::string("ball"); },
                             [](const Ellipsoid &) { return std::string("ellipsoid"); },
                             [](const Polytope &) { return std::string("polytope"); },
                             [](const GraphBody &) { return std::string("graph"); }},
                    b);
}

void validateBody(const BodyModel &b) {
  std::visit(Overload{[](const Ball &x) {
                        if (!(x.radius > 0.0) || !x.center.allFinite())
                          throw InvalidInput("invalid body: ball radius must be positive");
                      },
                      [](const Ellipsoid &x) {
                        if (!(x.semiAxes.minCoeff() > 0.0) || !x.center.allFinite())
                          throw InvalidInput("invalid body: ellipsoid semi-axes must be positive");
                      },
                      [](const Polytope &p) {
                        if (!p.check().valid())
                          throw InvalidInput("invalid body: polytope invariants fail");
                      },
                      [](const GraphBody &g) { g.validate(); }},
             b);
}

bool bodyContains(const BodyModel &b, const Vec3 &p, double tol) {
  return std::visit(Overload{[&](const Ball &x) { return (p - x.center).norm() <= x.radius + tol; },
                             [&](const Ellipsoid &x) {
                               const Vec3 q = (p - x.center).cwiseQuotient(x.semiAxes);
                               return q.norm() <= 1.0 + tol / x.semiAxes.minCoeff();
                             },
                             [&](const Polytope &x) { return x.planeGap(p) <= tol; },
                             [&](const GraphBody &g) { return g.contains(p, tol); }},
                    b);
}

double bodyDiameter(const BodyModel &b) {
  return std::visit(Overload{[](const Ball &x) { return 2.0 * x.radius; },
                             [](const Ellipsoid &x) { return 2.0 * x.semiAxes.maxCoeff(); },
                             [](const Polytope &p) { return p.diameter(); },
                             [](const GraphBody &g) {
                               // grid max over rim and top samples
                               const auto pts = g.boundarySamples(128);
                               double d2 = 0.0;
                               for (std::size_t i = 0; i < pts.size(); ++i)
                                 for (std::size_t j = i + 1; j < pts.size(); ++j)
                                   d2 = std::max(d2, (pts[i] - pts[j]).squaredNorm());
                               return std::sqrt(d2);
                             }},
                    b);
}

std::vector<UnitVector> spiralDirections(int count) {
  std::vector<UnitVector> out;
  out.reserve(static_cast<std::size_t>(count));
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / count;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    out.push_back(UnitVector(rho * std::cos(golden * i), rho * std::sin(golden * i), z));
  }
  return out;
}

Polytope bodyMesh(const BodyModel &b, int resolution) {
  return std::visit(Overload{[&](const Ball &x) {
                               std::vector<Vec3> pts;
                               for (const auto &n : spiralDirections(resolution))
                                 pts.push_back(x.center + x.radius * n.vec());
                               return convexHullPolytope(pts);
                             },
                             [&](const Ellipsoid &x) {
                               std::vector<Vec3> pts;
                               for (const auto &n : spiralDirections(resolution))
                                 pts.push_back(x.center + n.vec().cwiseProduct(x.semiAxes));
                               return convexHullPolytope(pts);
                             },
                             [](const Polytope &p) { return p; },
                             [&](const GraphBody &g) {
                               const auto pts = g.boundarySamples(
                                   std::max(64, static_cast<int>(std::sqrt(static_cast<double>(resolution)))));
                               return convexHullPolytope(pts);
                             }},
                    b);
}

} // namespace surfmeas
