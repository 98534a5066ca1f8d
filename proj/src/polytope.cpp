#include "surfmeas/polytope.hpp"

#include "surfmeas/errors.hpp"
#include "surfmeas/hull.hpp"
#include "surfmeas/linprog.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

namespace surfmeas {

namespace {

Vec3 facetCentroidOfCycle(const std::vector<Vec3> &v, const std::vector<int> &cyc) {
  Vec3 c = Vec3::Zero();
  for (int i : cyc)
    c += v[i];
  return c / static_cast<double>(cyc.size());
}

// Σ ½ (pᵢ − c) × (pᵢ₊₁ − c): the vector area of a planar cycle.
Vec3 vectorArea(const std::vector<Vec3> &v, const std::vector<int> &cyc) {
  const Vec3 c = facetCentroidOfCycle(v, cyc);
  Vec3 a = Vec3::Zero();
  for (std::size_t i = 0; i < cyc.size(); ++i)
    a += (v[cyc[i]] - c).cross(v[cyc[(i + 1) % cyc.size()]] - c);
  return 0.5 * a;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::uint64_t edgeKey(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

double pointSegmentDistance(const Vec3 &p, const Vec3 &a, const Vec3 &b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

} // namespace

Polytope::Polytope(std::vector<Vec3> vertices, std::vector<std::vector<int>> facets)
    : vertices_(std::move(vertices)), facets_(std::move(facets)) {
  normals_.reserve(facets_.size());
  for (const auto &cyc : facets_) {
    if (cyc.size() < 3)
      throw InvalidInput("facet with fewer than 3 vertices");
    for (int i : cyc)
      if (i < 0 || static_cast<std::size_t>(i) >= vertices_.size())
        throw InvalidInput("facet index out of range");
    const Vec3 va = vectorArea(vertices_, cyc);
    const double a = va.norm();
    if (!(a > 0.0))
      throw InvalidInput("degenerate facet");
    const UnitVector n(va);
    normals_.push_back(n);
    areas_.push_back(a);
    offsets_.push_back(n.dot(facetCentroidOfCycle(vertices_, cyc)));
  }
}

PolytopeReport Polytope::check() const {
  PolytopeReport r;
  const double scale = std::max(1.0, diameter());
  Vec3 closure = Vec3::Zero();
  double total = 0.0;
  for (std::size_t j = 0; j < facets_.size(); ++j) {
    for (int i : facets_[j])
      r.planeResidual = std::max(r.planeResidual, std::abs(normals_[j].dot(vertices_[i]) - offsets_[j]) / scale);
    closure += areas_[j] * normals_[j].vec();
    total += areas_[j];
  }
  for (const auto &v : vertices_)
    for (std::size_t j = 0; j < facets_.size(); ++j)
      r.convexityViolation = std::max(r.convexityViolation, (normals_[j].dot(v) - offsets_[j]) / scale);
  r.closureResidual = total > 0.0 ? closure.norm() / total : 0.0;
  r.euler = static_cast<int>(vertices_.size()) - edgeCount() + static_cast<int>(facets_.size());
  return r;
}

void Polytope::validate(double tol) const {
  const auto r = check();
  if (!r.valid(tol))
    throw InvalidInput("invalid polytope");
}

int Polytope::edgeCount() const {
  std::size_t halfEdges = 0;
  for (const auto &f : facets_)
    halfEdges += f.size();
  return static_cast<int>(halfEdges / 2);
}

double Polytope::surfaceArea() const { return std::accumulate(areas_.begin(), areas_.end(), 0.0); }

double Polytope::volume() const {
  // Σ ⅓ hⱼ aⱼ relative to a vertex, which keeps the sum well conditioned.
  if (vertices_.empty())
    return 0.0;
  const Vec3 o = vertices_.front();
  double v = 0.0;
  for (std::size_t j = 0; j < facets_.size(); ++j)
    v += (offsets_[j] - normals_[j].dot(o)) * areas_[j];
  return v / 3.0;
}

Vec3 Polytope::centroid() const {
  if (vertices_.empty())
    return Vec3::Zero();
  const Vec3 o = vertices_.front();
  Vec3 acc = Vec3::Zero();
  double vol = 0.0;
  for (const auto &cyc : facets_) {
    const Vec3 c = facetCentroidOfCycle(vertices_, cyc);
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      const Vec3 a = vertices_[cyc[i]] - o;
      const Vec3 b = vertices_[cyc[(i + 1) % cyc.size()]] - o;
      const Vec3 cc = c - o;
      const double t = cc.dot(a.cross(b)) / 6.0;
      vol += t;
      acc += t * (a + b + cc) / 4.0;
    }
  }
  return vol != 0.0 ? Vec3(o + acc / vol) : o;
}

double Polytope::diameter() const {
  double d2 = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    for (std::size_t j = i + 1; j < vertices_.size(); ++j)
      d2 = std::max(d2, (vertices_[i] - vertices_[j]).squaredNorm());
  return std::sqrt(d2);
}

Polytope Polytope::translated(const Vec3 &v) const {
  Polytope p = *this;
  for (auto &x : p.vertices_)
    x += v;
  for (std::size_t j = 0; j < p.offsets_.size(); ++j)
    p.offsets_[j] += p.normals_[j].dot(v);
  return p;
}

Polytope Polytope::scaled(double lambda) const {
  if (!(lambda > 0.0))
    throw InvalidInput("scale factor must be positive");
  Polytope p = *this;
  for (auto &x : p.vertices_)
    x *= lambda;
  for (auto &h : p.offsets_)
    h *= lambda;
  for (auto &a : p.areas_)
    a *= lambda * lambda;
  return p;
}

double Polytope::planeGap(const Vec3 &p) const {
  double g = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < facets_.size(); ++j)
    g = std::max(g, normals_[j].dot(p) - offsets_[j]);
  return g;
}

double Polytope::distanceTo(const Vec3 &p) const {
  if (planeGap(p) <= 0.0)
    return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < facets_.size(); ++j) {
    const auto &cyc = facets_[j];
    const Vec3 &n = normals_[j].vec();
    const Vec3 q = p - (n.dot(p) - offsets_[j]) * n;
    bool inside = true;
    for (std::size_t i = 0; i < cyc.size() && inside; ++i) {
      const Vec3 &a = vertices_[cyc[i]];
      const Vec3 &b = vertices_[cyc[(i + 1) % cyc.size()]];
      if ((b - a).cross(q - a).dot(n) < 0.0)
        inside = false;
    }
    if (inside) {
      best = std::min(best, std::abs(n.dot(p) - offsets_[j]));
      continue;
    }
    for (std::size_t i = 0; i < cyc.size(); ++i)
      best = std::min(best, pointSegmentDistance(p, vertices_[cyc[i]], vertices_[cyc[(i + 1) % cyc.size()]]));
  }
  return best;
}

Polytope convexHullPolytope(std::span<const Vec3> points) {
  const HullTriangles hull = quickhull(points);
  const std::size_t nt = hull.triangles.size();

  std::unordered_map<std::uint64_t, int> edgeOwner;
  edgeOwner.reserve(nt * 3);
  for (std::size_t t = 0; t < nt; ++t)
    for (int k = 0; k < 3; ++k)
      edgeOwner[edgeKey(hull.triangles[t][k], hull.triangles[t][(k + 1) % 3])] = static_cast<int>(t);

  double scale = 0.0;
  for (const auto &p : points)
    scale = std::max(scale, p.cwiseAbs().maxCoeff());
  const double planeTol = std::max(1e-9 * scale, 4.0 * hull.tolerance);

  // Merge neighbours whose far vertex lies on this triangle's plane.
  UnionFind uf(nt);
  for (std::size_t t = 0; t < nt; ++t)
    for (int k = 0; k < 3; ++k) {
      const int a = hull.triangles[t][k], b = hull.triangles[t][(k + 1) % 3];
      auto it = edgeOwner.find(edgeKey(b, a));
      if (it == edgeOwner.end())
        throw InvalidInput("hull is not a closed surface");
      const int u = it->second;
      if (static_cast<std::size_t>(u) < t)
        continue;
      int far = -1;
      for (int q = 0; q < 3; ++q)
        if (hull.triangles[u][q] != a && hull.triangles[u][q] != b)
          far = hull.triangles[u][q];
      const double d1 = std::abs(hull.normals[t].dot(points[far]) - hull.offsets[t]);
      int farT = -1;
      for (int q = 0; q < 3; ++q)
        if (hull.triangles[t][q] != a && hull.triangles[t][q] != b)
          farT = hull.triangles[t][q];
      const double d2 = std::abs(hull.normals[u].dot(points[farT]) - hull.offsets[u]);
      if (d1 <= planeTol && d2 <= planeTol && hull.normals[t].dot(hull.normals[u]) > 0.0)
        uf.unite(static_cast<int>(t), u);
    }

  // Boundary edges of each group, chained into one cycle.
  std::map<int, std::vector<std::pair<int, int>>> groupEdges;
  for (std::size_t t = 0; t < nt; ++t)
    for (int k = 0; k < 3; ++k) {
      const int a = hull.triangles[t][k], b = hull.triangles[t][(k + 1) % 3];
      const int u = edgeOwner.at(edgeKey(b, a));
      if (uf.find(u) != uf.find(static_cast<int>(t)))
        groupEdges[uf.find(static_cast<int>(t))].push_back({a, b});
    }

  std::vector<std::vector<int>> cycles;
  for (auto &[g, edges] : groupEdges) {
    std::unordered_map<int, int> next;
    for (auto [a, b] : edges) {
      if (next.count(a))
        throw InvalidInput("non-manifold facet boundary");
      next[a] = b;
    }
    std::vector<int> cyc;
    int start = edges.front().first;
    for (auto [a, b] : edges)
      start = std::min(start, a);
    int cur = start;
    do {
      cyc.push_back(cur);
      cur = next.at(cur);
      if (cyc.size() > edges.size())
        throw InvalidInput("unclosed facet boundary");
    } while (cur != start);
    if (cyc.size() != edges.size())
      throw InvalidInput("facet boundary has several loops");
    cycles.push_back(std::move(cyc));
  }

  // Vertices lying on an edge (only two incident facets) are not corners.
  std::vector<int> incidence(points.size(), 0);
  for (const auto &c : cycles)
    for (int i : c)
      ++incidence[i];
  for (auto &c : cycles)
    c.erase(std::remove_if(c.begin(), c.end(), [&](int i) { return incidence[i] < 3; }), c.end());

  std::vector<int> remap(points.size(), -1);
  std::vector<Vec3> verts;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (incidence[i] >= 3) {
      remap[i] = static_cast<int>(verts.size());
      verts.push_back(points[i]);
    }
  for (auto &c : cycles)
    for (int &i : c)
      i = remap[i];
  return Polytope(std::move(verts), std::move(cycles));
}

HalfspaceSystem::HalfspaceSystem(std::vector<UnitVector> normals, std::vector<double> offsets)
    : normals_(std::move(normals)), offsets_(std::move(offsets)) {
  if (normals_.size() != offsets_.size())
    throw InvalidInput("normals and offsets differ in length");
  for (double h : offsets_)
    if (!std::isfinite(h))
      throw InvalidInput("non-finite offset");
  std::vector<Vec3> n;
  n.reserve(normals_.size());
  for (const auto &u : normals_)
    n.push_back(u.vec());
  const auto cc = chebyshevCenter(n, offsets_);
  if (cc.status == ChebyshevCenter::Status::Unbounded)
    throw InvalidInput("unbounded system");
  double scale = cc.center.norm();
  for (double h : offsets_)
    scale = std::max(scale, std::abs(h));
  if (!(cc.radius > 1e-10 * std::max(scale, 1e-300)))
    throw InvalidInput("infeasible system");
  center_ = cc.center;
  radius_ = cc.radius;
}

HalfspaceSystem HalfspaceSystem::fromPolytope(const Polytope &p) {
  return HalfspaceSystem(p.facetNormals(), p.facetOffsets());
}

HalfspaceResult halfspaceIntersectionDetailed(const HalfspaceSystem &h) {
  const Vec3 c = h.interiorPoint();
  const auto &ns = h.normals();
  const auto &hs = h.offsets();
  std::vector<Vec3> dual;
  dual.reserve(ns.size());
  for (std::size_t j = 0; j < ns.size(); ++j)
    dual.push_back(ns[j].vec() / (hs[j] - ns[j].dot(c)));

  HullTriangles tri;
  try {
    tri = quickhull(dual);
  } catch (const InvalidInput &) {
    throw InvalidInput("unbounded system");
  }
  std::vector<Vec3> primal;
  primal.reserve(tri.triangles.size());
  for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
    if (!(tri.offsets[t] > 0.0))
      throw InvalidInput("unbounded system");
    primal.push_back(c + tri.normals[t] / tri.offsets[t]);
  }
  // Degenerate vertices (more than three planes) appear several times.
  double diam = 0.0;
  for (const auto &p : primal)
    diam = std::max(diam, (p - c).norm());
  const double tol = 1e-11 * std::max(diam, 1e-300);
  std::vector<Vec3> unique;
  std::unordered_map<std::uint64_t, std::vector<int>> grid;
  auto cell = [&](double x) { return static_cast<std::int64_t>(std::floor(x / (4.0 * tol))); };
  for (const auto &p : primal) {
    const std::int64_t cx = cell(p.x()), cy = cell(p.y()), cz = cell(p.z());
    bool dup = false;
    for (int dx = -1; dx <= 1 && !dup; ++dx)
      for (int dy = -1; dy <= 1 && !dup; ++dy)
        for (int dz = -1; dz <= 1 && !dup; ++dz) {
          const std::uint64_t k = static_cast<std::uint64_t>((cx + dx) * 73856093) ^
                                  static_cast<std::uint64_t>((cy + dy) * 19349663) ^
                                  static_cast<std::uint64_t>((cz + dz) * 83492791);
          auto it = grid.find(k);
          if (it == grid.end())
            continue;
          for (int idx : it->second)
            if ((unique[idx] - p).norm() <= tol) {
              dup = true;
              break;
            }
        }
    if (dup)
      continue;
    const std::uint64_t k = static_cast<std::uint64_t>(cx * 73856093) ^ static_cast<std::uint64_t>(cy * 19349663) ^
                            static_cast<std::uint64_t>(cz * 83492791);
    grid[k].push_back(static_cast<int>(unique.size()));
    unique.push_back(p);
  }

  Polytope poly = convexHullPolytope(unique);
  // drop slivers
  std::vector<std::vector<int>> keep;
  for (std::size_t j = 0; j < poly.facetCount(); ++j)
    if (poly.facetAreas()[j] >= 1e-12)
      keep.push_back(poly.facets()[j]);
  if (keep.size() != poly.facetCount())
    poly = Polytope(poly.vertices(), std::move(keep));

  HalfspaceResult out;
  out.sourcePlane.resize(poly.facetCount(), -1);
  for (std::size_t f = 0; f < poly.facetCount(); ++f) {
    const UnitVector &nf = poly.facetNormals()[f];
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < ns.size(); ++j) {
      const double score = angleBetween(nf, ns[j]) * (1.0 + diam) + std::abs(hs[j] - poly.facetOffsets()[f]);
      if (score < best) {
        best = score;
        out.sourcePlane[f] = static_cast<int>(j);
      }
    }
  }
  out.polytope = std::move(poly);
  return out;
}

Polytope halfspaceIntersection(const HalfspaceSystem &h) { return halfspaceIntersectionDetailed(h).polytope; }

DiscreteMeasure surfaceMeasure(const Polytope &p) {
  std::vector<Atom> atoms;
  atoms.reserve(p.facetCount());
  for (std::size_t j = 0; j < p.facetCount(); ++j)
    atoms.push_back({p.facetNormals()[j], p.facetAreas()[j]});
  return DiscreteMeasure(atoms);
}

GaussPreimage gaussPreimage(const Polytope &p, const std::function<bool(const UnitVector &)> &region) {
  GaussPreimage g;
  for (std::size_t j = 0; j < p.facetCount(); ++j)
    if (region(p.facetNormals()[j])) {
      g.facets.push_back(static_cast<int>(j));
      g.area += p.facetAreas()[j];
    }
  return g;
}

double hausdorffDistance(const Polytope &a, const Polytope &b) {
  double d = 0.0;
  for (const auto &v : a.vertices())
    d = std::max(d, b.distanceTo(v));
  for (const auto &v : b.vertices())
    d = std::max(d, a.distanceTo(v));
  return d;
}

Polytope unitCube(const Vec3 &center) {
  std::vector<Vec3> v;
  for (int i = 0; i < 8; ++i)
    v.push_back(center + Vec3((i & 1) ? 0.5 : -0.5, (i & 2) ? 0.5 : -0.5, (i & 4) ? 0.5 : -0.5));
  return convexHullPolytope(v);
}

Polytope regularTetrahedron(double edge) {
  const double s = edge / (2.0 * std::sqrt(2.0));
  const std::vector<Vec3> v{{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
  return convexHullPolytope(v);
}

} // namespace surfmeas
