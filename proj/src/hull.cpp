#include "surfmeas/hull.hpp"

#include "surfmeas/errors.hpp"

#include <algorithm>
#include <limits>

namespace surfmeas {

namespace {

struct Face {
  std::array<int, 3> v;
  std::array<int, 3> nb; // neighbour across edge (v[i], v[i+1])
  Vec3 normal;
  double offset = 0.0;
  std::vector<int> outside;
  bool alive = true;
  int visit = -1;
  bool visible = false;
};

class Quickhull {
public:
  explicit Quickhull(std::span<const Vec3> pts) : pts_(pts) {
    double sx = 0, sy = 0, sz = 0;
    for (const auto &p : pts_) {
      sx = std::max(sx, std::abs(p.x()));
      sy = std::max(sy, std::abs(p.y()));
      sz = std::max(sz, std::abs(p.z()));
    }
    eps_ = 3.0 * std::numeric_limits<double>::epsilon() * (sx + sy + sz) * 16.0;
  }

  HullTriangles run() {
    if (pts_.size() < 4)
      throw InvalidInput("convex hull needs at least 4 points");
    initialSimplex();
    int stamp = 0;
    for (;;) {
      int fi = -1;
      for (std::size_t i = cursor_; i < faces_.size(); ++i)
        if (faces_[i].alive && !faces_[i].outside.empty()) {
          fi = static_cast<int>(i);
          break;
        }
      if (fi < 0) {
        // rescan from the start once before finishing
        cursor_ = 0;
        for (std::size_t i = 0; i < faces_.size(); ++i)
          if (faces_[i].alive && !faces_[i].outside.empty()) {
            fi = static_cast<int>(i);
            break;
          }
        if (fi < 0)
          break;
      }
      cursor_ = static_cast<std::size_t>(fi);
      addPoint(fi, ++stamp);
    }
    HullTriangles out;
    out.tolerance = eps_;
    for (const auto &f : faces_) {
      if (!f.alive)
        continue;
      out.triangles.push_back(f.v);
      out.normals.push_back(f.normal);
      out.offsets.push_back(f.offset);
    }
    return out;
  }

private:
  double dist(const Face &f, int p) const { return f.normal.dot(pts_[p]) - f.offset; }

  int makeFace(int a, int b, int c) {
    Face f;
    f.v = {a, b, c};
    f.nb = {-1, -1, -1};
    Vec3 n = (pts_[b] - pts_[a]).cross(pts_[c] - pts_[a]);
    const double len = n.norm();
    f.normal = len > 0.0 ? Vec3(n / len) : Vec3(0, 0, 0);
    // centroid of the three points gives a slightly better offset
    f.offset = f.normal.dot((pts_[a] + pts_[b] + pts_[c]) / 3.0);
    faces_.push_back(std::move(f));
    return static_cast<int>(faces_.size()) - 1;
  }

  void initialSimplex() {
    const int n = static_cast<int>(pts_.size());
    std::array<int, 6> ext{0, 0, 0, 0, 0, 0};
    for (int i = 0; i < n; ++i)
      for (int d = 0; d < 3; ++d) {
        if (pts_[i][d] < pts_[ext[2 * d]][d])
          ext[2 * d] = i;
        if (pts_[i][d] > pts_[ext[2 * d + 1]][d])
          ext[2 * d + 1] = i;
      }
    int i0 = ext[0], i1 = ext[1];
    double best = -1.0;
    for (int a = 0; a < 6; ++a)
      for (int b = a + 1; b < 6; ++b) {
        const double d = (pts_[ext[a]] - pts_[ext[b]]).squaredNorm();
        if (d > best) {
          best = d;
          i0 = ext[a];
          i1 = ext[b];
        }
      }
    if (std::sqrt(best) <= eps_)
      throw InvalidInput("degenerate point set: all points coincide");
    const Vec3 dir = (pts_[i1] - pts_[i0]).normalized();
    int i2 = -1;
    best = eps_;
    for (int i = 0; i < n; ++i) {
      const Vec3 w = pts_[i] - pts_[i0];
      const double d = (w - w.dot(dir) * dir).norm();
      if (d > best) {
        best = d;
        i2 = i;
      }
    }
    if (i2 < 0)
      throw InvalidInput("degenerate point set: collinear");
    const Vec3 pn = (pts_[i1] - pts_[i0]).cross(pts_[i2] - pts_[i0]).normalized();
    int i3 = -1;
    best = eps_;
    for (int i = 0; i < n; ++i) {
      const double d = std::abs(pn.dot(pts_[i] - pts_[i0]));
      if (d > best) {
        best = d;
        i3 = i;
      }
    }
    if (i3 < 0)
      throw InvalidInput("degenerate point set: coplanar");
    if (pn.dot(pts_[i3] - pts_[i0]) > 0.0)
      std::swap(i1, i2);
    // now i3 lies below the plane (i0,i1,i2) whose normal points outward
    const int f0 = makeFace(i0, i1, i2);
    const int f1 = makeFace(i0, i3, i1);
    const int f2 = makeFace(i1, i3, i2);
    const int f3 = makeFace(i2, i3, i0);
    auto link = [&](int f, int a, int b, int g) {
      for (int k = 0; k < 3; ++k)
        if (faces_[f].v[k] == a && faces_[f].v[(k + 1) % 3] == b) {
          faces_[f].nb[k] = g;
          return;
        }
    };
    const std::array<int, 4> all{f0, f1, f2, f3};
    for (int f : all)
      for (int k = 0; k < 3; ++k) {
        const int a = faces_[f].v[k], b = faces_[f].v[(k + 1) % 3];
        for (int g : all)
          if (g != f)
            for (int q = 0; q < 3; ++q)
              if (faces_[g].v[q] == b && faces_[g].v[(q + 1) % 3] == a)
                link(f, a, b, g);
      }
    for (int i = 0; i < n; ++i) {
      if (i == i0 || i == i1 || i == i2 || i == i3)
        continue;
      assignOutside(i, all.data(), 4);
    }
  }

  void assignOutside(int p, const int *candidates, std::size_t count) {
    int bestFace = -1;
    double bestDist = eps_;
    for (std::size_t k = 0; k < count; ++k) {
      const double d = dist(faces_[candidates[k]], p);
      if (d > bestDist) {
        bestDist = d;
        bestFace = candidates[k];
      }
    }
    if (bestFace >= 0)
      faces_[bestFace].outside.push_back(p);
  }

  void addPoint(int fi, int stamp) {
    Face &f = faces_[fi];
    int eye = f.outside.front();
    double far = dist(f, eye);
    for (int p : f.outside) {
      const double d = dist(f, p);
      if (d > far) {
        far = d;
        eye = p;
      }
    }
    // horizon as an ordered loop of (face, edge) pairs on non-visible faces
    horizon_.clear();
    visibleList_.clear();
    findHorizon(eye, fi, 0, stamp);

    std::vector<int> orphans;
    for (int vf : visibleList_) {
      for (int p : faces_[vf].outside)
        if (p != eye)
          orphans.push_back(p);
      faces_[vf].outside.clear();
      faces_[vf].alive = false;
    }

    std::vector<int> created;
    created.reserve(horizon_.size());
    for (const auto &[hf, he] : horizon_) {
      // hf is the visible face; its edge he borders a hidden face
      const int a = faces_[hf].v[he], b = faces_[hf].v[(he + 1) % 3];
      const int hidden = faces_[hf].nb[he];
      const int nf = makeFace(a, b, eye);
      faces_[nf].nb[0] = hidden;
      for (int q = 0; q < 3; ++q)
        if (faces_[hidden].v[q] == b && faces_[hidden].v[(q + 1) % 3] == a)
          faces_[hidden].nb[q] = nf;
      created.push_back(nf);
    }
    // link the fan: edge (b, eye) meets the face starting at b, edge (eye, a)
    // the face ending at a
    for (int cur : created)
      for (int other : created) {
        if (faces_[other].v[0] == faces_[cur].v[1])
          faces_[cur].nb[1] = other;
        if (faces_[other].v[1] == faces_[cur].v[0])
          faces_[cur].nb[2] = other;
      }
    for (int p : orphans)
      assignOutside(p, created.data(), created.size());
  }

  void findHorizon(int eye, int fi, int startEdge, int stamp) {
    // iterative DFS that preserves the counter-clockwise edge order
    struct Frame {
      int face;
      int edge;
      int done;
    };
    std::vector<Frame> stack;
    faces_[fi].visit = stamp;
    faces_[fi].visible = true;
    visibleList_.push_back(fi);
    stack.push_back({fi, startEdge, 0});
    while (!stack.empty()) {
      Frame &fr = stack.back();
      if (fr.done == 3) {
        stack.pop_back();
        continue;
      }
      const int e = (fr.edge + fr.done) % 3;
      ++fr.done;
      const int cur = fr.face;
      const int nb = faces_[cur].nb[e];
      if (faces_[nb].visit == stamp) {
        if (!faces_[nb].visible)
          horizon_.push_back({cur, e});
        continue;
      }
      if (dist(faces_[nb], eye) > eps_) {
        faces_[nb].visit = stamp;
        faces_[nb].visible = true;
        visibleList_.push_back(nb);
        // enter the neighbour through the shared edge, continue after it
        int back = 0;
        for (int q = 0; q < 3; ++q)
          if (faces_[nb].nb[q] == cur)
            back = q;
        stack.push_back({nb, (back + 1) % 3, 0});
      } else {
        faces_[nb].visit = stamp;
        faces_[nb].visible = false;
        horizon_.push_back({cur, e});
      }
    }
  }

  std::span<const Vec3> pts_;
  double eps_;
  std::vector<Face> faces_;
  std::vector<std::pair<int, int>> horizon_;
  std::vector<int> visibleList_;
  std::size_t cursor_ = 0;
};

} // namespace

HullTriangles quickhull(std::span<const Vec3> points) { return Quickhull(points).run(); }

} // namespace surfmeas
