#include "surfmeas/errors.hpp"
#include "surfmeas/polytope.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

namespace surfmeas {

namespace {

// Tokens of an OFF file with '#' comments removed.
std::vector<std::string> tokenize(const std::string &text) {
  std::vector<std::string> out;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (auto pos = line.find('#'); pos != std::string::npos)
      line.erase(pos);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok)
      out.push_back(tok);
  }
  return out;
}

double toDouble(const std::string &s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception &) {
    throw InvalidInput("malformed OFF: bad number '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v))
    throw InvalidInput("malformed OFF: bad number '" + s + "'");
  return v;
}

long toIndex(const std::string &s) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception &) {
    throw InvalidInput("malformed OFF: bad integer '" + s + "'");
  }
  if (used != s.size() || v < 0)
    throw InvalidInput("malformed OFF: bad integer '" + s + "'");
  return v;
}

} // namespace

Polytope readOFF(const std::string &text) {
  const auto tok = tokenize(text);
  std::size_t k = 0;
  auto next = [&]() -> const std::string & {
    if (k >= tok.size())
      throw InvalidInput("malformed OFF: unexpected end of input");
    return tok[k++];
  };
  if (next() != "OFF")
    throw InvalidInput("malformed OFF: missing header");
  const long nv = toIndex(next());
  const long nf = toIndex(next());
  toIndex(next());
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(nv));
  for (long i = 0; i < nv; ++i) {
    const double x = toDouble(next());
    const double y = toDouble(next());
    const double z = toDouble(next());
    pts.emplace_back(x, y, z);
  }
  std::vector<std::vector<int>> faces;
  for (long f = 0; f < nf; ++f) {
    const long m = toIndex(next());
    std::vector<int> cyc;
    for (long q = 0; q < m; ++q) {
      const long idx = toIndex(next());
      if (idx >= nv)
        throw InvalidInput("malformed OFF: face index out of range");
      cyc.push_back(static_cast<int>(idx));
    }
    faces.push_back(std::move(cyc));
  }

  Polytope hull = convexHullPolytope(pts);
  if (hull.vertices().size() != pts.size())
    throw InvalidInput("non-convex vertex set");

  // Keep the file's faces when they describe the hull facets exactly.
  if (faces.size() == hull.facetCount()) {
    std::set<std::vector<int>> want;
    for (const auto &f : hull.facets()) {
      auto s = f;
      std::sort(s.begin(), s.end());
      want.insert(s);
    }
    bool same = true;
    for (const auto &f : faces) {
      auto s = f;
      std::sort(s.begin(), s.end());
      if (!want.count(s)) {
        same = false;
        break;
      }
    }
    if (same) {
      const Vec3 c = hull.centroid();
      for (auto &f : faces) {
        Vec3 a = Vec3::Zero();
        for (std::size_t i = 0; i < f.size(); ++i)
          a += (pts[f[i]] - c).cross(pts[f[(i + 1) % f.size()]] - c);
        if (a.dot(pts[f[0]] - c) < 0.0)
          std::reverse(f.begin(), f.end());
      }
      return Polytope(pts, std::move(faces));
    }
  }
  return hull;
}

std::string writeOFF(const Polytope &p) {
  std::string out = "OFF\n";
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu %zu %d\n", p.vertices().size(), p.facetCount(), p.edgeCount());
  out += buf;
  for (const auto &v : p.vertices()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    out += buf;
  }
  for (const auto &f : p.facets()) {
    out += std::to_string(f.size());
    for (int i : f)
      out += " " + std::to_string(i);
    out += "\n";
  }
  return out;
}

} // namespace surfmeas
