#include "surfmeas/graph_body.hpp"

#include "surfmeas/errors.hpp"

#include <algorithm>

namespace surfmeas {

GraphBody::GraphBody(int n, std::vector<double> heights, double maxHeight)
    : n_(n), heights_(std::move(heights)), maxHeight_(maxHeight) {
  if (n_ < 2)
    throw InvalidInput("graph grid needs at least 2 cells");
  if (heights_.size() != static_cast<std::size_t>(n_ + 1) * (n_ + 1))
    throw InvalidInput("graph grid size mismatch");
  if (!(maxHeight_ > 0.0))
    throw InvalidInput("graph height bound must be positive");
  for (double v : heights_)
    if (!std::isfinite(v))
      throw InvalidInput("non-finite graph height");
}

GraphBody GraphBody::sample(int n, double maxHeight, const std::function<double(double, double)> &u) {
  std::vector<double> h(static_cast<std::size_t>(n + 1) * (n + 1));
  const double d = 2.0 / n;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      h[static_cast<std::size_t>(j) * (n + 1) + i] = u(-1.0 + i * d, -1.0 + j * d);
  return GraphBody(n, std::move(h), maxHeight);
}

double GraphBody::height(double x, double y) const {
  const double fx = std::clamp((x + 1.0) / spacing(), 0.0, static_cast<double>(n_));
  const double fy = std::clamp((y + 1.0) / spacing(), 0.0, static_cast<double>(n_));
  const int i = std::min(static_cast<int>(fx), n_ - 1);
  const int j = std::min(static_cast<int>(fy), n_ - 1);
  const double a = fx - i, b = fy - j;
  return (1 - a) * (1 - b) * node(i, j) + a * (1 - b) * node(i + 1, j) + (1 - a) * b * node(i, j + 1) +
         a * b * node(i + 1, j + 1);
}

bool GraphBody::contains(const Vec3 &p, double tol) const {
  if (p.x() * p.x() + p.y() * p.y() > (1.0 + tol) * (1.0 + tol))
    return false;
  if (p.z() < -tol)
    return false;
  return p.z() <= height(p.x(), p.y()) + tol;
}

double GraphBody::concavityViolation() const {
  const double d = spacing();
  auto inside = [&](int i, int j) {
    const double x = -1.0 + i * d, y = -1.0 + j * d;
    return i >= 0 && j >= 0 && i <= n_ && j <= n_ && x * x + y * y <= 1.0;
  };
  double worst = 0.0;
  const int dirs[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
  for (int j = 0; j <= n_; ++j)
    for (int i = 0; i <= n_; ++i) {
      if (!inside(i, j))
        continue;
      for (const auto &dd : dirs) {
        const int i0 = i - dd[0], j0 = j - dd[1], i1 = i + dd[0], j1 = j + dd[1];
        if (!inside(i0, j0) || !inside(i1, j1))
          continue;
        worst = std::max(worst, 0.5 * (node(i0, j0) + node(i1, j1)) - node(i, j));
      }
    }
  return worst;
}

void GraphBody::validate() const {
  const double d = spacing();
  for (int j = 0; j <= n_; ++j)
    for (int i = 0; i <= n_; ++i) {
      const double x = -1.0 + i * d, y = -1.0 + j * d;
      if (x * x + y * y > 1.0)
        continue;
      if (node(i, j) < -1e-12 || node(i, j) > maxHeight_ + 1e-12)
        throw InvalidInput("invalid body: graph height outside [0, M]");
    }
  if (concavityViolation() > 1e-9)
    throw InvalidInput("invalid body: graph is not concave");
}

std::vector<Vec3> GraphBody::boundarySamples(int rim) const {
  std::vector<Vec3> pts;
  const double d = spacing();
  for (int j = 0; j <= n_; ++j)
    for (int i = 0; i <= n_; ++i) {
      const double x = -1.0 + i * d, y = -1.0 + j * d;
      if (x * x + y * y < 1.0)
        pts.emplace_back(x, y, node(i, j));
    }
  for (int k = 0; k < rim; ++k) {
    const double a = 2.0 * kPi * k / rim;
    const double x = std::cos(a), y = std::sin(a);
    pts.emplace_back(x, y, height(x, y));
    pts.emplace_back(x, y, 0.0);
  }
  return pts;
}

} // namespace surfmeas
