#pragma once

#include "surfmeas/geometry.hpp"

#include <functional>
#include <vector>

namespace surfmeas {

/// Subgraph {(x, y, z) : x² + y² ≤ 1, 0 ≤ z ≤ u(x, y)} of a concave height
/// function sampled on the (n+1)² node grid over [−1, 1]². Nodes outside the
/// disk only feed the boundary gradients.
class GraphBody {
public:
  /// heights are row-major, heights[j * (n + 1) + i] = u(−1 + i h, −1 + j h).
  GraphBody(int n, std::vector<double> heights, double maxHeight);
  static GraphBody sample(int n, double maxHeight, const std::function<double(double, double)> &u);

  int cells() const noexcept { return n_; }
  double spacing() const noexcept { return 2.0 / n_; }
  double maxHeight() const noexcept { return maxHeight_; }
  double node(int i, int j) const { return heights_[static_cast<std::size_t>(j) * (n_ + 1) + i]; }
  const std::vector<double> &heights() const noexcept { return heights_; }

  /// Bilinear interpolation of the node heights.
  double height(double x, double y) const;
  bool contains(const Vec3 &p, double tol = 0.0) const;

  /// Largest violation of u(m) ≥ ½(u(p) + u(q)) over node triples p, m, q on
  /// rows, columns and diagonals inside the disk.
  double concavityViolation() const;
  void validate() const;

  /// Surface samples: top surface nodes inside the disk, the rim and the
  /// base disk.
  std::vector<Vec3> boundarySamples(int rim = 256) const;

private:
  int n_;
  std::vector<double> heights_;
  double maxHeight_;
};

} // namespace surfmeas
