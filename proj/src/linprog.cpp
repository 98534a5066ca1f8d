#include "surfmeas/linprog.hpp"

#include "surfmeas/errors.hpp"

#include <limits>
#include <vector>

namespace surfmeas {

namespace {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

// Columns 0..m-1 are the dual variables yⱼ with column (nⱼ, 1); columns
// m..m+3 are artificials with identity columns.
class DualSimplex {
public:
  DualSimplex(std::span<const Vec3> normals, std::span<const double> offsets)
      : normals_(normals), offsets_(offsets), m_(normals.size()) {}

  ChebyshevCenter solve() {
    const Vec4 b(0.0, 0.0, 0.0, 1.0);
    for (int i = 0; i < 4; ++i)
      basis_[i] = m_ + static_cast<std::size_t>(i);
    refactor();

    // phase 1: drive artificials out
    runPhase(true);
    const Vec4 xb = binv_ * b;
    double artificial = 0.0;
    for (int i = 0; i < 4; ++i)
      if (basis_[i] >= m_)
        artificial += xb[i];
    if (artificial > 1e-11)
      return {ChebyshevCenter::Status::Unbounded, Vec3::Zero(), std::numeric_limits<double>::infinity()};
    evictArtificials();

    runPhase(false);
    Vec4 cb;
    for (int i = 0; i < 4; ++i)
      cb[i] = cost(basis_[i], false);
    const Vec4 lambda = binv_.transpose() * cb;
    ChebyshevCenter out;
    out.center = lambda.head<3>();
    out.radius = lambda[3];
    // clean up round-off so the reported radius is attained exactly
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m_; ++j)
      worst = std::min(worst, offsets_[j] - normals_[j].dot(out.center));
    out.radius = worst;
    return out;
  }

private:
  Vec4 column(std::size_t j) const {
    if (j < m_)
      return {normals_[j].x(), normals_[j].y(), normals_[j].z(), 1.0};
    Vec4 e = Vec4::Zero();
    e[static_cast<int>(j - m_)] = 1.0;
    return e;
  }
  double cost(std::size_t j, bool phase1) const {
    if (phase1)
      return j >= m_ ? 1.0 : 0.0;
    return j < m_ ? offsets_[j] : 0.0;
  }
  void refactor() {
    Mat4 B;
    for (int i = 0; i < 4; ++i)
      B.col(i) = column(basis_[i]);
    binv_ = B.inverse();
  }
  bool inBasis(std::size_t j) const {
    for (auto k : basis_)
      if (k == j)
        return true;
    return false;
  }

  void runPhase(bool phase1) {
    const Vec4 b(0.0, 0.0, 0.0, 1.0);
    const std::size_t limit = 50 * (m_ + 10);
    std::size_t degenerate = 0;
    for (std::size_t iter = 0; iter < limit; ++iter) {
      Vec4 cb;
      for (int i = 0; i < 4; ++i)
        cb[i] = cost(basis_[i], phase1);
      const Vec4 pi = binv_.transpose() * cb;
      // Dantzig pricing, falling back to Bland after a run of degenerate pivots
      const bool bland = degenerate > 20;
      std::size_t enter = m_ + 4;
      double best = -1e-12;
      const std::size_t ncols = phase1 ? m_ + 4 : m_;
      for (std::size_t j = 0; j < ncols; ++j) {
        if (inBasis(j))
          continue;
        const double scale = 1.0 + std::abs(cost(j, phase1));
        const double rc = cost(j, phase1) - pi.dot(column(j));
        if (rc < best * scale) {
          enter = j;
          if (bland)
            break;
          best = rc / scale;
        }
      }
      if (enter == m_ + 4)
        return;
      const Vec4 d = binv_ * column(enter);
      const Vec4 xb = binv_ * b;
      int leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < 4; ++i) {
        if (d[i] > 1e-12) {
          const double r = std::max(xb[i], 0.0) / d[i];
          if (r < ratio - 1e-15 || (r <= ratio + 1e-15 && leave >= 0 && basis_[i] < basis_[leave])) {
            ratio = r;
            leave = i;
          }
        }
      }
      if (leave < 0)
        throw InvalidInput("chebyshev LP: unbounded dual ray");
      degenerate = ratio <= 1e-14 ? degenerate + 1 : 0;
      basis_[leave] = enter;
      refactor();
    }
    throw NoConvergence("chebyshev LP: iteration limit", 0.0);
  }

  void evictArtificials() {
    for (int i = 0; i < 4; ++i) {
      if (basis_[i] < m_)
        continue;
      // artificial at zero level: swap in any real column with a nonzero pivot
      for (std::size_t j = 0; j < m_; ++j) {
        if (inBasis(j))
          continue;
        const Vec4 d = binv_ * column(j);
        if (std::abs(d[i]) > 1e-9) {
          basis_[i] = j;
          refactor();
          break;
        }
      }
    }
  }

  std::span<const Vec3> normals_;
  std::span<const double> offsets_;
  std::size_t m_;
  std::array<std::size_t, 4> basis_{};
  Mat4 binv_;
};

} // namespace

ChebyshevCenter chebyshevCenter(std::span<const Vec3> normals, std::span<const double> offsets) {
  if (normals.size() != offsets.size())
    throw InvalidInput("normals and offsets differ in length");
  if (normals.size() < 4)
    return {ChebyshevCenter::Status::Unbounded, Vec3::Zero(), std::numeric_limits<double>::infinity()};
  return DualSimplex(normals, offsets).solve();
}

} // namespace surfmeas
